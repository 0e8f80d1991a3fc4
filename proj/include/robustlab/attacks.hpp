#pragma once

// Contamination sequences (Y_m) built from equivariance: shift a block of
// observations, rescale a block of covariates, pile points onto one value, or
// send a single observation off to infinity.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "robustlab/core.hpp"
#include "robustlab/estimators.hpp"

namespace robustlab {

enum class AttackKind { ShiftHalf, ScaleHalfX, PointMass, SingleOutlierEscape, Custom };

std::string_view to_string(AttackKind k);
AttackKind parse_attack_kind(std::string_view text);

/// Magnitudes above this are never generated.
inline constexpr double kMagnitudeCap = 1e12;

struct AttackSpec {
  AttackKind kind = AttackKind::ShiftHalf;
  ContaminationMask mask{std::vector<bool>{}};
  double c0 = 1e3;
  double gamma = 10.0;
  std::size_t steps = 6;
  /// +1 applies g, -1 applies g^-1.
  int direction = 1;
  /// Point-mass location; the median of the attacked sample when unset.
  std::optional<double> target;
  /// Recorded when the mask was drawn at random.
  std::optional<std::uint64_t> seed;
  /// Custom attacks: the outlier samples Y_1..Y_M themselves.
  std::vector<Sample> custom_outliers;

  /// c0 * gamma^m for m = 1..steps.
  double magnitude(std::size_t m) const;
  /// Throws InvalidArgument when the spec cannot act on a sample of size n.
  void validate(std::size_t n) const;
  std::string describe() const;
};

struct AttackSequence {
  AttackSpec spec;
  Sample clean;
  /// contaminate(clean, Y_m, spec.mask) for m = 1..M.
  std::vector<Sample> samples;
  std::vector<double> magnitudes;
  /// True when steps were dropped because they would pass kMagnitudeCap.
  bool capped = false;

  std::size_t size() const { return samples.size(); }
};

/// Defaults: c0 = 1e3, gamma = 10, M = 6, i.e. magnitudes 1e4..1e9.
AttackSpec shift_half_spec(ContaminationMask mask, int direction = 1, double c0 = 1e3,
                           double gamma = 10.0, std::size_t steps = 6);
AttackSpec scale_half_x_spec(ContaminationMask mask, int direction = 1, double c0 = 1e3,
                             double gamma = 10.0, std::size_t steps = 6);
AttackSpec point_mass_spec(ContaminationMask mask, std::optional<double> target = std::nullopt,
                           std::size_t steps = 6);
AttackSpec single_outlier_escape_spec(std::size_t n, std::size_t position, double c0 = 1e3,
                                      double gamma = 10.0, std::size_t steps = 6, int direction = 1);

/// Masked entries become x_i + direction * c0 * gamma^m.
AttackSequence shift_half_attack(const Sample& x, const ContaminationMask& mask, double c0,
                                 double gamma, std::size_t steps, int direction);
/// Masked covariates become x_i * (c0 * gamma^m)^direction; responses untouched.
AttackSequence scale_half_x_attack(const Sample& x, const ContaminationMask& mask, double c0,
                                   double gamma, std::size_t steps, int direction);
/// Masked entries become `target` at every one of the M steps.
AttackSequence point_mass_attack(const Sample& x, const ContaminationMask& mask, double target,
                                 std::size_t steps = 6);
/// Entry `position` becomes c0 * gamma^m; everything else stays clean.
AttackSequence single_outlier_escape(const Sample& x, std::size_t position, double c0 = 1e3,
                                     double gamma = 10.0, std::size_t steps = 6);

/// Materializes any spec against a clean sample.
AttackSequence generate_attack(const AttackSpec& spec, const Sample& x);

/// Canonical attacks for the estimator's equivariance tags with s outliers
/// placed on the first s positions:
///   translation-equivariant     -> shift-half, both directions
///   scale-equivariant           -> point-mass at the median + single-outlier escape
///   x-scale-inverse-equivariant -> scale-half-x, both directions
///   affine-invariant            -> single-outlier escape
/// Directions that would leave a nonnegative domain are omitted. Throws
/// InvalidArgument when the estimator carries no tag.
std::vector<AttackSpec> build_equivariant_attack(const EstimatorDescriptor& desc, const Sample& x,
                                                 std::size_t s);

}  // namespace robustlab

#pragma once

// Group actions on samples and checks of the equivariance identities they
// induce on estimators.

#include <optional>
#include <string>
#include <vector>

#include "robustlab/core.hpp"
#include "robustlab/estimators.hpp"

namespace robustlab {

/// translate(c): x + c, scale(a): a x, affine(a, b): a x + b act on scalar
/// samples. x_scale(c): (c x, y) acts on the covariate of regression samples.
class GroupAction {
 public:
  enum class Kind { Translate, Scale, Affine, XScale };

  static GroupAction translate(double c);
  static GroupAction scale(double a);
  static GroupAction affine(double a, double b);
  static GroupAction x_scale(double c);

  Kind kind() const { return kind_; }
  /// Multiplicative part (1 for translations).
  double multiplier() const { return a_; }
  /// Additive part (0 for pure scalings).
  double offset() const { return b_; }

  double apply(double v) const { return a_ * v + b_; }
  std::string describe() const;

  friend bool operator==(const GroupAction&, const GroupAction&) = default;

 private:
  GroupAction(Kind kind, double a, double b) : kind_(kind), a_(a), b_(b) {}
  Kind kind_;
  double a_;
  double b_;
};

/// Elementwise image of the sample. The result keeps the sample's domain tag,
/// so e.g. a negative scaling of a nonnegative sample is rejected.
Sample apply_action(const GroupAction& g, const Sample& x);
GroupAction invert_action(const GroupAction& g);

struct IdentityReport {
  std::string identity;
  double max_discrepancy = 0.0;
  double tolerance = 0.0;
  std::size_t trials = 0;
  bool pass = false;
};

/// Evaluates the identity that defines `tag` for every action and reports the
/// worst discrepancy, measured as |lhs - rhs| / max(1, |rhs|) componentwise
/// (relative to |rhs| for the x-scale slope identity).
IdentityReport check_equivariance_tag(const Estimator& t, EquivarianceTag tag, const Sample& x,
                                      const std::vector<GroupAction>& actions,
                                      double tolerance = 1e-9);

/// T(x_1 + c, ..., x_k + c, x_{k+1}, ..., x_n) - T(x_1, ..., x_k, x_{k+1} - c, ..., x_n - c) = c
/// for n = 2k, halves taken in stored order. Discrepancy is absolute; the
/// default tolerance is 1e-9 * max(1, |c|).
IdentityReport check_translation_half_identity(const Estimator& t, const Sample& x, double c,
                                               std::optional<double> tolerance = std::nullopt);

/// slope(c x_1..c x_k, x_{k+1}..x_n) = slope(x_1..x_k, x_{k+1}/c..x_n/c) / c
/// for n = 2k. Discrepancy is relative to the larger side; default tolerance
/// is 1e-6.
IdentityReport check_glm_scaling_identity(const Estimator& t, const Sample& x, double c,
                                          double tolerance = 1e-6);

}  // namespace robustlab

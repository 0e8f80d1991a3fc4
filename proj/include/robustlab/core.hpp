#pragma once

// Domain types shared by every module: samples, contamination masks, value
// spaces and verdicts.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace robustlab {

/// Raised for malformed inputs: length mismatches, domain violations,
/// out-of-range parameters.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when an estimator's preconditions fail on a given sample
/// (zero variance, degenerate design, too few points).
class EstimatorError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Raised when an enumeration would exceed its evaluation budget.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Domain { Real, NonNegative, Regression };

std::string_view to_string(Domain d);
Domain parse_domain(std::string_view text);

struct RegressionPair {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const RegressionPair&, const RegressionPair&) = default;
};

/// Ordered, non-empty, finite collection of observations tagged with the
/// sample space it lives in. Scalar samples (Real, NonNegative) store values;
/// regression samples store (x, y) pairs.
class Sample {
 public:
  static Sample scalar(std::vector<double> values, Domain domain = Domain::Real);
  static Sample regression(std::vector<RegressionPair> pairs);

  std::size_t size() const { return is_regression() ? pairs_.size() : values_.size(); }
  Domain domain() const { return domain_; }
  bool is_regression() const { return domain_ == Domain::Regression; }

  /// Throws InvalidArgument on a regression sample.
  std::span<const double> values() const;
  /// Throws InvalidArgument on a scalar sample.
  std::span<const RegressionPair> pairs() const;

  friend bool operator==(const Sample&, const Sample&) = default;

 private:
  Sample() = default;
  Domain domain_ = Domain::Real;
  std::vector<double> values_;
  std::vector<RegressionPair> pairs_;
};

/// Indicator vector S over sample positions; count() is the number of
/// replaced observations.
class ContaminationMask {
 public:
  explicit ContaminationMask(std::vector<bool> flags);

  /// Positions 0..s-1 flagged.
  static ContaminationMask first(std::size_t n, std::size_t s);
  /// Positions n-s..n-1 flagged.
  static ContaminationMask last(std::size_t n, std::size_t s);
  /// s positions chosen uniformly at random by a seeded generator.
  static ContaminationMask random(std::size_t n, std::size_t s, std::uint64_t seed);

  std::size_t size() const { return flags_.size(); }
  std::size_t count() const { return count_; }
  bool operator[](std::size_t i) const { return flags_[i]; }
  const std::vector<bool>& flags() const { return flags_; }
  std::vector<std::size_t> indices() const;
  ContaminationMask complement() const;

  friend bool operator==(const ContaminationMask&, const ContaminationMask&) = default;

 private:
  std::vector<bool> flags_;
  std::size_t count_ = 0;
};

std::size_t outlier_count(const ContaminationMask& mask);

/// Observation i of the result is Y's where the mask is set, X's otherwise.
Sample contaminate(const Sample& clean, const Sample& outliers, const ContaminationMask& mask);

enum class PointClass { Interior, Boundary, Exterior };

std::string_view to_string(PointClass c);

/// The set of values an estimator can attain. Only the shapes needed by the
/// estimator catalog are representable; boundaries do not depend on the data.
class ValueSpace {
 public:
  enum class Kind { FullEuclidean, OpenHalfLine, ClosedHalfLine, ClosedInterval, Singleton };

  static ValueSpace full_euclidean(std::size_t dimension);
  /// (lower, inf); lower itself is the only boundary point.
  static ValueSpace open_half_line(double lower);
  /// [lower, inf); lower is attainable and is the only boundary point.
  static ValueSpace closed_half_line(double lower);
  static ValueSpace closed_interval(double lo, double hi);
  static ValueSpace singleton(std::vector<double> point);

  Kind kind() const { return kind_; }
  std::size_t dimension() const { return dimension_; }
  double lower() const { return lo_; }
  double upper() const { return hi_; }
  const std::vector<double>& point() const { return point_; }
  std::vector<std::vector<double>> boundary() const;

  friend bool operator==(const ValueSpace&, const ValueSpace&) = default;

 private:
  ValueSpace() = default;
  Kind kind_ = Kind::FullEuclidean;
  std::size_t dimension_ = 1;
  double lo_ = 0.0;
  double hi_ = 0.0;
  std::vector<double> point_;
};

std::string_view to_string(ValueSpace::Kind k);

/// `tolerance` widens boundary points to closed balls of that radius
/// (sup-norm); detectors use it because numerical limits never land exactly.
PointClass classify_point(std::span<const double> t, const ValueSpace& space, double tolerance = 0.0);

/// Closed interval on the real line; an unbounded end ignores its value.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool lo_unbounded = false;
  bool hi_unbounded = false;

  static Interval point(double v) { return {v, v, false, false}; }
  static Interval whole_line() { return {0.0, 0.0, true, true}; }

  bool contains(double t) const {
    return (lo_unbounded || lo <= t) && (t <= hi || hi_unbounded);
  }
  friend bool operator==(const Interval&, const Interval&) = default;
};

enum class Outcome {
  BrokenDivergence,
  BrokenBoundary,
  BrokenConstantLimit,
  BrokenXIndependentSet,
  NotBroken,
  Undecided,
};

std::string_view to_string(Outcome o);
bool is_broken(Outcome o);

/// Result of a breakdown detector together with the evidence it rests on.
struct Verdict {
  Outcome outcome = Outcome::Undecided;
  std::string reason;
  /// Last few trajectory values, flattened per step (divergence evidence).
  std::vector<std::vector<double>> trajectory_tail;
  /// Limit value t0 for converged or boundary outcomes.
  std::optional<std::vector<double>> limit;
  /// Distinct finite limits across a panel (constant-limit / limit-set).
  std::vector<std::vector<double>> limit_set;
  /// Per-member reachable hulls (x-independent-set outcomes).
  std::vector<std::vector<Interval>> reachable_hulls;

  bool broken() const { return is_broken(outcome); }
};

}  // namespace robustlab

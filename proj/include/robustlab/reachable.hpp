#pragma once

// Reachable value sets T_s(X): every value an estimator can take when s of
// the observations are replaced by arbitrary outliers while the rest of X is
// held fixed.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "robustlab/core.hpp"
#include "robustlab/estimators.hpp"

namespace robustlab {

enum class OracleStrategy {
  /// Exhaustive when within budget, otherwise monotone extremes when the
  /// estimator is monotone, otherwise BudgetExceeded.
  Auto,
  /// Every mask with exactly s flags times every outlier tuple on the grid.
  /// Permutation-symmetric estimators enumerate nondecreasing tuples only.
  Exhaustive,
  /// Every mask, outliers all at the low or all at the high grid end. Exact
  /// for estimators that are nondecreasing and continuous in each observation.
  MonotoneExtremes,
};

std::string_view to_string(OracleStrategy s);
OracleStrategy parse_oracle_strategy(std::string_view text);

struct OracleOptions {
  /// Outliers range over [-box, box], or [0, box] on a nonnegative domain.
  double box = 1e3;
  /// Grid points per outlier coordinate.
  std::size_t grid = 201;
  std::uint64_t budget = 10'000'000;
  /// Merge gap is 2 grid steps times this factor.
  double lipschitz_slack = 1.0;
  OracleStrategy strategy = OracleStrategy::Auto;
  /// Worker threads over masks; 0 picks the hardware concurrency.
  unsigned threads = 0;

  double grid_low(Domain d) const { return d == Domain::NonNegative ? 0.0 : -box; }
  double grid_step(Domain d) const { return (box - grid_low(d)) / static_cast<double>(grid - 1); }
  double merge_gap(Domain d) const { return 2.0 * grid_step(d) * lipschitz_slack; }
};

struct ReachableSet {
  enum class Provenance { Analytic, Oracle };

  /// Sorted, pairwise disjoint.
  std::vector<Interval> intervals;
  Provenance provenance = Provenance::Analytic;

  // Oracle metadata.
  double box = 0.0;
  double grid_low = 0.0;
  std::size_t grid = 0;
  OracleStrategy strategy = OracleStrategy::Auto;
  std::uint64_t evaluations = 0;
  /// Evaluations skipped because the estimator's preconditions failed.
  std::uint64_t failures = 0;

  /// Smallest interval containing every member.
  Interval hull() const;
  bool contains(double t) const;
};

std::string_view to_string(ReachableSet::Provenance p);

/// Number of outlier configurations the exhaustive strategy would evaluate.
/// Saturates at UINT64_MAX.
std::uint64_t exhaustive_evaluation_count(std::size_t n, std::size_t s, std::size_t grid,
                                          bool permutation_symmetric);

/// Grid enumeration of T_s(X) for a scalar one-dimensional estimator. The
/// result is box-truncated and never flags an end as unbounded. s = 0 yields
/// the singleton {T(X)}.
ReachableSet reachable_oracle(const Estimator& t, const Sample& x, std::size_t s,
                              const OracleOptions& options = {});

/// [x_(k-s), x_(k+s)] for n = 2k - 1 and 0 <= s < k; the whole line at s = k.
ReachableSet median_reachable_analytic(const Sample& x, std::size_t s);

/// With j outliers on the nonnegative orthant the mean reaches
/// [(sum of the n - j smallest order statistics) / n, inf); j = 0 gives the
/// singleton {mean(X)}.
ReachableSet mean_reachable_nonneg(const Sample& x, std::size_t j);

/// max(|lo1 - lo2|, |hi1 - hi2|) for bounded intervals.
double hausdorff_distance(const Interval& a, const Interval& b);
/// Intersection with [lo, hi]; unbounded ends are clipped.
Interval clip(const Interval& a, double lo, double hi);

struct NestingReport {
  bool pass = true;
  /// Oracle sets for s = 0..s_max.
  std::vector<ReachableSet> sets;
  /// Smallest s whose hull is not contained in the hull at s + 1.
  std::optional<std::size_t> first_violation;
};

/// Checks hull(T_0) within hull(T_1) within ... within hull(T_{s_max}) on a
/// common box and grid. Containment allows one merge gap of slack.
NestingReport nesting_check(const Estimator& t, const Sample& x, std::size_t s_max,
                            const OracleOptions& options = {});

/// Compares reachable hulls across a panel. Each hull is computed at the box
/// B and at B/2; an end that moves with the box is treated as unbounded.
/// Broken when every member's summarized hull agrees with every other within
/// two grid steps at B. The verdict is relative to the box and grid.
Verdict detect_def4(const Estimator& t, std::span<const Sample> panel, std::size_t s,
                    const OracleOptions& options = {});

/// What observing T = t under at most s outliers says about the clean data.
struct MembershipConstraint {
  enum class Kind {
    /// s = 0: T(X) = t.
    ExactValue,
    /// x_(lower_rank) <= t <= x_(upper_rank).
    OrderStatisticBracket,
    /// Sum of the sum_count smallest order statistics <= n t.
    SmallestSumBound,
    /// Every X is compatible with t.
    Vacuous,
  };

  Kind kind = Kind::Vacuous;
  std::string estimator;
  std::size_t n = 0;
  std::size_t s = 0;
  double t = 0.0;
  std::size_t lower_rank = 0;  // 1-based
  std::size_t upper_rank = 0;  // 1-based
  std::size_t sum_count = 0;
  double bound = 0.0;

  bool informative() const { return kind != Kind::Vacuous; }
  bool satisfied_by(const Sample& x) const;
  std::string describe() const;
};

std::string_view to_string(MembershipConstraint::Kind k);

/// Supported: median (odd n), mean on nonnegative or real domains, and any
/// estimator at s = 0. Throws InvalidArgument otherwise.
MembershipConstraint informativeness_query(const Estimator& t, std::size_t n, Domain domain,
                                           std::size_t s, double observed);

}  // namespace robustlab

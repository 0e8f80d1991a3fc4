#include "robustlab/reachable.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <thread>

namespace robustlab {

std::string_view to_string(OracleStrategy s) {
  switch (s) {
    case OracleStrategy::Auto: return "auto";
    case OracleStrategy::Exhaustive: return "exhaustive";
    case OracleStrategy::MonotoneExtremes: return "monotone-extremes";
  }
  return "?";
}

OracleStrategy parse_oracle_strategy(std::string_view text) {
  for (auto s : {OracleStrategy::Auto, OracleStrategy::Exhaustive, OracleStrategy::MonotoneExtremes}) {
    if (to_string(s) == text) return s;
  }
  throw InvalidArgument("unknown oracle strategy '" + std::string(text) + "'");
}

std::string_view to_string(ReachableSet::Provenance p) {
  return p == ReachableSet::Provenance::Analytic ? "analytic" : "oracle";
}

Interval ReachableSet::hull() const {
  if (intervals.empty()) throw InvalidArgument("empty reachable set has no hull");
  Interval h = intervals.front();
  h.hi = intervals.back().hi;
  h.hi_unbounded = intervals.back().hi_unbounded;
  return h;
}

bool ReachableSet::contains(double t) const {
  return std::any_of(intervals.begin(), intervals.end(),
                     [t](const Interval& i) { return i.contains(t); });
}

namespace {

constexpr std::uint64_t kSaturated = std::numeric_limits<std::uint64_t>::max();

std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > kSaturated / a) return kSaturated;
  return a * b;
}

// C(n, k) computed incrementally; every intermediate is itself a binomial
// coefficient, so the division is exact.
std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t out = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    const std::uint64_t num = n - k + i;
    if (out > kSaturated / num) return kSaturated;
    out = out * num / i;
  }
  return out;
}

std::vector<std::vector<std::size_t>> all_masks(std::size_t n, std::size_t s) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> idx(s);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  while (true) {
    out.push_back(idx);
    std::size_t j = s;
    while (j > 0 && idx[j - 1] == n - s + (j - 1)) --j;
    if (j == 0) break;
    ++idx[j - 1];
    for (std::size_t i = j; i < s; ++i) idx[i] = idx[i - 1] + 1;
  }
  return out;
}

std::vector<double> make_grid(const OracleOptions& options, Domain domain) {
  const double lo = options.grid_low(domain);
  const double hi = options.box;
  std::vector<double> grid(options.grid);
  const double denom = static_cast<double>(options.grid - 1);
  for (std::size_t i = 0; i < options.grid; ++i) {
    grid[i] = lo + (hi - lo) * (static_cast<double>(i) / denom);
  }
  grid.back() = hi;
  return grid;
}

void merge_into(std::vector<Interval>& intervals, double gap) {
  std::sort(intervals.begin(), intervals.end(), [](const Interval& a, const Interval& b) {
    return a.lo < b.lo || (a.lo == b.lo && a.hi < b.hi);
  });
  std::vector<Interval> out;
  for (const auto& iv : intervals) {
    if (!out.empty() && iv.lo - out.back().hi <= gap) {
      out.back().hi = std::max(out.back().hi, iv.hi);
    } else {
      out.push_back(iv);
    }
  }
  intervals = std::move(out);
}

struct MaskResult {
  std::vector<Interval> intervals;
  std::uint64_t evaluations = 0;
  std::uint64_t failures = 0;
};

class MaskEvaluator {
 public:
  MaskEvaluator(const Estimator& t, std::span<const double> clean, const std::vector<double>& grid,
                std::size_t s, double gap)
      : t_(t), clean_(clean), grid_(grid), s_(s), gap_(gap), work_(clean.size()) {}

  MaskResult exhaustive(const std::vector<std::size_t>& mask, bool symmetric) {
    MaskResult out;
    const auto kept = kept_values(mask);
    const std::size_t g = grid_.size();
    std::vector<std::size_t> tuple(s_, 0);
    std::vector<double> values;
    while (true) {
      std::copy(kept.begin(), kept.end(), work_.begin());
      for (std::size_t j = 0; j < s_; ++j) work_[kept.size() + j] = grid_[tuple[j]];
      evaluate(out, values);

      // Advance the odometer; symmetric estimators only need nondecreasing tuples.
      std::size_t j = s_;
      while (j > 0 && tuple[j - 1] == g - 1) --j;
      if (j == 0) break;
      ++tuple[j - 1];
      for (std::size_t i = j; i < s_; ++i) tuple[i] = symmetric ? tuple[j - 1] : 0;
    }
    std::sort(values.begin(), values.end());
    for (double v : values) {
      if (!out.intervals.empty() && v - out.intervals.back().hi <= gap_) {
        out.intervals.back().hi = v;
      } else {
        out.intervals.push_back(Interval::point(v));
      }
    }
    return out;
  }

  MaskResult extremes(const std::vector<std::size_t>& mask) {
    MaskResult out;
    const auto kept = kept_values(mask);
    std::vector<double> values;
    for (double end : {grid_.front(), grid_.back()}) {
      std::copy(kept.begin(), kept.end(), work_.begin());
      std::fill(work_.begin() + static_cast<std::ptrdiff_t>(kept.size()), work_.end(), end);
      evaluate(out, values);
    }
    if (values.size() == 2) out.intervals.push_back({values[0], values[1], false, false});
    return out;
  }

 private:
  std::vector<double> kept_values(const std::vector<std::size_t>& mask) const {
    std::vector<double> kept;
    std::size_t next = 0;
    for (std::size_t i = 0; i < clean_.size(); ++i) {
      if (next < mask.size() && mask[next] == i) {
        ++next;
      } else {
        kept.push_back(clean_[i]);
      }
    }
    return kept;
  }

  void evaluate(MaskResult& out, std::vector<double>& values) {
    ++out.evaluations;
    try {
      const double v = t_.evaluate_scalar(work_);
      if (std::isfinite(v)) {
        values.push_back(v);
      } else {
        ++out.failures;
      }
    } catch (const EstimatorError&) {
      ++out.failures;
    }
  }

  const Estimator& t_;
  std::span<const double> clean_;
  const std::vector<double>& grid_;
  std::size_t s_;
  double gap_;
  std::vector<double> work_;
};

void validate_oracle_inputs(const Estimator& t, const Sample& x, std::size_t s,
                            const OracleOptions& options) {
  if (x.is_regression() || t.descriptor().arity != Arity::Scalar) {
    throw InvalidArgument("reachable sets are defined for scalar estimators on scalar samples");
  }
  if (t.descriptor().output_dimension() != 1 || !t.has_scalar_kernel()) {
    throw InvalidArgument("estimator '" + t.name() + "' is not one-dimensional");
  }
  if (s > x.size()) throw InvalidArgument("outlier count exceeds sample size");
  if (options.grid < 2) throw InvalidArgument("grid needs at least two points");
  if (!(options.box > 0.0) || !std::isfinite(options.box)) throw InvalidArgument("box must be positive");
  if (!(options.lipschitz_slack > 0.0)) throw InvalidArgument("lipschitz slack must be positive");
}

}  // namespace

std::uint64_t exhaustive_evaluation_count(std::size_t n, std::size_t s, std::size_t grid,
                                          bool permutation_symmetric) {
  std::uint64_t tuples = 1;
  if (permutation_symmetric) {
    tuples = binomial(grid + s - 1, s);
  } else {
    for (std::size_t i = 0; i < s; ++i) tuples = saturating_mul(tuples, grid);
  }
  return saturating_mul(binomial(n, s), tuples);
}

ReachableSet reachable_oracle(const Estimator& t, const Sample& x, std::size_t s,
                              const OracleOptions& options) {
  validate_oracle_inputs(t, x, s, options);
  const Domain domain = x.domain();

  ReachableSet out;
  out.provenance = ReachableSet::Provenance::Oracle;
  out.box = options.box;
  out.grid_low = options.grid_low(domain);
  out.grid = options.grid;

  if (s == 0) {
    out.strategy = OracleStrategy::Exhaustive;
    out.evaluations = 1;
    out.intervals.push_back(Interval::point(t(x).scalar()));
    return out;
  }

  const auto& desc = t.descriptor();
  const std::uint64_t count =
      exhaustive_evaluation_count(x.size(), s, options.grid, desc.permutation_symmetric);
  OracleStrategy strategy = options.strategy;
  if (strategy == OracleStrategy::Auto) {
    if (count <= options.budget) {
      strategy = OracleStrategy::Exhaustive;
    } else if (desc.monotone) {
      strategy = OracleStrategy::MonotoneExtremes;
    } else {
      throw BudgetExceeded("exhaustive enumeration needs " + std::to_string(count) +
                           " evaluations, budget is " + std::to_string(options.budget));
    }
  }
  if (strategy == OracleStrategy::Exhaustive && count > options.budget) {
    throw BudgetExceeded("exhaustive enumeration needs " + std::to_string(count) +
                         " evaluations, budget is " + std::to_string(options.budget));
  }
  if (strategy == OracleStrategy::MonotoneExtremes && !desc.monotone) {
    throw InvalidArgument("estimator '" + t.name() + "' is not monotone");
  }
  if (strategy == OracleStrategy::MonotoneExtremes) {
    const std::uint64_t extremes = 2 * exhaustive_evaluation_count(x.size(), s, 1, false);
    if (extremes > options.budget) {
      throw BudgetExceeded("extreme-point evaluation needs " + std::to_string(extremes) +
                           " evaluations, budget is " + std::to_string(options.budget));
    }
  }
  out.strategy = strategy;

  const auto grid = make_grid(options, domain);
  const auto masks = all_masks(x.size(), s);
  const double gap = options.merge_gap(domain);
  std::vector<MaskResult> results(masks.size());

  unsigned workers = options.threads ? options.threads : std::thread::hardware_concurrency();
  workers = std::clamp<unsigned>(workers, 1u, static_cast<unsigned>(masks.size()));
  auto run = [&](unsigned worker) {
    MaskEvaluator eval(t, x.values(), grid, s, gap);
    for (std::size_t i = worker; i < masks.size(); i += workers) {
      results[i] = strategy == OracleStrategy::Exhaustive
                       ? eval.exhaustive(masks[i], desc.permutation_symmetric)
                       : eval.extremes(masks[i]);
    }
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run, w);
  }

  // Reduction in mask order; merging is order-independent anyway.
  for (auto& r : results) {
    out.evaluations += r.evaluations;
    out.failures += r.failures;
    out.intervals.insert(out.intervals.end(), r.intervals.begin(), r.intervals.end());
  }
  merge_into(out.intervals, gap);
  return out;
}

ReachableSet median_reachable_analytic(const Sample& x, std::size_t s) {
  const auto values = x.values();
  const std::size_t n = values.size();
  if (n % 2 == 0) throw InvalidArgument("analytic median reachable set needs odd n = 2k - 1");
  const std::size_t k = (n + 1) / 2;
  if (s > k) throw InvalidArgument("outlier count exceeds k for the median reachable set");
  ReachableSet out;
  if (s == k) {
    out.intervals.push_back(Interval::whole_line());
    return out;
  }
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  // Order statistics are 1-based: x_(k - s) sits at index k - s - 1.
  out.intervals.push_back({sorted[k - s - 1], sorted[k + s - 1], false, false});
  return out;
}

ReachableSet mean_reachable_nonneg(const Sample& x, std::size_t j) {
  if (x.domain() != Domain::NonNegative) {
    throw InvalidArgument("mean_reachable_nonneg needs a nonnegative sample");
  }
  const auto values = x.values();
  const std::size_t n = values.size();
  if (j >= n) throw InvalidArgument("outlier count must be at most n - 1");
  ReachableSet out;
  if (j == 0) {
    out.intervals.push_back(Interval::point(stats::mean(values)));
    return out;
  }
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double kept = std::accumulate(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(n - j), 0.0);
  out.intervals.push_back({kept / static_cast<double>(n), 0.0, false, true});
  return out;
}

double hausdorff_distance(const Interval& a, const Interval& b) {
  if (a.lo_unbounded || a.hi_unbounded || b.lo_unbounded || b.hi_unbounded) {
    if (a.lo_unbounded == b.lo_unbounded && a.hi_unbounded == b.hi_unbounded) {
      double d = 0.0;
      if (!a.lo_unbounded) d = std::max(d, std::abs(a.lo - b.lo));
      if (!a.hi_unbounded) d = std::max(d, std::abs(a.hi - b.hi));
      return d;
    }
    return std::numeric_limits<double>::infinity();
  }
  return std::max(std::abs(a.lo - b.lo), std::abs(a.hi - b.hi));
}

Interval clip(const Interval& a, double lo, double hi) {
  Interval out;
  out.lo = a.lo_unbounded ? lo : std::max(a.lo, lo);
  out.hi = a.hi_unbounded ? hi : std::min(a.hi, hi);
  return out;
}

NestingReport nesting_check(const Estimator& t, const Sample& x, std::size_t s_max,
                            const OracleOptions& options) {
  if (s_max > x.size()) throw InvalidArgument("s_max exceeds sample size");
  NestingReport report;
  for (std::size_t s = 0; s <= s_max; ++s) {
    report.sets.push_back(reachable_oracle(t, x, s, options));
  }
  const double slack = options.merge_gap(x.domain());
  for (std::size_t s = 0; s + 1 < report.sets.size(); ++s) {
    const Interval inner = report.sets[s].hull();
    const Interval outer = report.sets[s + 1].hull();
    if (inner.lo < outer.lo - slack || inner.hi > outer.hi + slack) {
      report.pass = false;
      report.first_violation = s;
      break;
    }
  }
  return report;
}

namespace {

struct BoxSummary {
  Interval hull;
  double resolution = 0.0;
};

BoxSummary summarize_member(const Estimator& t, const Sample& x, std::size_t s,
                            const OracleOptions& options) {
  OracleOptions half = options;
  half.box = options.box / 2.0;
  const Interval wide = reachable_oracle(t, x, s, options).hull();
  const Interval narrow = reachable_oracle(t, x, s, half).hull();
  const double resolution = 2.0 * options.grid_step(x.domain());
  BoxSummary out{wide, resolution};
  out.hull.lo_unbounded = std::abs(wide.lo - narrow.lo) > resolution;
  out.hull.hi_unbounded = std::abs(wide.hi - narrow.hi) > resolution;
  return out;
}

bool hulls_agree(const Interval& a, const Interval& b, double resolution) {
  if (a.lo_unbounded != b.lo_unbounded || a.hi_unbounded != b.hi_unbounded) return false;
  if (!a.lo_unbounded && std::abs(a.lo - b.lo) > resolution) return false;
  if (!a.hi_unbounded && std::abs(a.hi - b.hi) > resolution) return false;
  return true;
}

}  // namespace

Verdict detect_def4(const Estimator& t, std::span<const Sample> panel, std::size_t s,
                    const OracleOptions& options) {
  if (panel.size() < 2) throw InvalidArgument("Definition 4 needs a panel of at least two samples");
  for (const auto& x : panel) {
    if (x.size() != panel[0].size() || x.domain() != panel[0].domain()) {
      throw InvalidArgument("panel samples must share size and domain");
    }
  }

  Verdict v;
  std::vector<BoxSummary> summaries;
  for (const auto& x : panel) summaries.push_back(summarize_member(t, x, s, options));
  for (const auto& m : summaries) v.reachable_hulls.push_back({m.hull});

  const double resolution = summaries.front().resolution;
  std::ostringstream label;
  label << "box-relative: B=" << options.box << ", G=" << options.grid
        << ", resolution=" << resolution << "; finite panel of " << panel.size();

  for (std::size_t i = 0; i < summaries.size(); ++i) {
    for (std::size_t j = i + 1; j < summaries.size(); ++j) {
      if (!hulls_agree(summaries[i].hull, summaries[j].hull, resolution)) {
        v.outcome = Outcome::NotBroken;
        v.reason = label.str() + "; members " + std::to_string(i) + " and " + std::to_string(j) +
                   " reach different sets";
        return v;
      }
    }
  }
  v.outcome = Outcome::BrokenXIndependentSet;
  v.reason = label.str() + "; all reachable sets agree";
  return v;
}

std::string_view to_string(MembershipConstraint::Kind k) {
  switch (k) {
    case MembershipConstraint::Kind::ExactValue: return "exact-value";
    case MembershipConstraint::Kind::OrderStatisticBracket: return "order-statistic-bracket";
    case MembershipConstraint::Kind::SmallestSumBound: return "smallest-sum-bound";
    case MembershipConstraint::Kind::Vacuous: return "vacuous";
  }
  return "?";
}

bool MembershipConstraint::satisfied_by(const Sample& x) const {
  if (x.size() != n) throw InvalidArgument("sample size does not match the constraint");
  std::vector<double> sorted(x.values().begin(), x.values().end());
  std::sort(sorted.begin(), sorted.end());
  switch (kind) {
    case Kind::Vacuous:
      return true;
    case Kind::ExactValue: {
      const double v = make_estimator(estimator)(x).scalar();
      return std::abs(v - t) <= 1e-12 * std::max(1.0, std::abs(t));
    }
    case Kind::OrderStatisticBracket:
      return sorted[lower_rank - 1] <= t && t <= sorted[upper_rank - 1];
    case Kind::SmallestSumBound: {
      const double sum = std::accumulate(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(sum_count), 0.0);
      return sum <= bound;
    }
  }
  return false;
}

std::string MembershipConstraint::describe() const {
  std::ostringstream out;
  switch (kind) {
    case Kind::Vacuous:
      out << "no constraint: every sample can produce " << estimator << " = " << t;
      break;
    case Kind::ExactValue:
      out << estimator << "(X) = " << t;
      break;
    case Kind::OrderStatisticBracket:
      out << "x_(" << lower_rank << ") <= " << t << " <= x_(" << upper_rank << ")";
      break;
    case Kind::SmallestSumBound:
      if (sum_count == 1) {
        out << "x_(1) <= " << bound;
      } else {
        out << "x_(1) + ... + x_(" << sum_count << ") <= " << bound;
      }
      break;
  }
  return out.str();
}

MembershipConstraint informativeness_query(const Estimator& t, std::size_t n, Domain domain,
                                           std::size_t s, double observed) {
  if (n == 0) throw InvalidArgument("sample size must be positive");
  if (s > n) throw InvalidArgument("outlier count exceeds sample size");
  MembershipConstraint c;
  c.estimator = t.name();
  c.n = n;
  c.s = s;
  c.t = observed;
  if (s == 0) {
    c.kind = MembershipConstraint::Kind::ExactValue;
    return c;
  }
  if (t.name() == "median") {
    if (domain != Domain::Real) throw InvalidArgument("median membership is stated for real samples");
    if (n % 2 == 0) throw InvalidArgument("median membership needs odd n = 2k - 1");
    const std::size_t k = (n + 1) / 2;
    if (s >= k) {
      c.kind = MembershipConstraint::Kind::Vacuous;
      return c;
    }
    c.kind = MembershipConstraint::Kind::OrderStatisticBracket;
    c.lower_rank = k - s;
    c.upper_rank = k + s;
    return c;
  }
  if (t.name() == "mean") {
    if (domain == Domain::Real) {
      c.kind = MembershipConstraint::Kind::Vacuous;
      return c;
    }
    if (domain != Domain::NonNegative) throw InvalidArgument("mean membership needs a scalar domain");
    if (s >= n) {
      c.kind = MembershipConstraint::Kind::Vacuous;
      return c;
    }
    c.kind = MembershipConstraint::Kind::SmallestSumBound;
    c.sum_count = n - s;
    c.bound = static_cast<double>(n) * observed;
    return c;
  }
  throw InvalidArgument("no analytic reachable formula for estimator '" + t.name() + "'");
}

}  // namespace robustlab

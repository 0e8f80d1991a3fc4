#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "robustlab/reachable.hpp"
#include "support.hpp"

using namespace robustlab;
using robustlab::testing::for_all;
using robustlab::testing::Gen;
using robustlab::testing::panel_of;

namespace {

std::vector<double> sorted(const Sample& x) {
  std::vector<double> v(x.values().begin(), x.values().end());
  std::sort(v.begin(), v.end());
  return v;
}

// Mean hull with s outliers in [lo, hi]: drop the s largest (smallest) clean
// values and put every outlier at lo (hi).
Interval mean_hull_reference(const Sample& x, std::size_t s, double lo, double hi) {
  const auto v = sorted(x);
  const double n = static_cast<double>(v.size());
  const double low = (std::accumulate(v.begin(), v.end() - s, 0.0) + s * lo) / n;
  const double high = (std::accumulate(v.begin() + s, v.end(), 0.0) + s * hi) / n;
  return {low, high, false, false};
}

OracleOptions options(double box, std::size_t grid, OracleStrategy strategy = OracleStrategy::Auto) {
  OracleOptions o;
  o.box = box;
  o.grid = grid;
  o.strategy = strategy;
  return o;
}

}  // namespace

TEST_SUITE("reachable") {
  TEST_CASE("s = 0 gives the exact singleton") {
    for (const char* name : {"mean", "median", "std_dev", "b1"}) {
      const auto t = make_estimator(name);
      const auto x = Sample::scalar({0.3, 1.9, -0.4, 2.2, 0.0});
      const auto set = reachable_oracle(t, x, 0);
      REQUIRE(set.intervals.size() == 1);
      CHECK(set.intervals[0] == Interval::point(t(x).scalar()));
      CHECK(set.evaluations == 1);
    }
  }

  TEST_CASE("median example") {
    const auto x = Sample::scalar({1, 2, 3, 4, 5});
    const auto set = reachable_oracle(make_estimator("median"), x, 1, options(1e3, 201));
    CHECK(set.hull().lo == doctest::Approx(2));
    CHECK(set.hull().hi == doctest::Approx(4));
    CHECK(set.strategy == OracleStrategy::Exhaustive);
  }

  TEST_CASE("mean example") {
    const auto x = Sample::scalar({1, 2, 3});
    const auto set = reachable_oracle(make_estimator("mean"), x, 1, options(100, 201));
    CHECK(set.hull().lo == doctest::Approx((1 + 2 - 100) / 3.0));
    CHECK(set.hull().hi == doctest::Approx((2 + 3 + 100) / 3.0));
    CHECK(set.intervals.size() == 1);
  }

  TEST_CASE("mean hull matches the reference on random samples") {
    for_all(71, 20, [](Gen& g) {
      const std::size_t n = g.index(2, 6);
      const std::size_t s = g.index(1, n - 1);
      const auto x = g.real(n);
      const auto set = reachable_oracle(make_estimator("mean"), x, s, options(50, 41, OracleStrategy::Exhaustive));
      const auto ref = mean_hull_reference(x, s, -50, 50);
      CHECK(hausdorff_distance(set.hull(), ref) <= 1e-9);
    });
  }

  TEST_CASE("monotone extremes agree with exhaustive enumeration") {
    for (const char* name : {"mean", "median", "trimmed_mean:0.25"}) {
      const auto t = make_estimator(name);
      for_all(72, 10, [&](Gen& g) {
        const std::size_t n = g.index(3, 6);
        const std::size_t s = g.index(1, n);
        const auto x = g.real(n);
        const auto ex = reachable_oracle(t, x, s, options(20, 21, OracleStrategy::Exhaustive));
        const auto mo = reachable_oracle(t, x, s, options(20, 21, OracleStrategy::MonotoneExtremes));
        CHECK(hausdorff_distance(ex.hull(), mo.hull()) <= 1e-9);
        CHECK(mo.evaluations < ex.evaluations);
      });
    }
    CHECK_THROWS_AS(reachable_oracle(make_estimator("std_dev"), Sample::scalar({1, 2, 3}), 1,
                                     options(10, 11, OracleStrategy::MonotoneExtremes)),
                    InvalidArgument);
  }

  TEST_CASE("median oracle matches the analytic interval") {
    for_all(73, 10, [](Gen& g) {
      const std::size_t k = g.index(2, 3);
      const std::size_t n = 2 * k - 1;
      const auto x = g.real(n);
      for (std::size_t s = 0; s <= k; ++s) {
        const auto opt = options(100, 201);
        const auto oracle = reachable_oracle(make_estimator("median"), x, s, opt);
        const auto analytic = median_reachable_analytic(x, s);
        const auto truncated = clip(analytic.hull(), -100, 100);
        CHECK(hausdorff_distance(oracle.hull(), truncated) <= 2 * opt.grid_step(Domain::Real));
      }
    });
  }

  TEST_CASE("median analytic examples") {
    const auto x = Sample::scalar({1, 2, 3, 4, 5});
    CHECK(median_reachable_analytic(x, 1).hull() == Interval{2, 4, false, false});
    CHECK(median_reachable_analytic(x, 0).hull() == Interval::point(3));
    const auto all = median_reachable_analytic(x, 3).hull();
    CHECK(all.lo_unbounded);
    CHECK(all.hi_unbounded);
    CHECK_THROWS_AS(median_reachable_analytic(Sample::scalar({1, 2}), 1), InvalidArgument);
    CHECK_THROWS_AS(median_reachable_analytic(x, 4), InvalidArgument);
  }

  TEST_CASE("nonnegative mean analytic examples") {
    const auto a = mean_reachable_nonneg(Sample::scalar({0.5, 2, 3}, Domain::NonNegative), 2).hull();
    CHECK(a.lo == doctest::Approx(1.0 / 6.0));
    CHECK(a.hi_unbounded);
    const auto b = mean_reachable_nonneg(Sample::scalar({1, 2, 3, 4}, Domain::NonNegative), 2).hull();
    CHECK(b.lo == doctest::Approx(0.75));
    const auto c = mean_reachable_nonneg(Sample::scalar({1, 2, 3, 4}, Domain::NonNegative), 0).hull();
    CHECK(c == Interval::point(2.5));
    CHECK_THROWS_AS(mean_reachable_nonneg(Sample::scalar({1, 2}), 1), InvalidArgument);
  }

  TEST_CASE("nonnegative mean oracle minimum is the smallest-sum bound") {
    for_all(74, 10, [](Gen& g) {
      const std::size_t n = g.index(3, 4);
      const auto x = g.nonneg(n);
      for (std::size_t j = 1; j < n; ++j) {
        const auto opt = options(1e3, 51);
        const auto set = reachable_oracle(make_estimator("mean"), x, j, opt);
        const auto analytic = mean_reachable_nonneg(x, j).hull();
        CHECK(std::abs(set.hull().lo - analytic.lo) <= opt.grid_step(Domain::NonNegative));
        CHECK(set.hull().lo >= 0);
      }
    });
  }

  TEST_CASE("evaluation counts") {
    CHECK(exhaustive_evaluation_count(5, 2, 11, false) == 10 * 121);
    CHECK(exhaustive_evaluation_count(5, 2, 11, true) == 10 * 66);
    CHECK(exhaustive_evaluation_count(60, 30, 1001, false) == UINT64_MAX);
  }

  TEST_CASE("budget is enforced") {
    auto opt = options(1e3, 201, OracleStrategy::Exhaustive);
    opt.budget = 1000;
    CHECK_THROWS_AS(reachable_oracle(make_estimator("median"), Sample::scalar({1, 2, 3, 4, 5}), 2, opt),
                    BudgetExceeded);
    opt.strategy = OracleStrategy::Auto;
    CHECK_THROWS_AS(reachable_oracle(make_estimator("std_dev"), Sample::scalar({1, 2, 3, 4, 5}), 2, opt),
                    BudgetExceeded);
    opt.budget = 10;
    CHECK_THROWS_AS(reachable_oracle(make_estimator("median"), Sample::scalar({1, 2, 3, 4, 5}), 2, opt),
                    BudgetExceeded);
  }

  TEST_CASE("oracle rejects unsupported inputs") {
    CHECK_THROWS_AS(reachable_oracle(make_estimator("ols"), Sample::regression({{0, 0}, {1, 1}}), 1),
                    InvalidArgument);
    CHECK_THROWS_AS(reachable_oracle(make_estimator("mean"), Sample::scalar({1, 2}), 3), InvalidArgument);
    CHECK_THROWS_AS(reachable_oracle(make_estimator("mean"), Sample::scalar({1, 2}), 1, options(-1, 11)),
                    InvalidArgument);
  }

  TEST_CASE("thread count does not change the result") {
    const auto x = Sample::scalar({0.2, -1.0, 3.1, 0.7, 1.5});
    auto one = options(10, 41, OracleStrategy::Exhaustive);
    one.threads = 1;
    auto four = one;
    four.threads = 4;
    const auto a = reachable_oracle(make_estimator("std_dev"), x, 2, one);
    const auto b = reachable_oracle(make_estimator("std_dev"), x, 2, four);
    CHECK(a.intervals == b.intervals);
    CHECK(a.evaluations == b.evaluations);
  }

  TEST_CASE("estimator failures are counted, not fatal") {
    const auto x = Sample::scalar({1, 2, 3});
    const auto set = reachable_oracle(make_estimator("b1"), x, 2, options(1, 3, OracleStrategy::Exhaustive));
    CHECK(set.failures > 0);
    CHECK_FALSE(set.intervals.empty());
  }

  TEST_CASE("nesting chain") {
    const auto x = Sample::scalar({1, 2, 3, 4, 5});
    const auto med = nesting_check(make_estimator("median"), x, 2);
    CHECK(med.pass);
    REQUIRE(med.sets.size() == 3);
    CHECK(med.sets[0].hull() == Interval::point(3));
    CHECK(med.sets[1].hull().lo == doctest::Approx(2));
    CHECK(med.sets[2].hull().hi == doctest::Approx(5));
    CHECK(nesting_check(make_estimator("mean"), Sample::scalar({1, 2, 3}), 1).pass);
    for (const char* name : {"mean", "median", "trimmed_mean:0.2", "std_dev"}) {
      for_all(75, 5, [&](Gen& g) {
        CHECK(nesting_check(make_estimator(name), g.real(5), 3, options(100, 21)).pass);
      });
    }
  }

  TEST_CASE("def4 is box-relative") {
    const auto panel = panel_of(5, 76, 5);
    auto opt = options(1e3, 20001);
    CHECK(detect_def4(make_estimator("mean"), panel, 1, opt).outcome == Outcome::BrokenXIndependentSet);
    CHECK(detect_def4(make_estimator("median"), panel, 1, opt).outcome == Outcome::NotBroken);
    CHECK(detect_def4(make_estimator("median"), panel, 3, opt).outcome == Outcome::BrokenXIndependentSet);
    const auto v = detect_def4(make_estimator("mean"), panel, 1, opt);
    CHECK(v.reason.find("box-relative") != std::string::npos);
    CHECK(v.reachable_hulls.size() == panel.size());
  }

  TEST_CASE("informativeness") {
    const auto med = informativeness_query(make_estimator("median"), 5, Domain::Real, 1, 3.5);
    CHECK(med.kind == MembershipConstraint::Kind::OrderStatisticBracket);
    CHECK(med.lower_rank == 2);
    CHECK(med.upper_rank == 4);
    CHECK(med.satisfied_by(Sample::scalar({1, 2, 3, 4, 5})));
    CHECK_FALSE(med.satisfied_by(Sample::scalar({1, 4, 5, 6, 7})));

    const auto mean = informativeness_query(make_estimator("mean"), 3, Domain::NonNegative, 2, 1.0);
    CHECK(mean.kind == MembershipConstraint::Kind::SmallestSumBound);
    CHECK(mean.sum_count == 1);
    CHECK(mean.bound == doctest::Approx(3));
    CHECK(mean.satisfied_by(Sample::scalar({2.9, 10, 10}, Domain::NonNegative)));
    CHECK_FALSE(mean.satisfied_by(Sample::scalar({3.1, 10, 10}, Domain::NonNegative)));

    CHECK_FALSE(informativeness_query(make_estimator("mean"), 3, Domain::Real, 1, 1.0).informative());
    CHECK_FALSE(informativeness_query(make_estimator("median"), 5, Domain::Real, 3, 1.0).informative());
    const auto exact = informativeness_query(make_estimator("b1"), 5, Domain::Real, 0, 0.7);
    CHECK(exact.kind == MembershipConstraint::Kind::ExactValue);
  }

  TEST_CASE("informativeness agrees with the oracle") {
    // t is reachable from X exactly when X satisfies the constraint for t.
    for_all(77, 30, [](Gen& g) {
      const auto x = g.real(5);
      const std::size_t s = g.index(1, 2);
      const double t = g.uniform(-2, 2);
      const auto constraint = informativeness_query(make_estimator("median"), 5, Domain::Real, s, t);
      const auto analytic = median_reachable_analytic(x, s);
      CHECK(constraint.satisfied_by(x) == analytic.contains(t));
    });
  }

  TEST_CASE("hausdorff and clip") {
    CHECK(hausdorff_distance({0, 1, false, false}, {0.5, 3, false, false}) == 2);
    const auto c = clip(Interval::whole_line(), -5, 5);
    CHECK(c == Interval{-5, 5, false, false});
    CHECK(clip({1, 0, false, true}, -5, 5) == Interval{1, 5, false, false});
  }
}

#include <doctest.h>

#include <cmath>

#include "robustlab/breakdown.hpp"
#include "support.hpp"

using namespace robustlab;
using robustlab::testing::for_all;
using robustlab::testing::Gen;
using robustlab::testing::panel_of;

namespace {

Trajectory synthetic(std::vector<double> values, double baseline = 0.0) {
  Trajectory t;
  t.attack = "synthetic";
  t.baseline = EstimateValue{{baseline}};
  for (std::size_t i = 0; i < values.size(); ++i) {
    TrajectoryEntry e;
    e.step = i + 1;
    e.magnitude = std::pow(10.0, static_cast<double>(i + 3));
    e.value = EstimateValue{{values[i]}};
    t.entries.push_back(e);
  }
  return t;
}

std::vector<Sample> regression_panel(std::size_t count, std::uint64_t seed, std::size_t n) {
  Gen g(seed);
  std::vector<Sample> out;
  for (std::size_t i = 0; i < count; ++i) out.push_back(g.regression(n));
  return out;
}

}  // namespace

TEST_SUITE("breakdown") {
  TEST_CASE("classify_limit on synthetic trajectories") {
    const double n = 5;
    auto div = classify_limit(synthetic({1e3 / n, 1e4 / n, 1e5 / n, 1e6 / n, 1e7 / n, 1e8 / n}));
    CHECK(div.outcome == LimitClassification::Outcome::Diverged);

    auto conv = classify_limit(synthetic({5, 5, 5, 5}, 5));
    CHECK(conv.outcome == LimitClassification::Outcome::Converged);
    CHECK(conv.limit->scalar() == 5);

    // Growing but still below the divergence threshold.
    auto slow = classify_limit(synthetic({1, 2, 3, 4}));
    CHECK(slow.outcome == LimitClassification::Outcome::Undecided);

    // Oscillating.
    auto osc = classify_limit(synthetic({1, -1, 1, -1}));
    CHECK(osc.outcome == LimitClassification::Outcome::Undecided);

    CHECK_THROWS_AS(classify_limit(synthetic({1, 1})), InvalidArgument);

    auto failed = synthetic({5, 5, 5, 5});
    failed.entries[2].value.reset();
    failed.entries[2].failure = "zero variance";
    CHECK(classify_limit(failed).outcome == LimitClassification::Outcome::Undecided);
  }

  TEST_CASE("window setting controls how much tail is inspected") {
    LimitThresholds th;
    th.window = 5;
    CHECK(classify_limit(synthetic({9, 7, 5, 5, 5}), th).outcome == LimitClassification::Outcome::Undecided);
    th.window = 3;
    CHECK(classify_limit(synthetic({9, 7, 5, 5, 5}), th).outcome == LimitClassification::Outcome::Converged);
  }

  TEST_CASE("evaluate_trajectory follows the mean closed form") {
    const auto x = Sample::scalar({1, 2, 3, 4, 5});
    const auto seq = generate_attack(shift_half_spec(ContaminationMask::first(5, 1)), x);
    const auto traj = evaluate_trajectory(make_estimator("mean"), seq);
    REQUIRE(traj.entries.size() == 6);
    for (const auto& e : traj.entries) CHECK(e.value->scalar() == doctest::Approx(3 + e.magnitude / 5));
  }

  TEST_CASE("evaluate_trajectory records estimator failures") {
    const auto x = Sample::scalar({1, 2, 3});
    AttackSpec spec = point_mass_spec(ContaminationMask::first(3, 3), 4.0);
    const auto traj = evaluate_trajectory(make_estimator("b1"), generate_attack(spec, x));
    for (const auto& e : traj.entries) {
      CHECK_FALSE(e.value.has_value());
      CHECK_FALSE(e.failure.empty());
    }
    CHECK(traj.valid_count() == 0);
  }

  TEST_CASE("def1 examples") {
    const auto x = Sample::scalar({0.4, -1.1, 2.3, 0.8, 1.7});
    const auto shift = shift_half_spec(ContaminationMask::first(5, 1));
    CHECK(detect_def1(make_estimator("mean"), x, shift).outcome == Outcome::BrokenDivergence);
    CHECK(detect_def1(make_estimator("median"), x, shift).outcome == Outcome::NotBroken);
    CHECK(detect_def1(make_estimator("constant:3"), x, shift).outcome == Outcome::NotBroken);
    CHECK(detect_def1(make_estimator("median"), x, shift_half_spec(ContaminationMask::first(5, 3))).outcome ==
          Outcome::BrokenDivergence);
  }

  TEST_CASE("def2 examples") {
    const auto x = Sample::scalar({1, 2, 3, 4, 5});
    const auto pm = detect_def2(make_estimator("mad"), x, point_mass_spec(ContaminationMask::first(5, 3)));
    CHECK(pm.outcome == Outcome::BrokenBoundary);
    REQUIRE(pm.limit.has_value());
    CHECK(pm.limit->at(0) == 0.0);

    const auto esc = detect_def2(make_estimator("std_dev"), x, single_outlier_escape_spec(5, 0));
    CHECK(esc.outcome == Outcome::BrokenDivergence);

    const auto constant = make_estimator("constant:2");
    for_all(51, 10, [&](Gen& g) {
      const auto y = g.real(6);
      const auto mask = g.mask(6, g.index(1, 6));
      const auto v = detect_def2(constant, y, shift_half_spec(mask), constant.descriptor().value_space);
      CHECK(v.outcome == Outcome::BrokenBoundary);
    });

    // The median limit under a minority shift is an interior order statistic.
    CHECK(detect_def2(make_estimator("median"), x, shift_half_spec(ContaminationMask::first(5, 1))).outcome ==
          Outcome::NotBroken);
  }

  TEST_CASE("def2 on the nonnegative mean reaches only interior points") {
    const auto x = Sample::scalar({1, 2, 3}, Domain::NonNegative);
    const auto v = detect_def2(make_estimator("mean"), x, point_mass_spec(ContaminationMask::first(3, 3), 0.0));
    CHECK(v.outcome == Outcome::BrokenBoundary);
    CHECK(detect_def2(make_estimator("mean"), x, point_mass_spec(ContaminationMask::first(3, 2), 0.0)).outcome ==
          Outcome::NotBroken);
  }

  TEST_CASE("def3 examples") {
    const auto b1 = make_estimator("b1");
    const auto panel = panel_of(5, 52, 10);
    const auto v = detect_def3(b1, panel, single_outlier_escape_spec(10, 0));
    CHECK(v.outcome == Outcome::BrokenConstantLimit);
    CHECK(v.limit->at(0) == doctest::Approx(64.0 / 9.0).epsilon(1e-4));

    const auto med = detect_def3(make_estimator("median"), panel_of(5, 53, 5),
                                 shift_half_spec(ContaminationMask::first(5, 1)));
    CHECK(med.outcome == Outcome::NotBroken);

    const auto mean = detect_def3(make_estimator("mean"), panel_of(5, 53, 5),
                                  shift_half_spec(ContaminationMask::first(5, 1)));
    CHECK(mean.outcome == Outcome::BrokenDivergence);

    const auto reg = regression_panel(5, 54, 10);
    const auto slope = detect_def3(make_estimator("ols_slope"), reg,
                                   scale_half_x_spec(ContaminationMask::first(10, 5), +1));
    CHECK(slope.outcome == Outcome::BrokenConstantLimit);
    CHECK(std::abs(slope.limit->at(0)) <= 1e-4);

    CHECK_THROWS_AS(detect_def3(b1, std::vector<Sample>{}, single_outlier_escape_spec(10, 0)), InvalidArgument);
  }

  TEST_CASE("genton-lucas limit sets") {
    const auto reg = regression_panel(5, 55, 10);
    const std::vector<AttackSpec> both = {scale_half_x_spec(ContaminationMask::first(10, 5), +1),
                                          scale_half_x_spec(ContaminationMask::first(10, 5), -1)};
    const auto ols = genton_lucas_limit_set(make_estimator("ols_slope"), reg, both);
    CHECK(is_broken(ols.verdict.outcome));
    REQUIRE(ols.per_attack.size() == 2);
    CHECK(ols.per_attack[0].collapsed);
    CHECK(std::abs(ols.per_attack[0].clusters.at(0).at(0)) <= 1e-4);

    const std::vector<AttackSpec> esc = {single_outlier_escape_spec(10, 0)};
    const auto b1 = genton_lucas_limit_set(make_estimator("b1"), panel_of(5, 56, 10), esc);
    CHECK(b1.verdict.outcome == Outcome::BrokenConstantLimit);
    REQUIRE(b1.per_attack[0].clusters.size() == 1);
    CHECK(b1.per_attack[0].clusters[0][0] == doctest::Approx(64.0 / 9.0).epsilon(1e-4));

    const std::vector<AttackSpec> shift = {shift_half_spec(ContaminationMask::first(5, 1))};
    const auto mean = genton_lucas_limit_set(make_estimator("mean"), panel_of(5, 57, 5), shift);
    CHECK(mean.verdict.outcome == Outcome::BrokenDivergence);
    CHECK(mean.per_attack[0].clusters.empty());
    CHECK(mean.per_attack[0].collapsed);

    const auto med = genton_lucas_limit_set(make_estimator("median"), panel_of(5, 57, 5), shift);
    CHECK(med.verdict.outcome == Outcome::NotBroken);
  }

  TEST_CASE("breakdown points under def1") {
    for (std::size_t n : {3u, 5u}) {
      const auto r = breakdown_point(make_estimator("mean"), panel_of(1, 58, n));
      REQUIRE(r.s_star.has_value());
      CHECK(*r.s_star == 1);
      CHECK(*r.fraction == doctest::Approx(1.0 / n));
    }
    for (std::size_t k : {2u, 3u, 4u}) {
      const std::size_t n = 2 * k - 1;
      const auto r = breakdown_point(make_estimator("median"), panel_of(1, 59, n));
      REQUIRE(r.s_star.has_value());
      CHECK(*r.s_star == k);
      CHECK(r.per_s.size() == n);
    }
    const auto never = breakdown_point(make_estimator("constant:0"), panel_of(1, 60, 5),
                                       {.definition = Definition::Def1,
                                        .catalog = [](const Sample& x, std::size_t s) {
                                          return std::vector<AttackSpec>{
                                              shift_half_spec(ContaminationMask::first(x.size(), s))};
                                        }});
    CHECK_FALSE(never.s_star.has_value());
    CHECK_FALSE(never.fraction.has_value());
  }

  TEST_CASE("constant estimator breaks under def2 at one outlier") {
    BreakdownOptions options;
    options.definition = Definition::Def2;
    options.catalog = [](const Sample& x, std::size_t s) {
      return std::vector<AttackSpec>{shift_half_spec(ContaminationMask::first(x.size(), s))};
    };
    const auto r = breakdown_point(make_estimator("constant:0"), panel_of(1, 61, 5), options);
    REQUIRE(r.s_star.has_value());
    CHECK(*r.s_star == 1);
  }

  TEST_CASE("b1 breaks under def3 with one outlier") {
    BreakdownOptions options;
    options.definition = Definition::Def3;
    options.max_s = 2;
    const auto r = breakdown_point(make_estimator("b1"), panel_of(5, 62, 10), options);
    REQUIRE(r.s_star.has_value());
    CHECK(*r.s_star == 1);
  }

  TEST_CASE("median def1 verdict flips exactly at k") {
    for_all(63, 10, [](Gen& g) {
      const std::size_t k = g.index(2, 5);
      const auto x = g.real(2 * k - 1);
      const auto med = make_estimator("median");
      for (std::size_t s = 1; s <= 2 * k - 1; ++s) {
        const auto mask = g.mask(2 * k - 1, s);
        const auto v = detect_def1(med, x, shift_half_spec(mask, g.index(0, 1) ? 1 : -1));
        CHECK(v.outcome == (s >= k ? Outcome::BrokenDivergence : Outcome::NotBroken));
      }
    });
  }

  TEST_CASE("definition names round trip") {
    for (auto d : {Definition::Def1, Definition::Def2, Definition::Def3, Definition::Def4, Definition::GentonLucas}) {
      CHECK(parse_definition(to_string(d)) == d);
    }
    CHECK_THROWS_AS(parse_definition("def5"), InvalidArgument);
  }
}

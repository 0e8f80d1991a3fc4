#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "robustlab/cli.hpp"

using namespace robustlab;

namespace {

std::filesystem::path write_temp(const std::string& name, const std::string& text) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path) << text;
  return path;
}

RunConfig generated(Command command, const std::string& estimator, std::size_t n, Domain d = Domain::Real) {
  RunConfig c;
  c.command = command;
  c.estimator = estimator;
  c.generator = GeneratorSpec{n, 1, d};
  return c;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("csv parsing") {
    const auto a = parse_sample_csv_text("1\n2\n3\n");
    CHECK(a == Sample::scalar({1, 2, 3}));
    const auto b = parse_sample_csv_text("x,y\n0,0\n1,1\n");
    CHECK(b == Sample::regression({{0, 0}, {1, 1}}));
    CHECK(parse_sample_csv_text("value\r\n 1.5 \r\n\r\n-2e3\r\n") == Sample::scalar({1.5, -2000}));
    CHECK(parse_sample_csv_text("1\n2\n", Domain::NonNegative).domain() == Domain::NonNegative);
    CHECK_THROWS_AS(parse_sample_csv_text("1,2,3\n"), InvalidArgument);
    CHECK_THROWS_AS(parse_sample_csv_text("1\n2,3\n"), InvalidArgument);
    CHECK_THROWS_AS(parse_sample_csv_text("1\nabc\n"), InvalidArgument);
    CHECK_THROWS_AS(parse_sample_csv_text(""), InvalidArgument);
    CHECK_THROWS_AS(parse_sample_csv_text("x\n"), InvalidArgument);
    CHECK_THROWS_AS(parse_sample_csv_text("1\n-1\n", Domain::NonNegative), InvalidArgument);
    CHECK_THROWS_AS(parse_sample_csv("/nonexistent/robustlab.csv"), InvalidArgument);
  }

  TEST_CASE("key=value parsers") {
    const auto g = parse_generator_spec("n=12,seed=7,domain=nonnegative");
    CHECK(g.n == 12);
    CHECK(g.seed == 7);
    CHECK(g.domain == Domain::NonNegative);
    CHECK_THROWS_AS(parse_generator_spec("n=abc"), InvalidArgument);
    CHECK_THROWS_AS(parse_generator_spec("size=3"), InvalidArgument);

    const auto a = parse_attack_overrides("kind=shift-half,c0=10,gamma=2,M=4,dir=-1,mask=last");
    CHECK(*a.kind == AttackKind::ShiftHalf);
    CHECK(*a.c0 == 10);
    CHECK(*a.steps == 4);
    CHECK(*a.direction == -1);
    CHECK(*a.mask == "last");
    CHECK_THROWS_AS(parse_attack_overrides("c0=10"), InvalidArgument);
    CHECK_THROWS_AS(parse_attack_overrides("kind=shift-half,dir=2"), InvalidArgument);

    LimitThresholds th;
    apply_tolerances("window=4,agreement_tol=1e-3", th);
    CHECK(th.window == 4);
    CHECK(th.agreement_tol == 1e-3);
    CHECK_THROWS_AS(apply_tolerances("bogus=1", th), InvalidArgument);
  }

  TEST_CASE("generators are seeded and domain-correct") {
    const auto a = generate_panel({8, 3, Domain::Real}, 2);
    const auto b = generate_panel({8, 3, Domain::Real}, 2);
    CHECK(a == b);
    CHECK_FALSE(a[0] == a[1]);
    const auto nonneg = generate_panel({20, 3, Domain::NonNegative}, 1);
    for (double v : nonneg[0].values()) CHECK(v >= 0);
    CHECK(generate_panel({6, 3, Domain::Regression}, 1)[0].is_regression());
  }

  TEST_CASE("attack report for b1") {
    auto c = generated(Command::Attack, "b1", 10);
    c.attack = parse_attack_overrides("kind=single-outlier-escape");
    const auto r = run(c);
    const auto& a = r["result"]["attacks"][0];
    CHECK(a["limit"]["outcome"] == "converged");
    CHECK(a["limit"]["limit"][0].get<double>() == doctest::Approx(64.0 / 9.0).epsilon(1e-4));
    CHECK(r["config"]["generator"]["seed"] == 1);
    CHECK(r["schema_version"] == "1");
  }

  TEST_CASE("reachable report for the median from csv") {
    RunConfig c;
    c.command = Command::Reachable;
    c.estimator = "median";
    c.inputs = {write_temp("robustlab_median.csv", "v\n4\n1\n5\n2\n3\n")};
    c.s = 1;
    const auto r = run(c)["result"];
    CHECK(r["analytic"]["intervals"][0]["lo"] == 2.0);
    CHECK(r["analytic"]["intervals"][0]["hi"] == 4.0);
    CHECK(r["hausdorff_to_analytic"].get<double>() <= 2 * r["grid_step"].get<double>());
  }

  TEST_CASE("breakdown-point report for the mean") {
    const auto r = run(generated(Command::BreakdownPoint, "mean", 5))["result"];
    CHECK(r["s_star"] == 1);
    CHECK(r["fraction"].get<double>() == doctest::Approx(0.2));
  }

  TEST_CASE("equivariance and limit-set reports") {
    const auto eq = run(generated(Command::EquivarianceCheck, "trimmed_mean:0.25", 10))["result"]["checks"];
    for (const auto& check : eq) CHECK(check["pass"] == true);
    auto ols = generated(Command::LimitSet, "ols_slope", 10, Domain::Regression);
    ols.s = 5;
    const auto ls = run(ols)["result"]["genton_lucas"]["verdict"]["outcome"];
    CHECK(ls == "broken-constant-limit");
  }

  TEST_CASE("reports are deterministic apart from the wall clock") {
    auto c = generated(Command::Reachable, "mean", 5);
    c.s = 2;
    c.s_max = 2;
    c.definition = Definition::Def4;
    c.panel = 3;
    c.observed = 0.5;
    const auto a = run(c);
    const auto b = run(c);
    CHECK(report_body(a) == report_body(b));
    CHECK(report_body(a).find("wall_clock_seconds") == std::string::npos);
    CHECK(a.contains("wall_clock_seconds"));
  }

  TEST_CASE("configuration errors") {
    CHECK_THROWS_AS(run(generated(Command::Attack, "nope", 5)), InvalidArgument);
    RunConfig none;
    CHECK_THROWS_AS(run(none), InvalidArgument);
    auto budget = generated(Command::Reachable, "std_dev", 7);
    budget.s = 3;
    budget.oracle.budget = 100;
    CHECK_THROWS_AS(run(budget), BudgetExceeded);
    CHECK_THROWS_AS(parse_command("plot"), InvalidArgument);
  }
}

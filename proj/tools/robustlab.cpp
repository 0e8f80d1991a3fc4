// robustlab: contamination attacks, breakdown points and reachable sets from
// the command line. Exit status 0 means the analysis completed, whatever the
// verdict.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "robustlab/cli.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitBudget = 3;

void emit(const robustlab::Json& report, const std::string& out) {
  const std::string text = report.dump(2) + "\n";
  if (out.empty() || out == "-") {
    std::cout << text;
    return;
  }
  std::ofstream file(out, std::ios::binary);
  if (!file) throw robustlab::InvalidArgument("cannot write report to " + out);
  file << text;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace robustlab;
  CLI::App app{"Breakdown-point and reachable-set analysis for statistical estimators"};
  app.set_version_flag("--version", std::string(ROBUSTLAB_VERSION));

  std::string command = "attack";
  std::string domain = "real";
  std::string generate, attack, definition, strategy, tolerances, out;
  RunConfig config;
  std::vector<std::string> inputs;
  std::size_t panel = 0, s = 0, s_max = 0;
  double observed = 0.0;

  app.add_option("--command", command,
                 "attack | breakdown-point | reachable | equivariance-check | limit-set")
      ->capture_default_str();
  app.add_option("--estimator", config.estimator, "Catalog name, e.g. mean, trimmed_mean:0.25, b1, ols")
      ->capture_default_str();
  app.add_option("--input", inputs, "CSV sample file; repeat to build a panel");
  app.add_option("--domain", domain, "Domain tag for scalar CSV input: real | nonnegative")
      ->capture_default_str();
  app.add_option("--generate", generate, "Seeded generator: n=..,seed=..,domain=..");
  auto* panel_opt = app.add_option("--panel", panel, "Number of generated samples");
  app.add_option("--attack", attack, "kind=..,mask=..,c0=..,gamma=..,M=..,dir=..,target=..,position=..,seed=..");
  auto* s_opt = app.add_option("--s", s, "Number of replaced observations");
  auto* s_max_opt = app.add_option("--s-max", s_max, "Largest s for breakdown search or nesting check");
  app.add_option("--definition", definition, "def1 | def2 | def3 | def4 | genton-lucas");
  app.add_option("--box", config.oracle.box, "Oracle box half-width B")->capture_default_str();
  app.add_option("--grid", config.oracle.grid, "Oracle grid points G")->capture_default_str();
  app.add_option("--budget", config.oracle.budget, "Oracle evaluation budget")->capture_default_str();
  app.add_option("--strategy", strategy, "auto | exhaustive | monotone-extremes");
  app.add_option("--threads", config.oracle.threads, "Oracle worker threads (0 = hardware)");
  app.add_option("--c", config.identity_c, "Constant for the half identities")->capture_default_str();
  auto* observed_opt = app.add_option("--observed", observed, "Observed estimate for the informativeness query");
  app.add_option("--tolerances", tolerances,
                 "divergence_factor=..,convergence_tol=..,window=..,agreement_tol=..");
  app.add_option("--out", out, "Report path; stdout when omitted");

  CLI11_PARSE(app, argc, argv);

  try {
    config.command = parse_command(command);
    config.input_domain = parse_domain(domain);
    for (const auto& p : inputs) config.inputs.emplace_back(p);
    if (!generate.empty()) config.generator = parse_generator_spec(generate);
    if (*panel_opt) config.panel = panel;
    if (!attack.empty()) config.attack = parse_attack_overrides(attack);
    if (*s_opt) config.s = s;
    if (*s_max_opt) config.s_max = s_max;
    if (!definition.empty()) config.definition = parse_definition(definition);
    if (!strategy.empty()) config.oracle.strategy = parse_oracle_strategy(strategy);
    if (*observed_opt) config.observed = observed;
    if (!tolerances.empty()) apply_tolerances(tolerances, config.thresholds);

    emit(run(config), out);
    return 0;
  } catch (const BudgetExceeded& e) {
    Json report;
    report["schema_version"] = kSchemaVersion;
    report["error"] = Json{{"kind", "budget-exceeded"}, {"message", e.what()}};
    try {
      emit(report, out);
    } catch (const std::exception&) {
    }
    std::cerr << "robustlab: " << e.what() << "\n";
    return kExitBudget;
  } catch (const std::exception& e) {
    std::cerr << "robustlab: " << e.what() << "\n";
    return kExitConfig;
  }
}

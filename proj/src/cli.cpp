#include "robustlab/cli.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "robustlab/equivariance.hpp"

namespace robustlab {

std::string_view to_string(Command c) {
  switch (c) {
    case Command::Attack: return "attack";
    case Command::BreakdownPoint: return "breakdown-point";
    case Command::Reachable: return "reachable";
    case Command::EquivarianceCheck: return "equivariance-check";
    case Command::LimitSet: return "limit-set";
  }
  return "?";
}

Command parse_command(std::string_view text) {
  for (auto c : {Command::Attack, Command::BreakdownPoint, Command::Reachable,
                 Command::EquivarianceCheck, Command::LimitSet}) {
    if (to_string(c) == text) return c;
  }
  throw InvalidArgument("unknown command '" + std::string(text) + "'");
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::optional<double> to_double(std::string_view s) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

double require_double(std::string_view s, std::string_view key) {
  auto v = to_double(s);
  if (!v) throw InvalidArgument("malformed value for " + std::string(key) + ": '" + std::string(s) + "'");
  return *v;
}

std::uint64_t require_unsigned(std::string_view s, std::string_view key) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw InvalidArgument("malformed value for " + std::string(key) + ": '" + std::string(s) + "'");
  }
  return v;
}

// Calls fn(key, value) for every "key=value" item of a comma list.
template <typename Fn>
void for_each_pair(std::string_view text, Fn&& fn) {
  for (auto item : split(text, ',')) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string_view::npos) throw InvalidArgument("expected key=value, got '" + std::string(item) + "'");
    fn(trim(item.substr(0, eq)), trim(item.substr(eq + 1)));
  }
}

}  // namespace

Sample parse_sample_csv_text(std::string_view text, Domain scalar_domain) {
  std::vector<std::vector<double>> rows;
  std::size_t columns = 0;
  bool first_row = true;
  std::size_t line_no = 0;
  for (auto line : split(text, '\n')) {
    ++line_no;
    if (line.empty()) continue;
    const auto cells = split(line, ',');
    std::vector<double> row;
    bool numeric = true;
    for (auto cell : cells) {
      auto v = to_double(cell);
      if (!v) {
        numeric = false;
        break;
      }
      row.push_back(*v);
    }
    if (!numeric) {
      if (first_row) {
        first_row = false;
        columns = cells.size();
        continue;  // header
      }
      throw InvalidArgument("non-numeric cell on line " + std::to_string(line_no));
    }
    if (columns == 0) columns = row.size();
    if (row.size() != columns) throw InvalidArgument("mixed column counts on line " + std::to_string(line_no));
    first_row = false;
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw InvalidArgument("sample file holds no observations");
  if (columns == 1) {
    std::vector<double> values;
    for (const auto& r : rows) values.push_back(r[0]);
    return Sample::scalar(std::move(values), scalar_domain);
  }
  if (columns == 2) {
    std::vector<RegressionPair> pairs;
    for (const auto& r : rows) pairs.push_back({r[0], r[1]});
    return Sample::regression(std::move(pairs));
  }
  throw InvalidArgument("unsupported column count " + std::to_string(columns) + " (expected 1 or 2)");
}

Sample parse_sample_csv(const std::filesystem::path& path, Domain scalar_domain) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot open sample file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_sample_csv_text(buf.str(), scalar_domain);
}

std::vector<Sample> generate_panel(const GeneratorSpec& spec, std::size_t count) {
  if (spec.n == 0) throw InvalidArgument("generator needs n >= 1");
  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<Sample> panel;
  for (std::size_t member = 0; member < count; ++member) {
    if (spec.domain == Domain::Regression) {
      std::vector<RegressionPair> pairs(spec.n);
      for (auto& p : pairs) {
        p.x = normal(rng);
        p.y = p.x + 0.5 * normal(rng);
      }
      panel.push_back(Sample::regression(std::move(pairs)));
    } else {
      std::vector<double> values(spec.n);
      for (double& v : values) {
        v = normal(rng);
        if (spec.domain == Domain::NonNegative) v = std::abs(v);
      }
      panel.push_back(Sample::scalar(std::move(values), spec.domain));
    }
  }
  return panel;
}

GeneratorSpec parse_generator_spec(std::string_view text) {
  GeneratorSpec spec;
  for_each_pair(text, [&](std::string_view key, std::string_view value) {
    if (key == "n") {
      spec.n = require_unsigned(value, key);
    } else if (key == "seed") {
      spec.seed = require_unsigned(value, key);
    } else if (key == "domain") {
      spec.domain = parse_domain(value);
    } else {
      throw InvalidArgument("unknown generator key '" + std::string(key) + "'");
    }
  });
  return spec;
}

AttackOverrides parse_attack_overrides(std::string_view text) {
  AttackOverrides o;
  for_each_pair(text, [&](std::string_view key, std::string_view value) {
    if (key == "kind") {
      o.kind = parse_attack_kind(value);
    } else if (key == "mask") {
      o.mask = std::string(value);
    } else if (key == "c0") {
      o.c0 = require_double(value, key);
    } else if (key == "gamma") {
      o.gamma = require_double(value, key);
    } else if (key == "M") {
      o.steps = require_unsigned(value, key);
    } else if (key == "dir") {
      const double d = require_double(value, key);
      if (d != 1.0 && d != -1.0) throw InvalidArgument("dir must be +1 or -1");
      o.direction = static_cast<int>(d);
    } else if (key == "target") {
      o.target = require_double(value, key);
    } else if (key == "position") {
      o.position = require_unsigned(value, key);
    } else if (key == "seed") {
      o.seed = require_unsigned(value, key);
    } else {
      throw InvalidArgument("unknown attack key '" + std::string(key) + "'");
    }
  });
  if (!o.kind) throw InvalidArgument("--attack needs kind=...");
  if (*o.kind == AttackKind::Custom) throw InvalidArgument("custom attacks are not configurable from the CLI");
  return o;
}

void apply_tolerances(std::string_view text, LimitThresholds& th) {
  for_each_pair(text, [&](std::string_view key, std::string_view value) {
    if (key == "divergence_factor") {
      th.divergence_factor = require_double(value, key);
    } else if (key == "convergence_tol") {
      th.convergence_tol = require_double(value, key);
    } else if (key == "window") {
      th.window = require_unsigned(value, key);
    } else if (key == "agreement_tol") {
      th.agreement_tol = require_double(value, key);
    } else {
      throw InvalidArgument("unknown tolerance key '" + std::string(key) + "'");
    }
  });
}

namespace {

bool panel_definition(Definition d) {
  return d == Definition::Def3 || d == Definition::Def4 || d == Definition::GentonLucas;
}

std::size_t effective_panel_size(const RunConfig& config) {
  if (config.panel) return *config.panel;
  const bool wants_panel = config.command == Command::LimitSet ||
                           (config.definition && panel_definition(*config.definition));
  return wants_panel ? 5 : 1;
}

std::vector<Sample> load_panel(const RunConfig& config) {
  if (!config.inputs.empty() && config.generator) {
    throw InvalidArgument("use either --input or --generate, not both");
  }
  if (!config.inputs.empty()) {
    std::vector<Sample> panel;
    for (const auto& path : config.inputs) panel.push_back(parse_sample_csv(path, config.input_domain));
    return panel;
  }
  if (config.generator) return generate_panel(*config.generator, effective_panel_size(config));
  throw InvalidArgument("no sample: pass --input or --generate");
}

ContaminationMask override_mask(const AttackOverrides& o, std::size_t n, std::size_t s) {
  const std::string how = o.mask.value_or("first");
  if (how == "first") return ContaminationMask::first(n, s);
  if (how == "last") return ContaminationMask::last(n, s);
  if (how == "random") return ContaminationMask::random(n, s, o.seed.value_or(1));
  if (how.size() != n || how.find_first_not_of("01") != std::string::npos) {
    throw InvalidArgument("mask must be first, last, random or a 0/1 string of length n");
  }
  std::vector<bool> flags(n);
  for (std::size_t i = 0; i < n; ++i) flags[i] = how[i] == '1';
  return ContaminationMask(std::move(flags));
}

AttackSpec override_spec(const AttackOverrides& o, std::size_t n, std::size_t s) {
  AttackSpec spec;
  spec.kind = *o.kind;
  if (spec.kind == AttackKind::SingleOutlierEscape && !o.mask) {
    spec = single_outlier_escape_spec(n, o.position.value_or(0));
  } else {
    spec.mask = override_mask(o, n, s);
  }
  spec.c0 = o.c0.value_or(spec.c0);
  spec.gamma = o.gamma.value_or(spec.gamma);
  spec.steps = o.steps.value_or(spec.steps);
  spec.direction = o.direction.value_or(spec.direction);
  spec.target = o.target;
  if (o.mask == "random") spec.seed = o.seed.value_or(1);
  return spec;
}

std::vector<AttackSpec> attacks_for(const RunConfig& config, const Estimator& t, const Sample& x,
                                    std::size_t s) {
  if (!config.attack.empty()) return {override_spec(config.attack, x.size(), s)};
  return build_equivariant_attack(t.descriptor(), x, s);
}

Json config_json(const RunConfig& config) {
  Json out;
  out["command"] = to_string(config.command);
  out["estimator"] = config.estimator;
  Json inputs = Json::array();
  for (const auto& p : config.inputs) inputs.push_back(p.generic_string());
  out["inputs"] = std::move(inputs);
  out["input_domain"] = to_string(config.input_domain);
  if (config.generator) {
    out["generator"] = Json{{"n", config.generator->n},
                            {"seed", config.generator->seed},
                            {"domain", to_string(config.generator->domain)}};
  } else {
    out["generator"] = nullptr;
  }
  out["panel"] = effective_panel_size(config);
  Json attack;
  const auto& a = config.attack;
  attack["kind"] = a.kind ? Json(to_string(*a.kind)) : Json("canonical");
  attack["mask"] = a.mask.value_or("first");
  attack["c0"] = a.c0.value_or(1e3);
  attack["gamma"] = a.gamma.value_or(10.0);
  attack["M"] = a.steps.value_or(6);
  attack["dir"] = a.direction.value_or(1);
  attack["target"] = a.target ? Json(*a.target) : Json(nullptr);
  attack["position"] = a.position.value_or(0);
  attack["seed"] = a.seed ? Json(*a.seed) : Json(nullptr);
  out["attack"] = std::move(attack);
  out["s"] = config.s ? Json(*config.s) : Json(nullptr);
  out["s_max"] = config.s_max ? Json(*config.s_max) : Json(nullptr);
  out["definition"] = config.definition ? Json(to_string(*config.definition)) : Json(nullptr);
  out["oracle"] = to_json(config.oracle);
  out["tolerances"] = to_json(config.thresholds);
  out["identity_c"] = config.identity_c;
  out["observed"] = config.observed ? Json(*config.observed) : Json(nullptr);
  return out;
}

Json run_attack(const RunConfig& config, const Estimator& t, const std::vector<Sample>& panel) {
  const Sample& x = panel.front();
  const std::size_t s = config.s.value_or(1);
  Json result;
  result["sample"] = to_json(x);
  Json attacks = Json::array();
  for (const auto& spec : attacks_for(config, t, x, s)) {
    const auto seq = generate_attack(spec, x);
    const auto traj = evaluate_trajectory(t, seq);
    Json entry;
    entry["spec"] = to_json(seq.spec);
    entry["capped"] = seq.capped;
    entry["trajectory"] = to_json(traj);
    try {
      entry["limit"] = to_json(classify_limit(traj, config.thresholds));
    } catch (const InvalidArgument& e) {
      entry["limit"] = Json{{"outcome", "undecided"}, {"reason", e.what()}};
    }
    entry["def1"] = to_json(detect_def1(t, x, spec, config.thresholds));
    entry["def2"] = to_json(detect_def2(t, x, spec, config.thresholds));
    if (panel.size() >= 2) entry["def3"] = to_json(detect_def3(t, panel, spec, config.thresholds));
    attacks.push_back(std::move(entry));
  }
  result["attacks"] = std::move(attacks);
  return result;
}

Json run_breakdown(const RunConfig& config, const Estimator& t, const std::vector<Sample>& panel) {
  BreakdownOptions options;
  options.definition = config.definition.value_or(Definition::Def1);
  options.thresholds = config.thresholds;
  options.oracle = config.oracle;
  options.max_s = config.s_max.value_or(0);
  if (!config.attack.empty()) {
    options.catalog = [o = config.attack](const Sample& x, std::size_t s) {
      return std::vector<AttackSpec>{override_spec(o, x.size(), s)};
    };
  }
  return to_json(breakdown_point(t, panel, options));
}

Json run_reachable(const RunConfig& config, const Estimator& t, const std::vector<Sample>& panel) {
  const Sample& x = panel.front();
  const std::size_t s = config.s.value_or(1);
  Json result;
  result["sample"] = to_json(x);
  result["s"] = s;
  const auto oracle = reachable_oracle(t, x, s, config.oracle);
  result["oracle"] = to_json(oracle);

  std::optional<ReachableSet> analytic;
  if (t.name() == "median" && x.size() % 2 == 1 && s <= (x.size() + 1) / 2) {
    analytic = median_reachable_analytic(x, s);
  } else if (t.name() == "mean" && x.domain() == Domain::NonNegative && s < x.size()) {
    analytic = mean_reachable_nonneg(x, s);
  }
  result["analytic"] = analytic ? to_json(*analytic) : Json(nullptr);
  if (analytic && !oracle.intervals.empty()) {
    const Interval clipped = clip(analytic->hull(), oracle.grid_low, oracle.box);
    result["hausdorff_to_analytic"] = hausdorff_distance(oracle.hull(), clipped);
    result["grid_step"] = config.oracle.grid_step(x.domain());
  } else {
    result["hausdorff_to_analytic"] = nullptr;
  }
  if (config.s_max) result["nesting"] = to_json(nesting_check(t, x, *config.s_max, config.oracle));
  if (config.definition == Definition::Def4) {
    result["def4"] = to_json(detect_def4(t, panel, s, config.oracle));
  }
  if (config.observed) {
    result["informativeness"] = to_json(informativeness_query(t, x.size(), x.domain(), s, *config.observed));
  }
  return result;
}

std::vector<GroupAction> default_actions(EquivarianceTag tag, Domain domain) {
  if (tag == EquivarianceTag::XScaleInverseEquivariant) {
    return {GroupAction::x_scale(1e-3), GroupAction::x_scale(10.0), GroupAction::x_scale(1e3),
            GroupAction::x_scale(-2.0)};
  }
  if (domain == Domain::NonNegative) {
    return {GroupAction::translate(10.0), GroupAction::scale(2.5), GroupAction::affine(2.0, 3.0)};
  }
  return {GroupAction::translate(10.0), GroupAction::scale(-1.0), GroupAction::scale(2.5),
          GroupAction::affine(2.0, 3.0), GroupAction::affine(-5.0, 7.0)};
}

Json run_equivariance(const RunConfig& config, const Estimator& t, const std::vector<Sample>& panel) {
  const Sample& x = panel.front();
  Json result;
  result["sample"] = to_json(x);
  Json checks = Json::array();
  for (auto tag : t.descriptor().tags) {
    checks.push_back(to_json(check_equivariance_tag(t, tag, x, default_actions(tag, x.domain()))));
  }
  const bool even = x.size() % 2 == 0;
  const double c = config.identity_c;
  if (t.descriptor().has_tag(EquivarianceTag::TranslationEquivariant) && even) {
    checks.push_back(to_json(check_translation_half_identity(t, x, c)));
    checks.push_back(to_json(check_translation_half_identity(t, x, -c)));
  }
  if (t.descriptor().has_tag(EquivarianceTag::XScaleInverseEquivariant) && even) {
    checks.push_back(to_json(check_glm_scaling_identity(t, x, c)));
  }
  result["checks"] = std::move(checks);
  return result;
}

Json run_limit_set(const RunConfig& config, const Estimator& t, const std::vector<Sample>& panel) {
  const std::size_t s = config.s.value_or(1);
  const auto attacks = attacks_for(config, t, panel.front(), s);
  Json result;
  result["s"] = s;
  result["genton_lucas"] = to_json(genton_lucas_limit_set(t, panel, attacks, config.thresholds));
  Json def3 = Json::array();
  for (const auto& spec : attacks) {
    def3.push_back(Json{{"attack", spec.describe()}, {"verdict", to_json(detect_def3(t, panel, spec, config.thresholds))}});
  }
  result["def3"] = std::move(def3);
  return result;
}

}  // namespace

Json run(const RunConfig& config) {
  const auto started = std::chrono::steady_clock::now();
  const Estimator t = make_estimator(config.estimator);
  const auto panel = load_panel(config);

  Json report;
  report["schema_version"] = kSchemaVersion;
  report["tool"] = Json{{"name", "robustlab"}, {"version", ROBUSTLAB_VERSION}};
  report["config"] = config_json(config);
  report["estimator"] = to_json(t.descriptor());
  switch (config.command) {
    case Command::Attack: report["result"] = run_attack(config, t, panel); break;
    case Command::BreakdownPoint: report["result"] = run_breakdown(config, t, panel); break;
    case Command::Reachable: report["result"] = run_reachable(config, t, panel); break;
    case Command::EquivarianceCheck: report["result"] = run_equivariance(config, t, panel); break;
    case Command::LimitSet: report["result"] = run_limit_set(config, t, panel); break;
  }
  report["wall_clock_seconds"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return report;
}

std::string report_body(const Json& report) {
  Json body = report;
  body.erase("wall_clock_seconds");
  return body.dump(2);
}

}  // namespace robustlab

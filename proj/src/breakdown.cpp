#include "robustlab/breakdown.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace robustlab {

std::size_t Trajectory::valid_count() const {
  return static_cast<std::size_t>(
      std::count_if(entries.begin(), entries.end(), [](const auto& e) { return e.value.has_value(); }));
}

std::string_view to_string(LimitClassification::Outcome o) {
  switch (o) {
    case LimitClassification::Outcome::Diverged: return "diverged";
    case LimitClassification::Outcome::Converged: return "converged";
    case LimitClassification::Outcome::Undecided: return "undecided";
  }
  return "?";
}

Trajectory evaluate_trajectory(const Estimator& t, const AttackSequence& attack) {
  Trajectory traj;
  traj.attack = attack.spec.describe();
  try {
    traj.baseline = t(attack.clean);
  } catch (const EstimatorError&) {
  }
  for (std::size_t m = 0; m < attack.samples.size(); ++m) {
    TrajectoryEntry entry;
    entry.step = m + 1;
    entry.magnitude = attack.magnitudes[m];
    try {
      entry.value = t(attack.samples[m]);
    } catch (const EstimatorError& e) {
      entry.failure = e.what();
    }
    traj.entries.push_back(std::move(entry));
  }
  return traj;
}

namespace {

double sup_distance(const EstimateValue& a, const EstimateValue& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.dimension(); ++i) {
    d = std::max(d, std::abs(a.components[i] - b.components[i]));
  }
  return d;
}

std::vector<std::vector<double>> tail_values(const Trajectory& traj, std::size_t window) {
  std::vector<std::vector<double>> out;
  const std::size_t start = traj.entries.size() > window ? traj.entries.size() - window : 0;
  for (std::size_t i = start; i < traj.entries.size(); ++i) {
    if (traj.entries[i].value) out.push_back(traj.entries[i].value->components);
  }
  return out;
}

Verdict undecided(std::string reason) {
  Verdict v;
  v.outcome = Outcome::Undecided;
  v.reason = std::move(reason);
  return v;
}

struct Resolved {
  LimitClassification limit;
  Trajectory trajectory;
};

// Generates, evaluates and classifies; any failure becomes an undecided
// classification instead of an exception.
Resolved resolve(const Estimator& t, const Sample& x, const AttackSpec& attack,
                 const LimitThresholds& th) {
  Resolved out;
  out.trajectory = evaluate_trajectory(t, generate_attack(attack, x));
  try {
    out.limit = classify_limit(out.trajectory, th);
  } catch (const InvalidArgument& e) {
    out.limit.outcome = LimitClassification::Outcome::Undecided;
    out.limit.reason = e.what();
  }
  return out;
}

Verdict divergence_verdict(const Resolved& r, const LimitThresholds& th) {
  Verdict v;
  v.outcome = Outcome::BrokenDivergence;
  std::ostringstream reason;
  reason << "norm diverged: last |T| = " << r.limit.last_norm << " at magnitude " << r.limit.last_magnitude;
  v.reason = reason.str();
  v.trajectory_tail = tail_values(r.trajectory, th.window);
  return v;
}

bool agree(const std::vector<double>& a, const std::vector<double>& b, double tol) {
  double norm = 0.0;
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    norm += a[i] * a[i];
    d = std::max(d, std::abs(a[i] - b[i]));
  }
  return d <= tol * (1.0 + std::sqrt(norm));
}

}  // namespace

LimitClassification classify_limit(const Trajectory& traj, const LimitThresholds& th) {
  if (th.window < 2) throw InvalidArgument("limit window must cover at least two steps");
  if (traj.valid_count() < th.window) {
    throw InvalidArgument("trajectory has " + std::to_string(traj.valid_count()) +
                          " valid entries, need " + std::to_string(th.window));
  }
  LimitClassification out;
  const auto& entries = traj.entries;
  const auto& last = entries.back();
  out.last_magnitude = last.magnitude;

  const std::size_t start = entries.size() - th.window;
  for (std::size_t i = start; i < entries.size(); ++i) {
    if (!entries[i].value) {
      out.outcome = LimitClassification::Outcome::Undecided;
      out.reason = "estimator undefined at step " + std::to_string(entries[i].step) + ": " +
                   entries[i].failure;
      return out;
    }
  }

  out.last_norm = last.value->norm();
  bool increasing = true;
  bool settled = true;
  const double conv_tol = th.convergence_tol * (1.0 + out.last_norm);
  for (std::size_t i = start; i + 1 < entries.size(); ++i) {
    const double a = entries[i].value->norm();
    const double b = entries[i + 1].value->norm();
    const double delta = sup_distance(*entries[i].value, *entries[i + 1].value);
    out.tail_ratios.push_back(a > 0.0 ? b / a : (b > 0.0 ? INFINITY : 1.0));
    out.tail_deltas.push_back(delta);
    increasing = increasing && b > a;
    settled = settled && delta < conv_tol;
  }

  const double baseline = traj.baseline ? traj.baseline->norm() : 0.0;
  const double tau = th.divergence_factor * (1.0 + baseline);
  if (increasing && out.last_norm > tau) {
    out.outcome = LimitClassification::Outcome::Diverged;
    return out;
  }
  if (settled) {
    out.outcome = LimitClassification::Outcome::Converged;
    out.limit = *last.value;
    return out;
  }
  out.outcome = LimitClassification::Outcome::Undecided;
  std::ostringstream reason;
  reason << "neither divergence (last |T| = " << out.last_norm << ", threshold " << tau
         << ") nor convergence (last delta " << out.tail_deltas.back() << ", tolerance " << conv_tol << ")";
  out.reason = reason.str();
  return out;
}

Verdict detect_def1(const Estimator& t, const Sample& x, const AttackSpec& attack,
                    const LimitThresholds& th) {
  const auto r = resolve(t, x, attack, th);
  switch (r.limit.outcome) {
    case LimitClassification::Outcome::Diverged:
      return divergence_verdict(r, th);
    case LimitClassification::Outcome::Converged: {
      Verdict v;
      v.outcome = Outcome::NotBroken;
      v.reason = "trajectory stays bounded";
      v.limit = r.limit.limit->components;
      return v;
    }
    case LimitClassification::Outcome::Undecided:
      break;
  }
  return undecided(r.limit.reason);
}

Verdict detect_def2(const Estimator& t, const Sample& x, const AttackSpec& attack,
                    const ValueSpace& space, const LimitThresholds& th) {
  const auto r = resolve(t, x, attack, th);
  switch (r.limit.outcome) {
    case LimitClassification::Outcome::Diverged:
      return divergence_verdict(r, th);
    case LimitClassification::Outcome::Converged: {
      Verdict v;
      const auto& t0 = r.limit.limit->components;
      v.limit = t0;
      const double tol = th.convergence_tol * (1.0 + r.limit.limit->norm());
      const auto cls = classify_point(t0, space, tol);
      if (cls == PointClass::Boundary) {
        v.outcome = Outcome::BrokenBoundary;
        v.reason = "limit is a boundary point of the " + std::string(to_string(space.kind())) + " value space";
        v.trajectory_tail = tail_values(r.trajectory, th.window);
      } else {
        v.outcome = Outcome::NotBroken;
        v.reason = "limit is " + std::string(to_string(cls)) + " to the value space";
      }
      return v;
    }
    case LimitClassification::Outcome::Undecided:
      break;
  }
  return undecided(r.limit.reason);
}

Verdict detect_def2(const Estimator& t, const Sample& x, const AttackSpec& attack,
                    const LimitThresholds& th) {
  return detect_def2(t, x, attack, value_space_on(t.descriptor(), x.domain()), th);
}

Verdict detect_def3(const Estimator& t, std::span<const Sample> panel, const AttackSpec& attack,
                    const LimitThresholds& th) {
  if (panel.size() < 2) throw InvalidArgument("Definition 3 needs a panel of at least two samples");
  for (const auto& x : panel) {
    if (x.size() != panel[0].size()) throw InvalidArgument("panel samples must share n");
  }

  std::size_t diverged = 0;
  std::size_t undecided_count = 0;
  std::vector<std::vector<double>> limits;
  std::vector<std::vector<double>> tails;
  for (const auto& x : panel) {
    const auto r = resolve(t, x, attack, th);
    switch (r.limit.outcome) {
      case LimitClassification::Outcome::Diverged:
        ++diverged;
        if (tails.empty()) tails = tail_values(r.trajectory, th.window);
        break;
      case LimitClassification::Outcome::Converged:
        limits.push_back(r.limit.limit->components);
        break;
      case LimitClassification::Outcome::Undecided:
        ++undecided_count;
        break;
    }
  }

  Verdict v;
  v.limit_set = limits;
  const std::string suffix = " (finite panel of " + std::to_string(panel.size()) + ": evidence, not proof)";
  if (diverged == panel.size()) {
    v.outcome = Outcome::BrokenDivergence;
    v.reason = "every panel member diverges" + suffix;
    v.trajectory_tail = std::move(tails);
    return v;
  }
  const bool mixed = diverged > 0 && !limits.empty();
  bool limits_agree = true;
  for (std::size_t i = 1; i < limits.size(); ++i) {
    limits_agree = limits_agree && agree(limits[0], limits[i], th.agreement_tol);
  }
  if (mixed || !limits_agree) {
    v.outcome = Outcome::NotBroken;
    v.reason = mixed ? "some members diverge while others converge" : "limits depend on the clean sample";
    return v;
  }
  if (undecided_count > 0) {
    return undecided(std::to_string(undecided_count) + " panel member(s) did not resolve");
  }
  v.outcome = Outcome::BrokenConstantLimit;
  v.limit = limits[0];
  v.reason = "every panel member converges to the same limit" + suffix;
  return v;
}

LimitSetReport genton_lucas_limit_set(const Estimator& t, std::span<const Sample> panel,
                                      std::span<const AttackSpec> attacks, const LimitThresholds& th) {
  if (panel.size() < 2) throw InvalidArgument("limit-set collapse needs a panel of at least two samples");
  if (attacks.empty()) throw InvalidArgument("limit-set collapse needs at least one attack");

  LimitSetReport report;
  std::size_t total_undecided = 0;
  std::optional<std::size_t> first_collapse;
  for (const auto& attack : attacks) {
    LimitSetEntry entry;
    entry.attack = attack.describe();
    for (const auto& x : panel) {
      const auto r = resolve(t, x, attack, th);
      switch (r.limit.outcome) {
        case LimitClassification::Outcome::Diverged:
          ++entry.diverged;
          break;
        case LimitClassification::Outcome::Converged: {
          ++entry.converged;
          const auto& value = r.limit.limit->components;
          const bool known = std::any_of(entry.clusters.begin(), entry.clusters.end(),
                                         [&](const auto& c) { return agree(c, value, th.agreement_tol); });
          if (!known) entry.clusters.push_back(value);
          break;
        }
        case LimitClassification::Outcome::Undecided:
          ++entry.undecided;
          break;
      }
    }
    total_undecided += entry.undecided;
    entry.collapsed = entry.undecided == 0 && entry.clusters.size() < panel.size();
    if (entry.collapsed && !first_collapse) first_collapse = report.per_attack.size();
    report.per_attack.push_back(std::move(entry));
  }
  if (total_undecided == attacks.size() * panel.size()) {
    throw InvalidArgument("every trajectory is undecided; no limit set can be formed");
  }

  Verdict& v = report.verdict;
  if (first_collapse) {
    const auto& entry = report.per_attack[*first_collapse];
    v.limit_set = entry.clusters;
    if (entry.clusters.empty()) {
      v.outcome = Outcome::BrokenDivergence;
      v.reason = "limit set is empty under " + entry.attack;
    } else {
      v.outcome = Outcome::BrokenConstantLimit;
      v.limit = entry.clusters.front();
      v.reason = "limit set collapses to " + std::to_string(entry.clusters.size()) +
                 " point(s) under " + entry.attack;
    }
    v.reason += "; finite-set threshold is a heuristic: fewer clusters than panel members (" +
                std::to_string(panel.size()) + ")";
    return report;
  }
  const bool all_resolved = total_undecided == 0;
  v.outcome = all_resolved ? Outcome::NotBroken : Outcome::Undecided;
  v.reason = all_resolved ? "every attack leaves a data-dependent limit set"
                          : "no attack collapsed the limit set and some trajectories did not resolve";
  for (const auto& entry : report.per_attack) {
    v.limit_set.insert(v.limit_set.end(), entry.clusters.begin(), entry.clusters.end());
  }
  return report;
}

std::string_view to_string(Definition d) {
  switch (d) {
    case Definition::Def1: return "def1";
    case Definition::Def2: return "def2";
    case Definition::Def3: return "def3";
    case Definition::Def4: return "def4";
    case Definition::GentonLucas: return "genton-lucas";
  }
  return "?";
}

Definition parse_definition(std::string_view text) {
  for (auto d : {Definition::Def1, Definition::Def2, Definition::Def3, Definition::Def4,
                 Definition::GentonLucas}) {
    if (to_string(d) == text) return d;
  }
  throw InvalidArgument("unknown breakdown definition '" + std::string(text) + "'");
}

namespace {

// Broken beats undecided beats not-broken.
PerSVerdict combine(std::size_t s, const std::vector<std::pair<std::string, Verdict>>& tries) {
  PerSVerdict out;
  out.s = s;
  if (tries.empty()) {
    out.verdict = undecided("no attack available");
    return out;
  }
  auto chosen = std::find_if(tries.begin(), tries.end(), [](const auto& t) { return t.second.broken(); });
  if (chosen == tries.end()) {
    chosen = std::find_if(tries.begin(), tries.end(),
                          [](const auto& t) { return t.second.outcome == Outcome::Undecided; });
  }
  if (chosen == tries.end()) chosen = tries.begin();
  out.attack = chosen->first;
  out.verdict = chosen->second;
  return out;
}

}  // namespace

BreakdownPointResult breakdown_point(const Estimator& t, std::span<const Sample> panel,
                                     const BreakdownOptions& options) {
  if (panel.empty()) throw InvalidArgument("breakdown_point needs at least one sample");
  const Sample& x = panel[0];
  const std::size_t n = x.size();
  const bool needs_panel = options.definition == Definition::Def3 ||
                           options.definition == Definition::Def4 ||
                           options.definition == Definition::GentonLucas;
  if (needs_panel && panel.size() < 2) {
    throw InvalidArgument(std::string(to_string(options.definition)) + " needs a panel of at least two samples");
  }
  if (!options.catalog && options.definition != Definition::Def4 && t.descriptor().tags.empty()) {
    throw InvalidArgument("estimator '" + t.name() + "' has no canonical attack; supply an attack catalog");
  }

  BreakdownPointResult result;
  result.definition = options.definition;
  result.n = n;
  const std::size_t max_s = options.max_s == 0 ? n : std::min(options.max_s, n);

  for (std::size_t s = 1; s <= max_s; ++s) {
    std::vector<std::pair<std::string, Verdict>> tries;
    if (options.definition == Definition::Def4) {
      try {
        tries.emplace_back("reachable-set oracle", detect_def4(t, panel, s, options.oracle));
      } catch (const BudgetExceeded& e) {
        tries.emplace_back("reachable-set oracle", undecided(e.what()));
      }
    } else {
      const auto attacks = options.catalog ? options.catalog(x, s) : build_equivariant_attack(t.descriptor(), x, s);
      if (options.definition == Definition::GentonLucas) {
        try {
          auto report = genton_lucas_limit_set(t, panel, attacks, options.thresholds);
          tries.emplace_back("limit set over " + std::to_string(attacks.size()) + " attack(s)",
                             std::move(report.verdict));
        } catch (const InvalidArgument& e) {
          tries.emplace_back("limit set", undecided(e.what()));
        }
      } else {
        for (const auto& attack : attacks) {
          Verdict v;
          switch (options.definition) {
            case Definition::Def1: v = detect_def1(t, x, attack, options.thresholds); break;
            case Definition::Def2: v = detect_def2(t, x, attack, options.thresholds); break;
            case Definition::Def3: v = detect_def3(t, panel, attack, options.thresholds); break;
            default: break;
          }
          tries.emplace_back(attack.describe(), std::move(v));
        }
      }
    }
    result.per_s.push_back(combine(s, tries));
    if (!result.s_star && result.per_s.back().verdict.broken()) {
      result.s_star = s;
      result.fraction = static_cast<double>(s) / static_cast<double>(n);
    }
  }
  return result;
}

}  // namespace robustlab

#include "robustlab/report.hpp"

namespace robustlab {

namespace {

Json vector_json(const std::vector<double>& v) {
  Json out = Json::array();
  for (double x : v) out.push_back(x);
  return out;
}

Json matrix_json(const std::vector<std::vector<double>>& rows) {
  Json out = Json::array();
  for (const auto& r : rows) out.push_back(vector_json(r));
  return out;
}

}  // namespace

Json to_json(const Sample& x) {
  Json out;
  out["domain"] = to_string(x.domain());
  out["n"] = x.size();
  Json obs = Json::array();
  if (x.is_regression()) {
    for (const auto& p : x.pairs()) obs.push_back(Json::array({p.x, p.y}));
  } else {
    for (double v : x.values()) obs.push_back(v);
  }
  out["observations"] = std::move(obs);
  return out;
}

Json to_json(const ContaminationMask& mask) {
  std::string bits;
  for (bool f : mask.flags()) bits.push_back(f ? '1' : '0');
  return Json{{"flags", bits}, {"s", mask.count()}};
}

Json to_json(const ValueSpace& space) {
  Json out;
  out["kind"] = to_string(space.kind());
  out["dimension"] = space.dimension();
  switch (space.kind()) {
    case ValueSpace::Kind::OpenHalfLine:
    case ValueSpace::Kind::ClosedHalfLine:
      out["lower"] = space.lower();
      break;
    case ValueSpace::Kind::ClosedInterval:
      out["lower"] = space.lower();
      out["upper"] = space.upper();
      break;
    case ValueSpace::Kind::Singleton:
      out["point"] = vector_json(space.point());
      break;
    case ValueSpace::Kind::FullEuclidean:
      break;
  }
  out["boundary"] = matrix_json(space.boundary());
  return out;
}

Json to_json(const Interval& interval) {
  Json out;
  out["lo"] = interval.lo_unbounded ? Json(nullptr) : Json(interval.lo);
  out["hi"] = interval.hi_unbounded ? Json(nullptr) : Json(interval.hi);
  out["lo_unbounded"] = interval.lo_unbounded;
  out["hi_unbounded"] = interval.hi_unbounded;
  return out;
}

Json to_json(const ReachableSet& set) {
  Json out;
  Json intervals = Json::array();
  for (const auto& iv : set.intervals) intervals.push_back(to_json(iv));
  out["intervals"] = std::move(intervals);
  Json prov;
  prov["kind"] = to_string(set.provenance);
  if (set.provenance == ReachableSet::Provenance::Oracle) {
    prov["box"] = set.box;
    prov["grid_low"] = set.grid_low;
    prov["grid"] = set.grid;
    prov["strategy"] = to_string(set.strategy);
    prov["evaluations"] = set.evaluations;
    prov["failures"] = set.failures;
  }
  out["provenance"] = std::move(prov);
  return out;
}

Json to_json(const Verdict& verdict) {
  Json out;
  out["outcome"] = to_string(verdict.outcome);
  out["reason"] = verdict.reason;
  Json evidence = Json::object();
  if (!verdict.trajectory_tail.empty()) evidence["trajectory_tail"] = matrix_json(verdict.trajectory_tail);
  if (verdict.limit) evidence["limit"] = vector_json(*verdict.limit);
  if (!verdict.limit_set.empty()) evidence["limit_set"] = matrix_json(verdict.limit_set);
  if (!verdict.reachable_hulls.empty()) {
    Json hulls = Json::array();
    for (const auto& member : verdict.reachable_hulls) {
      Json m = Json::array();
      for (const auto& iv : member) m.push_back(to_json(iv));
      hulls.push_back(std::move(m));
    }
    evidence["reachable_hulls"] = std::move(hulls);
  }
  out["evidence"] = std::move(evidence);
  return out;
}

Json to_json(const AttackSpec& spec) {
  Json out;
  out["kind"] = to_string(spec.kind);
  out["mask"] = to_json(spec.mask);
  out["c0"] = spec.c0;
  out["gamma"] = spec.gamma;
  out["M"] = spec.kind == AttackKind::Custom ? spec.custom_outliers.size() : spec.steps;
  out["direction"] = spec.direction;
  out["target"] = spec.target ? Json(*spec.target) : Json(nullptr);
  out["seed"] = spec.seed ? Json(*spec.seed) : Json(nullptr);
  return out;
}

Json to_json(const Trajectory& traj) {
  Json out;
  out["attack"] = traj.attack;
  out["baseline"] = traj.baseline ? vector_json(traj.baseline->components) : Json(nullptr);
  Json steps = Json::array();
  for (const auto& e : traj.entries) {
    Json step;
    step["step"] = e.step;
    step["magnitude"] = e.magnitude;
    step["value"] = e.value ? vector_json(e.value->components) : Json(nullptr);
    if (!e.failure.empty()) step["failure"] = e.failure;
    steps.push_back(std::move(step));
  }
  out["steps"] = std::move(steps);
  return out;
}

Json to_json(const LimitClassification& limit) {
  Json out;
  out["outcome"] = to_string(limit.outcome);
  out["limit"] = limit.limit ? vector_json(limit.limit->components) : Json(nullptr);
  out["last_norm"] = limit.last_norm;
  out["last_magnitude"] = limit.last_magnitude;
  out["tail_ratios"] = vector_json(limit.tail_ratios);
  out["tail_deltas"] = vector_json(limit.tail_deltas);
  if (!limit.reason.empty()) out["reason"] = limit.reason;
  return out;
}

Json to_json(const LimitThresholds& th) {
  Json out;
  out["divergence_factor"] = th.divergence_factor;
  out["convergence_tol"] = th.convergence_tol;
  out["window"] = th.window;
  out["agreement_tol"] = th.agreement_tol;
  return out;
}

Json to_json(const OracleOptions& options) {
  Json out;
  out["box"] = options.box;
  out["grid"] = options.grid;
  out["budget"] = options.budget;
  out["lipschitz_slack"] = options.lipschitz_slack;
  out["strategy"] = to_string(options.strategy);
  return out;
}

Json to_json(const IdentityReport& report) {
  Json out;
  out["identity"] = report.identity;
  out["max_discrepancy"] = report.max_discrepancy;
  out["tolerance"] = report.tolerance;
  out["trials"] = report.trials;
  out["pass"] = report.pass;
  return out;
}

Json to_json(const NestingReport& report) {
  Json out;
  out["pass"] = report.pass;
  out["first_violation"] = report.first_violation ? Json(*report.first_violation) : Json(nullptr);
  Json sets = Json::array();
  for (std::size_t s = 0; s < report.sets.size(); ++s) {
    sets.push_back(Json{{"s", s}, {"set", to_json(report.sets[s])}});
  }
  out["sets"] = std::move(sets);
  return out;
}

Json to_json(const LimitSetReport& report) {
  Json out;
  out["verdict"] = to_json(report.verdict);
  Json attacks = Json::array();
  for (const auto& e : report.per_attack) {
    Json a;
    a["attack"] = e.attack;
    a["diverged"] = e.diverged;
    a["converged"] = e.converged;
    a["undecided"] = e.undecided;
    a["clusters"] = matrix_json(e.clusters);
    a["collapsed"] = e.collapsed;
    attacks.push_back(std::move(a));
  }
  out["per_attack"] = std::move(attacks);
  return out;
}

Json to_json(const BreakdownPointResult& result) {
  Json out;
  out["definition"] = to_string(result.definition);
  out["n"] = result.n;
  out["s_star"] = result.s_star ? Json(*result.s_star) : Json(nullptr);
  out["fraction"] = result.fraction ? Json(*result.fraction) : Json(nullptr);
  Json per_s = Json::array();
  for (const auto& p : result.per_s) {
    per_s.push_back(Json{{"s", p.s}, {"attack", p.attack}, {"verdict", to_json(p.verdict)}});
  }
  out["per_s"] = std::move(per_s);
  return out;
}

Json to_json(const MembershipConstraint& c) {
  Json out;
  out["kind"] = to_string(c.kind);
  out["estimator"] = c.estimator;
  out["n"] = c.n;
  out["s"] = c.s;
  out["observed"] = c.t;
  out["informative"] = c.informative();
  out["constraint"] = c.describe();
  return out;
}

Json to_json(const EstimatorDescriptor& desc) {
  Json out;
  out["name"] = desc.name;
  out["arity"] = to_string(desc.arity);
  out["value_space"] = to_json(desc.value_space);
  Json tags = Json::array();
  for (auto t : desc.tags) tags.push_back(to_string(t));
  out["equivariance_tags"] = std::move(tags);
  out["min_n"] = desc.min_n;
  return out;
}

}  // namespace robustlab

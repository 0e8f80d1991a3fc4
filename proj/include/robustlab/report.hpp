#pragma once

// JSON encodings of analysis results. Keys keep insertion order so reports
// diff cleanly.

#include <json.hpp>

#include "robustlab/attacks.hpp"
#include "robustlab/breakdown.hpp"
#include "robustlab/core.hpp"
#include "robustlab/equivariance.hpp"
#include "robustlab/reachable.hpp"

namespace robustlab {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchemaVersion = "1";

Json to_json(const Sample& x);
Json to_json(const ContaminationMask& mask);
Json to_json(const ValueSpace& space);
Json to_json(const Interval& interval);
Json to_json(const ReachableSet& set);
Json to_json(const Verdict& verdict);
Json to_json(const AttackSpec& spec);
Json to_json(const Trajectory& traj);
Json to_json(const LimitClassification& limit);
Json to_json(const LimitThresholds& th);
Json to_json(const OracleOptions& options);
Json to_json(const IdentityReport& report);
Json to_json(const NestingReport& report);
Json to_json(const LimitSetReport& report);
Json to_json(const BreakdownPointResult& result);
Json to_json(const MembershipConstraint& constraint);
Json to_json(const EstimatorDescriptor& desc);

}  // namespace robustlab

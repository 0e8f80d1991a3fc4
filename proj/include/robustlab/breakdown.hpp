#pragma once

// Breakdown detectors. Each definition asks a different question of the
// trajectory T(X, Y_m, S) as the outliers Y_m grow:
//   def1         does the norm diverge?
//   def2         ... or does the value settle on a boundary point of the value space?
//   def3         ... for every clean sample in a panel, to one common limit?
//   genton-lucas does the set of limits over the panel collapse to a finite set?
//   def4         is the reachable set T_s(X) the same for every panel member?

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "robustlab/attacks.hpp"
#include "robustlab/core.hpp"
#include "robustlab/estimators.hpp"
#include "robustlab/reachable.hpp"

namespace robustlab {

/// Numerical stand-ins for m -> infinity.
struct LimitThresholds {
  /// Diverged when the last norm exceeds divergence_factor * (1 + |T(X)|).
  double divergence_factor = 1e6;
  /// Converged when successive deltas in the window stay below
  /// convergence_tol * (1 + |last value|).
  double convergence_tol = 1e-6;
  /// Trailing values inspected; window - 1 deltas.
  std::size_t window = 3;
  /// Limits agree when within agreement_tol * (1 + |t0|).
  double agreement_tol = 1e-4;
};

struct TrajectoryEntry {
  std::size_t step = 0;
  double magnitude = 0.0;
  std::optional<EstimateValue> value;
  /// Why the estimator could not be evaluated (empty when value is set).
  std::string failure;
};

struct Trajectory {
  std::string attack;
  /// T at the clean sample, when defined.
  std::optional<EstimateValue> baseline;
  std::vector<TrajectoryEntry> entries;

  std::size_t valid_count() const;
};

struct LimitClassification {
  enum class Outcome { Diverged, Converged, Undecided };

  Outcome outcome = Outcome::Undecided;
  std::optional<EstimateValue> limit;
  double last_norm = 0.0;
  double last_magnitude = 0.0;
  /// norm[i+1] / norm[i] over the window.
  std::vector<double> tail_ratios;
  /// sup-norm of value[i+1] - value[i] over the window.
  std::vector<double> tail_deltas;
  std::string reason;
};

std::string_view to_string(LimitClassification::Outcome o);

/// Evaluates T along the attack. Precondition failures are recorded in the
/// entry, never thrown.
Trajectory evaluate_trajectory(const Estimator& t, const AttackSequence& attack);

/// Throws InvalidArgument when fewer than `window` entries are valid. A failed
/// entry inside the window makes the outcome undecided.
LimitClassification classify_limit(const Trajectory& traj, const LimitThresholds& th = {});

Verdict detect_def1(const Estimator& t, const Sample& x, const AttackSpec& attack,
                    const LimitThresholds& th = {});

/// Boundary membership of the limit uses a tolerance of
/// convergence_tol * (1 + |t0|).
Verdict detect_def2(const Estimator& t, const Sample& x, const AttackSpec& attack,
                    const ValueSpace& space, const LimitThresholds& th = {});
/// Uses the estimator's declared value space for the sample's domain.
Verdict detect_def2(const Estimator& t, const Sample& x, const AttackSpec& attack,
                    const LimitThresholds& th = {});

/// The same attack (mask, schedule, direction) is applied to every panel
/// member. A finite panel stands in for "every X"; a broken verdict is
/// evidence, not proof.
Verdict detect_def3(const Estimator& t, std::span<const Sample> panel, const AttackSpec& attack,
                    const LimitThresholds& th = {});

struct LimitSetEntry {
  std::string attack;
  std::size_t diverged = 0;
  std::size_t converged = 0;
  std::size_t undecided = 0;
  /// Cluster representatives of the finite limits.
  std::vector<std::vector<double>> clusters;
  bool collapsed = false;
};

struct LimitSetReport {
  Verdict verdict;
  std::vector<LimitSetEntry> per_attack;
};

/// For each attack, collects the finite limits across the panel and clusters
/// them single-linkage at agreement_tol. An attack collapses the limit set
/// when every member resolved (diverged or converged) and there are fewer
/// clusters than panel members; the empty set counts. Broken when any attack
/// collapses. Throws InvalidArgument when every trajectory is undecided.
LimitSetReport genton_lucas_limit_set(const Estimator& t, std::span<const Sample> panel,
                                      std::span<const AttackSpec> attacks,
                                      const LimitThresholds& th = {});

enum class Definition { Def1, Def2, Def3, Def4, GentonLucas };

std::string_view to_string(Definition d);
Definition parse_definition(std::string_view text);

/// Attacks to try with s outliers against a sample.
using AttackCatalog = std::function<std::vector<AttackSpec>(const Sample&, std::size_t s)>;

struct BreakdownOptions {
  Definition definition = Definition::Def1;
  LimitThresholds thresholds;
  /// Empty: build_equivariant_attack.
  AttackCatalog catalog;
  /// Definition 4 only.
  OracleOptions oracle;
  /// Largest s tried; 0 means n.
  std::size_t max_s = 0;
};

struct PerSVerdict {
  std::size_t s = 0;
  Verdict verdict;
  /// Description of the attack that decided the verdict.
  std::string attack;
};

struct BreakdownPointResult {
  Definition definition = Definition::Def1;
  std::size_t n = 0;
  std::optional<std::size_t> s_star;
  std::optional<double> fraction;
  std::vector<PerSVerdict> per_s;
};

/// Tries s = 1..n independently and reports the smallest breaking s. Def1 and
/// Def2 attack panel[0]; the other definitions need at least two members.
BreakdownPointResult breakdown_point(const Estimator& t, std::span<const Sample> panel,
                                     const BreakdownOptions& options = {});

}  // namespace robustlab

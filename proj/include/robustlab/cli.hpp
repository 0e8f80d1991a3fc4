#pragma once

// Command-line front end: sample ingestion, seeded generators and the
// dispatch from a run configuration to a JSON report.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "robustlab/breakdown.hpp"
#include "robustlab/reachable.hpp"
#include "robustlab/report.hpp"

namespace robustlab {

enum class Command { Attack, BreakdownPoint, Reachable, EquivarianceCheck, LimitSet };

std::string_view to_string(Command c);
Command parse_command(std::string_view text);

struct GeneratorSpec {
  std::size_t n = 10;
  std::uint64_t seed = 1;
  Domain domain = Domain::Real;
};

/// Fields left unset fall back to the canonical attack for the estimator.
struct AttackOverrides {
  std::optional<AttackKind> kind;
  /// "first", "last", "random" or an explicit 0/1 string.
  std::optional<std::string> mask;
  std::optional<double> c0;
  std::optional<double> gamma;
  std::optional<std::size_t> steps;
  std::optional<int> direction;
  std::optional<double> target;
  std::optional<std::size_t> position;
  std::optional<std::uint64_t> seed;

  bool empty() const { return !kind; }
};

struct RunConfig {
  Command command = Command::Attack;
  std::string estimator = "mean";
  std::vector<std::filesystem::path> inputs;
  /// Domain tag for scalar CSV input.
  Domain input_domain = Domain::Real;
  std::optional<GeneratorSpec> generator;
  /// Panel size; defaults to 5 for panel-based definitions, 1 otherwise.
  std::optional<std::size_t> panel;
  AttackOverrides attack;
  std::optional<std::size_t> s;
  std::optional<std::size_t> s_max;
  std::optional<Definition> definition;
  OracleOptions oracle;
  LimitThresholds thresholds;
  /// Shift or scale constant for the half identities.
  double identity_c = 10.0;
  std::optional<double> observed;
};

/// One observation per line; one column gives a scalar sample, two columns
/// (x, y) a regression sample. A non-numeric first row is a header.
Sample parse_sample_csv(const std::filesystem::path& path, Domain scalar_domain = Domain::Real);
Sample parse_sample_csv_text(std::string_view text, Domain scalar_domain = Domain::Real);

/// Member i of a seeded panel: standard normal entries, |normal| for the
/// nonnegative domain, (z, z + 0.5 e) pairs for regression.
std::vector<Sample> generate_panel(const GeneratorSpec& spec, std::size_t count);

/// Parses "key=value,key=value" lists used by --generate, --attack and
/// --tolerances into the configuration. Throws InvalidArgument on unknown keys.
GeneratorSpec parse_generator_spec(std::string_view text);
AttackOverrides parse_attack_overrides(std::string_view text);
void apply_tolerances(std::string_view text, LimitThresholds& th);

/// Runs the configured analysis and returns the report. The report's
/// "wall_clock_seconds" field is the only one that varies between identical
/// runs.
Json run(const RunConfig& config);

/// The report without its wall-clock field, serialized.
std::string report_body(const Json& report);

}  // namespace robustlab

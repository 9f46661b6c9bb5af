#pragma once

#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "hqs/analysis.hpp"
#include "hqs/hilbert.hpp"
#include "hqs/model.hpp"
#include "hqs/propagator.hpp"
#include "hqs/sweep.hpp"

namespace hqs {

using Json = nlohmann::ordered_json;

/// Population trajectory sampled on [0, t_end] with `steps` equal intervals.
/// steps = 0 disables trajectory output.
struct TrajectoryOptions {
  double t_end = 0.0;
  int steps = 0;

  std::vector<double> times() const;
  bool operator==(const TrajectoryOptions&) const = default;
};

struct SnapshotOptions {
  double tau_star = std::numbers::pi;  // state analysed for zeta, QFI and P(n)
  std::vector<double> wigner_times;   // extra Wigner grids written to disk

  bool operator==(const SnapshotOptions&) const = default;
};

struct SweepOptions {
  SweepAxis axis1;
  SweepAxis axis2;
  Observable observable = Observable::Zeta;

  bool operator==(const SweepOptions&) const = default;
};

struct RunConfig {
  std::string preset;  // informational once expanded
  ModelParams model;
  InitialStateSpec initial;
  int dim_mech = 48;
  int dim_cav = 24;
  PropagatorConfig propagator;  // sample_times is derived and not serialised
  TrajectoryOptions trajectory;
  SnapshotOptions snapshots;
  AnalysisOptions analysis;
  std::optional<SweepOptions> sweep;
  bool validate_truncation = true;
  std::string output_dir = "out";

  void validate() const;
  SweepSpec sweep_spec() const;  // requires `sweep`
  bool operator==(const RunConfig&) const = default;
};

/// Parses a configuration document. A "preset" key expands first and the
/// remaining keys are merged on top. Unknown keys are rejected with their path.
RunConfig parse_config(std::string_view text, const std::vector<std::string>& overrides = {});
RunConfig parse_config_document(const Json& doc, const std::vector<std::string>& overrides = {});

/// Fully resolved document; parse_config_document(to_json(c)) == c.
Json to_json(const RunConfig& config);

/// Applies "a.b.c=value" to a document. The value is read as JSON when it
/// parses as JSON and as a string otherwise.
void apply_override(Json& doc, const std::string& assignment);

/// File label for a snapshot time, e.g. "1.0472" in wigner_1.0472.csv.
std::string snapshot_label(double tau);

/// Preset documents. Throws ConfigError for unknown names.
Json preset_document(const std::string& name);
std::vector<std::string> preset_names();

}  // namespace hqs

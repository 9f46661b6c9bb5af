#pragma once

#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "hqs/analysis.hpp"
#include "hqs/hilbert.hpp"
#include "hqs/model.hpp"
#include "hqs/propagator.hpp"

namespace hqs {

enum class SweepField { Theta, AlphaCav, GQm, GMc, Detuning, Drive };
enum class Observable { Zeta, QfiMax, PhononPopulation };

struct SweepAxis {
  SweepField field = SweepField::Theta;
  double min = 0.0;
  double max = 1.0;
  int count = 2;

  /// Evenly spaced values, endpoints included exactly.
  std::vector<double> values() const;
  bool operator==(const SweepAxis&) const = default;
};

struct SweepSpec {
  SweepAxis axis1;
  SweepAxis axis2{SweepField::AlphaCav, 0.0, 1.0, 2};
  ModelParams params;
  InitialStateSpec initial;
  int dim_mech = 48;
  int dim_cav = 24;
  PropagatorConfig propagator;
  AnalysisOptions analysis;
  Observable observable = Observable::Zeta;
  double tau_star = std::numbers::pi;
  bool validate_truncation = true;  // convergence check at the worst corner

  void validate() const;
  bool operator==(const SweepSpec&) const = default;
};

enum class CellFlag : std::uint8_t {
  Ok = 0,
  Truncation = 1,  // top Fock occupancy above kTopFockTolerance, value kept
  Failed = 2       // value is NaN, see the diagnostic
};

struct SweepResult {
  std::vector<double> axis1;
  std::vector<double> axis2;
  std::vector<double> values;  // row-major, values[i * axis2.size() + j]
  std::vector<CellFlag> flags;
  std::vector<std::string> diagnostics;  // empty for clean cells
  std::optional<ConvergenceReport> corner_check;
  std::size_t corner_index = 0;
  double runtime_seconds = 0.0;

  double at(std::size_t i, std::size_t j) const { return values[i * axis2.size() + j]; }
  std::vector<std::size_t> flagged() const;
  std::size_t failures() const;
};

/// Applies an axis value to the model and initial state.
void apply_field(SweepField field, double value, ModelParams& params, InitialStateSpec& initial);

/// Observable of the mechanical state after evolving to spec.tau_star with
/// both axes set to the given values. Throws on any failure.
struct CellOutcome {
  double value = 0.0;
  double top_mech = 0.0;
  double top_cav = 0.0;
};
CellOutcome run_cell(const SweepSpec& spec, double v1, double v2);

/// Evaluates every cell. Results do not depend on `threads`. Throws
/// ConvergenceError when more than 10% of the cells fail.
SweepResult run_sweep(const SweepSpec& spec, int threads = 1);

const char* to_string(SweepField field);
const char* to_string(Observable observable);

}  // namespace hqs

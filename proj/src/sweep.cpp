#include "hqs/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <thread>
#include <tuple>

#include "hqs/error.hpp"

namespace hqs {

std::vector<double> SweepAxis::values() const {
  std::vector<double> v(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    const double t = static_cast<double>(i) / (count - 1);
    v[static_cast<std::size_t>(i)] = (1.0 - t) * min + t * max;
  }
  v.front() = min;
  v.back() = max;
  return v;
}

void apply_field(SweepField field, double value, ModelParams& params, InitialStateSpec& initial) {
  switch (field) {
    case SweepField::Theta: initial.theta = value; break;
    case SweepField::AlphaCav: initial.alpha_cav = value; break;
    case SweepField::GQm: params.g_qm = value; break;
    case SweepField::GMc: params.g_mc = value; break;
    case SweepField::Detuning: params.detuning = value; break;
    case SweepField::Drive: params.drive = value; break;
  }
}

const char* to_string(SweepField field) {
  switch (field) {
    case SweepField::Theta: return "theta";
    case SweepField::AlphaCav: return "alpha_cav";
    case SweepField::GQm: return "G_qm";
    case SweepField::GMc: return "G_mc";
    case SweepField::Detuning: return "D";
    case SweepField::Drive: return "E0";
  }
  return "?";
}

const char* to_string(Observable observable) {
  switch (observable) {
    case Observable::Zeta: return "zeta";
    case Observable::QfiMax: return "qfi_max";
    case Observable::PhononPopulation: return "phonon_population";
  }
  return "?";
}

void SweepSpec::validate() const {
  for (const auto* axis : {&axis1, &axis2}) {
    const std::string name = axis == &axis1 ? "sweep.axis1" : "sweep.axis2";
    if (axis->count < 2) throw ConfigError(name + ".count must be at least 2");
    if (!std::isfinite(axis->min) || !std::isfinite(axis->max))
      throw ConfigError(name + " bounds must be finite");
    if (axis->field == SweepField::Theta && initial.qubit_kind != QubitPreparation::TwoQubitPhase)
      throw ConfigError(name + ": theta sweeps need the two_qubit_phase preparation");
  }
  if (axis1.field == axis2.field) throw ConfigError("sweep axes must be distinct");
  if (!(tau_star >= 0.0) || !std::isfinite(tau_star)) throw ConfigError("sweep.tau_star must be finite and >= 0");
  params.validate();
  propagator.validate();
  analysis.validate();
  make_space(params.n_qubits, dim_mech, dim_cav);
  // every corner must be a valid model
  for (double v1 : {axis1.min, axis1.max}) {
    for (double v2 : {axis2.min, axis2.max}) {
      ModelParams p = params;
      InitialStateSpec s = initial;
      apply_field(axis1.field, v1, p, s);
      apply_field(axis2.field, v2, p, s);
      p.validate();
    }
  }
}

CellOutcome run_cell(const SweepSpec& spec, double v1, double v2) {
  ModelParams params = spec.params;
  InitialStateSpec initial = spec.initial;
  apply_field(spec.axis1.field, v1, params, initial);
  apply_field(spec.axis2.field, v2, params, initial);
  const auto space = make_space(params.n_qubits, spec.dim_mech, spec.dim_cav);
  const auto psi0 = build_initial_state(space, initial);
  PropagatorConfig cfg = spec.propagator;
  cfg.sample_times = {0.0};
  cfg.store_states = false;
  const auto psi = state_at(space, params, psi0, spec.tau_star, cfg);

  CellOutcome out;
  std::tie(out.top_mech, out.top_cav) = top_fock_occupancy(space, psi.amplitudes());
  const auto rho = reduce_to_mechanical(space, psi);
  switch (spec.observable) {
    case Observable::Zeta:
      out.value = negativity_ratio(analysed_wigner(rho, spec.analysis));
      break;
    case Observable::QfiMax:
      out.value = qfi_max(rho, spec.analysis.eta_tol).value;
      break;
    case Observable::PhononPopulation:
      out.value = rho.mean_phonon();
      break;
  }
  return out;
}

std::vector<std::size_t> SweepResult::flagged() const {
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < flags.size(); ++k)
    if (flags[k] != CellFlag::Ok) out.push_back(k);
  return out;
}

std::size_t SweepResult::failures() const {
  std::size_t n = 0;
  for (auto f : flags) n += f == CellFlag::Failed ? 1 : 0;
  return n;
}

SweepResult run_sweep(const SweepSpec& spec, int threads) {
  spec.validate();
  const auto start = std::chrono::steady_clock::now();

  SweepResult res;
  res.axis1 = spec.axis1.values();
  res.axis2 = spec.axis2.values();
  const std::size_t n2 = res.axis2.size();
  const std::size_t cells = res.axis1.size() * n2;
  res.values.assign(cells, std::numeric_limits<double>::quiet_NaN());
  res.flags.assign(cells, CellFlag::Ok);
  res.diagnostics.assign(cells, {});
  std::vector<double> top(cells, 0.0);

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < cells; k = next++) {
      try {
        const auto cell = run_cell(spec, res.axis1[k / n2], res.axis2[k % n2]);
        res.values[k] = cell.value;
        top[k] = std::max(cell.top_mech, cell.top_cav);
        if (top[k] > kTopFockTolerance) {
          res.flags[k] = CellFlag::Truncation;
          res.diagnostics[k] = "top Fock occupancy " + std::to_string(top[k]);
        }
      } catch (const std::exception& e) {
        res.flags[k] = CellFlag::Failed;
        res.diagnostics[k] = e.what();
      }
    }
  };
  const std::size_t workers = std::clamp<std::size_t>(static_cast<std::size_t>(std::max(threads, 1)), 1, cells);
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  const std::size_t failed = res.failures();
  if (10 * failed > cells) {
    std::size_t first = 0;
    while (res.flags[first] != CellFlag::Failed) ++first;
    throw ConvergenceError(std::to_string(failed) + " of " + std::to_string(cells) +
                           " sweep cells failed; first: " + res.diagnostics[first]);
  }

  // the corner with the largest top-Fock occupancy stands in for the worst case
  const std::size_t last1 = (res.axis1.size() - 1) * n2;
  for (std::size_t k : {std::size_t{0}, n2 - 1, last1, last1 + n2 - 1}) {
    if (res.flags[k] != CellFlag::Failed && top[k] >= top[res.corner_index]) res.corner_index = k;
  }
  if (spec.validate_truncation) {
    ModelParams params = spec.params;
    InitialStateSpec initial = spec.initial;
    apply_field(spec.axis1.field, res.axis1[res.corner_index / n2], params, initial);
    apply_field(spec.axis2.field, res.axis2[res.corner_index % n2], params, initial);
    PropagatorConfig cfg = spec.propagator;
    cfg.sample_times = {0.0};
    res.corner_check = convergence_check(make_space(params.n_qubits, spec.dim_mech, spec.dim_cav), params,
                                         initial, spec.tau_star, cfg);
  }

  res.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return res;
}

}  // namespace hqs

#include "hqs/propagator.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <memory>
#include <string>

#include "hqs/error.hpp"
#include "hqs/krylov.hpp"

namespace hqs {

void PropagatorConfig::validate() const {
  if (krylov_dim < 2) throw ConfigError("propagator.krylov_dim must be >= 2");
  if (!(step_tolerance > 0.0)) throw ConfigError("propagator.step_tolerance must be positive");
  if (max_substep < 0.0) throw ConfigError("propagator.max_substep must be >= 0");
  if (sample_times.empty()) throw ConfigError("propagator.sample_times must not be empty");
  if (sample_times.front() != 0.0) throw ConfigError("propagator.sample_times must start at 0");
  for (std::size_t i = 1; i < sample_times.size(); ++i) {
    if (!(sample_times[i] >= sample_times[i - 1]) || !std::isfinite(sample_times[i])) {
      throw ConfigError("propagator.sample_times must be finite and nondecreasing");
    }
  }
}

Populations populations(const CompositeSpace& space, const Vector& psi) {
  Populations p;
  const int nm = space.dim_mech();
  const int nc = space.dim_cav();
  std::ptrdiff_t i = 0;
  for (std::size_t q = 0; q < space.qubit_dim(); ++q) {
    const int exc = std::popcount(q);
    for (int n = 0; n < nm; ++n) {
      for (int m = 0; m < nc; ++m, ++i) {
        const double w = std::norm(psi(i));
        p.qubit += exc * w;
        p.phonon += n * w;
        p.photon += m * w;
      }
    }
  }
  return p;
}

std::pair<double, double> top_fock_occupancy(const CompositeSpace& space, const Vector& psi) {
  double top_m = 0.0;
  double top_c = 0.0;
  for (std::size_t i = 0; i < space.total_dim(); ++i) {
    const auto l = space.label(i);
    const double w = std::norm(psi(static_cast<std::ptrdiff_t>(i)));
    if (l.mech == space.dim_mech() - 1) top_m += w;
    if (l.cav == space.dim_cav() - 1) top_c += w;
  }
  return {top_m, top_c};
}

Propagator::Propagator(const CompositeSpace& space, const ModelParams& params,
                       PropagatorConfig config)
    : space_(space),
      params_(params),
      config_(std::move(config)),
      ham_(build_hamiltonian_pair(space, params)) {
  config_.validate();
  if (config_.backend == Backend::DenseEigen && space.total_dim() > kDenseBackendMaxDim) {
    throw ConfigError("dense_eigen backend limited to total_dim <= " +
                      std::to_string(kDenseBackendMaxDim));
  }
}

TrajectoryRecord Propagator::evolve(const StateVector& psi0) const {
  return run(psi0, config_.sample_times, config_.store_states);
}

TrajectoryRecord Propagator::run(const StateVector& psi0, const std::vector<double>& times,
                                 bool store_states) const {
  if (psi0.size() != space_.total_dim()) {
    throw ConfigError("initial state dimension does not match the space");
  }
  if (std::abs(psi0.norm() - 1.0) > 1e-10) throw ConfigError("initial state is not normalised");

  const double tau_c = params_.tau_c;
  const bool drive_ever_on = tau_c > 0.0;

  KrylovExponential::Options kopt{config_.krylov_dim, config_.step_tolerance,
                                  config_.max_substep, config_.max_substeps};
  std::optional<KrylovExponential> k_on, k_off;
  std::optional<DenseExponential> d_on, d_off;

  TrajectoryRecord rec;
  auto advance = [&](Vector& psi, bool on, double dt) {
    if (dt <= 0.0) return;
    const SparseMatrix& h = on ? ham_.on.matrix : ham_.off.matrix;
    if (config_.backend == Backend::Krylov) {
      auto& k = on ? k_on : k_off;
      if (!k) {
        auto action = std::make_shared<const HamiltonianAction>(space_, params_, on ? params_.drive : 0.0);
        const double bound = action->norm_bound();
        k.emplace([action](const Eigen::Ref<const Vector>& x, Vector& y) { action->apply(x, y); }, bound,
                  kopt);
      }
      const StepStats s = k->advance(psi, dt);
      rec.error_bound += s.error_bound;
      rec.substeps += s.substeps;
      rec.matvecs += s.matvecs;
      if (rec.substeps > config_.max_substeps) {
        throw ConvergenceError("propagation exceeded max_substeps");
      }
    } else {
      auto& d = on ? d_on : d_off;
      if (!d) d.emplace(h);
      d->advance(psi, dt);
      ++rec.substeps;
    }
  };

  Vector psi = psi0.amplitudes();
  double now = 0.0;
  rec.samples.reserve(times.size());
  for (double target : times) {
    while (now < target) {
      const bool on = drive_ever_on && now < tau_c;
      const double seg_end = on ? std::min(target, tau_c) : target;
      advance(psi, on, seg_end - now);
      now = seg_end;
    }
    TrajectorySample s;
    s.tau = target;
    const Populations p = populations(space_, psi);
    s.qubit_pop = p.qubit;
    s.phonon_pop = p.phonon;
    s.photon_pop = p.photon;
    s.norm = psi.norm();
    const bool on_here = drive_schedule(params_, target) != 0.0;
    s.energy = (on_here ? ham_.on : ham_.off).expectation(psi).real();
    if (store_states) s.state = StateVector(psi);
    rec.samples.push_back(std::move(s));
  }
  return rec;
}

StateVector Propagator::state_at(const StateVector& psi0, double tau) const {
  if (!(tau >= 0.0) || !std::isfinite(tau)) throw ConfigError("state_at: tau must be finite and >= 0");
  TrajectoryRecord rec = run(psi0, {tau}, true);
  return std::move(*rec.samples.back().state);
}

TrajectoryRecord evolve(const CompositeSpace& space, const ModelParams& params,
                        const StateVector& psi0, const PropagatorConfig& config) {
  return Propagator(space, params, config).evolve(psi0);
}

StateVector state_at(const CompositeSpace& space, const ModelParams& params,
                     const StateVector& psi0, double tau, const PropagatorConfig& config) {
  return Propagator(space, params, config).state_at(psi0, tau);
}

namespace {

TruncationRun run_truncation(const CompositeSpace& space, const ModelParams& params,
                             const InitialStateSpec& initial, double tau,
                             const PropagatorConfig& config) {
  const StateVector psi0 = build_initial_state(space, initial);
  const StateVector psi = Propagator(space, params, config).state_at(psi0, tau);
  const Populations p = populations(space, psi.amplitudes());
  const auto [top_m, top_c] = top_fock_occupancy(space, psi.amplitudes());
  return {space.dim_mech(), space.dim_cav(), p.phonon, p.photon, top_m, top_c};
}

double relative_deviation(double a, double b) {
  const double scale = std::max(std::abs(b), 1e-300);
  return a == b ? 0.0 : std::abs(a - b) / scale;
}

}  // namespace

ConvergenceReport convergence_check(const CompositeSpace& space, const ModelParams& params,
                                    const InitialStateSpec& initial, double tau,
                                    const PropagatorConfig& config,
                                    std::size_t memory_budget_bytes, double top_tolerance) {
  const int big_m = static_cast<int>(std::ceil(1.5 * space.dim_mech()));
  const int big_c = static_cast<int>(std::ceil(1.5 * space.dim_cav()));
  const CompositeSpace big(space.n_qubits(), big_m, big_c);
  // state vector plus the Krylov basis dominate memory
  const std::size_t need = big.total_dim() * sizeof(cplx) * static_cast<std::size_t>(config.krylov_dim + 4);
  if (need > memory_budget_bytes) {
    throw ConfigError("convergence_check: enlarged space (" + std::to_string(big_m) + ", " +
                      std::to_string(big_c) + ") exceeds the memory budget");
  }
  PropagatorConfig cfg = config;
  if (cfg.backend == Backend::DenseEigen && big.total_dim() > kDenseBackendMaxDim) {
    cfg.backend = Backend::Krylov;
  }
  ConvergenceReport r;
  r.base = run_truncation(space, params, initial, tau, cfg);
  r.enlarged = run_truncation(big, params, initial, tau, cfg);
  r.phonon_deviation = relative_deviation(r.base.phonon_pop, r.enlarged.phonon_pop);
  r.photon_deviation = relative_deviation(r.base.photon_pop, r.enlarged.photon_pop);
  r.accepted = r.base.top_mech < top_tolerance && r.base.top_cav < top_tolerance;
  return r;
}

}  // namespace hqs

#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "hqs/hilbert.hpp"
#include "hqs/model.hpp"

namespace hqs {

enum class Backend { Krylov, DenseEigen };

/// Largest flat dimension accepted by the dense backend.
inline constexpr std::size_t kDenseBackendMaxDim = 4096;

struct PropagatorConfig {
  Backend backend = Backend::Krylov;
  int krylov_dim = 30;
  double step_tolerance = 1e-9;
  std::vector<double> sample_times{0.0};
  double max_substep = 0.0;  // 0 = no cap
  std::size_t max_substeps = 2'000'000;
  bool store_states = false;

  void validate() const;
  bool operator==(const PropagatorConfig&) const = default;
};

struct TrajectorySample {
  double tau = 0.0;
  double qubit_pop = 0.0;
  double phonon_pop = 0.0;
  double photon_pop = 0.0;
  double norm = 1.0;
  double energy = 0.0;  // <H(tau)> with the drive value active at tau
  std::optional<StateVector> state;
};

struct TrajectoryRecord {
  std::vector<TrajectorySample> samples;
  double error_bound = 0.0;  // accumulated per-step error estimates
  std::size_t substeps = 0;
  std::size_t matvecs = 0;
};

/// Population observables of a state, computed directly from basis labels.
struct Populations {
  double qubit = 0.0;
  double phonon = 0.0;
  double photon = 0.0;
};
Populations populations(const CompositeSpace& space, const Vector& psi);

/// Evolves psi0 under the boxcar-driven Hamiltonian, stopping exactly at each
/// sample time and at tau_c.
class Propagator {
 public:
  Propagator(const CompositeSpace& space, const ModelParams& params, PropagatorConfig config);

  TrajectoryRecord evolve(const StateVector& psi0) const;
  StateVector state_at(const StateVector& psi0, double tau) const;

  const HamiltonianPair& hamiltonians() const { return ham_; }
  const CompositeSpace& space() const { return space_; }

 private:
  TrajectoryRecord run(const StateVector& psi0, const std::vector<double>& times,
                       bool store_states) const;

  CompositeSpace space_;
  ModelParams params_;
  PropagatorConfig config_;
  HamiltonianPair ham_;
};

TrajectoryRecord evolve(const CompositeSpace& space, const ModelParams& params,
                        const StateVector& psi0, const PropagatorConfig& config);

StateVector state_at(const CompositeSpace& space, const ModelParams& params,
                     const StateVector& psi0, double tau, const PropagatorConfig& config);

/// Top-Fock occupancy threshold for an accepted truncation.
inline constexpr double kTopFockTolerance = 1e-8;

struct TruncationRun {
  int dim_mech = 0;
  int dim_cav = 0;
  double phonon_pop = 0.0;
  double photon_pop = 0.0;
  double top_mech = 0.0;  // occupancy of |dim_mech - 1> of the mechanical mode
  double top_cav = 0.0;
};

struct ConvergenceReport {
  TruncationRun base;
  TruncationRun enlarged;
  double phonon_deviation = 0.0;  // relative
  double photon_deviation = 0.0;
  bool accepted = false;  // base top-Fock occupancies below the threshold
};

/// Compares populations at tau for (N_m, N_c) and (ceil(1.5 N_m), ceil(1.5 N_c)).
/// `memory_budget_bytes` bounds the state vector of the enlarged run.
ConvergenceReport convergence_check(const CompositeSpace& space, const ModelParams& params,
                                    const InitialStateSpec& initial, double tau,
                                    const PropagatorConfig& config,
                                    std::size_t memory_budget_bytes = std::size_t{1} << 30,
                                    double top_tolerance = kTopFockTolerance);

/// Occupancies of the highest mechanical and cavity Fock levels.
std::pair<double, double> top_fock_occupancy(const CompositeSpace& space, const Vector& psi);

}  // namespace hqs

#pragma once

#include <limits>
#include <vector>

#include "hqs/hilbert.hpp"

namespace hqs {

/// Dimensionless model parameters. Energies are in units of hbar*omega_m and
/// time is tau = omega_m * t.
struct ModelParams {
  double w_q = 1.0;        // omega_q / omega_m
  double g_qm = 0.05;      // qubit-mechanics coupling
  double g_mc = 2.0;       // mechanics-cavity (radiation pressure) coupling
  double detuning = 0.0;   // Delta, enters as -Delta a^dag a
  double drive = 0.3;      // epsilon_0
  double tau_c = std::numeric_limits<double>::infinity();  // drive switch-off time
  int n_qubits = 2;

  void validate() const;
  bool operator==(const ModelParams&) const = default;
};

/// H = (w_q/2) sum_j (sz_j + I_j) + b^dag b - Delta a^dag a
///     + g_qm sum_j (s+_j b + s-_j b^dag) + g_mc a^dag a (b + b^dag)
///     + drive_strength (a + a^dag)
SparseOperator build_hamiltonian(const CompositeSpace& space, const ModelParams& params,
                                 double drive_strength);

/// Matrix-free action of the same Hamiltonian, y = H x. Agrees entry for
/// entry with build_hamiltonian and streams each cavity row contiguously.
class HamiltonianAction {
 public:
  HamiltonianAction(const CompositeSpace& space, const ModelParams& params, double drive_strength);

  void apply(const Eigen::Ref<const Vector>& x, Vector& y) const;
  std::size_t dim() const { return space_.total_dim(); }
  /// Maximum absolute row sum, an upper bound on the spectral radius.
  double norm_bound() const { return norm_bound_; }

 private:
  CompositeSpace space_;
  ModelParams params_;
  double drive_;
  std::vector<double> sqrt_;  // sqrt(k) for k < max(N_m, N_c) + 1
  std::vector<int> excitations_;
  double norm_bound_ = 0.0;
};

/// The two Hamiltonians of the boxcar protocol.
struct HamiltonianPair {
  SparseOperator on;   // drive at params.drive
  SparseOperator off;  // drive zero
};

HamiltonianPair build_hamiltonian_pair(const CompositeSpace& space, const ModelParams& params);

/// Drive strength at time tau: params.drive on [0, tau_c], zero afterwards.
/// tau_c = 0 means the drive is never on.
double drive_schedule(const ModelParams& params, double tau);

/// Number operators used by observables and conservation checks.
SparseOperator number_operator(const CompositeSpace& space, Mode mode);
SparseOperator qubit_excitation_operator(const CompositeSpace& space);

}  // namespace hqs

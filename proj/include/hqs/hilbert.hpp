#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace hqs {

using cplx = std::complex<double>;
using Vector = Eigen::VectorXcd;
using DenseMatrix = Eigen::MatrixXcd;
using SparseMatrix = Eigen::SparseMatrix<cplx, Eigen::RowMajor, std::ptrdiff_t>;

/// Truncated tensor-product space (qubits) x (mechanical mode) x (cavity mode).
///
/// Flat index layout: index = (q * dim_mech + n) * dim_cav + m, so the cavity
/// Fock index varies fastest. Within the qubit register, qubit j (1-based) is
/// bit (n_qubits - j) of q, i.e. qubit 1 is the most significant; a set bit
/// means the qubit is excited, |e>.
class CompositeSpace {
 public:
  struct Label {
    std::size_t qubits;
    int mech;
    int cav;
    bool operator==(const Label&) const = default;
  };

  CompositeSpace(int n_qubits, int dim_mech, int dim_cav);

  int n_qubits() const { return n_qubits_; }
  int dim_mech() const { return dim_mech_; }
  int dim_cav() const { return dim_cav_; }
  std::size_t qubit_dim() const { return std::size_t{1} << n_qubits_; }
  std::size_t total_dim() const { return total_dim_; }

  std::size_t index(std::size_t qubits, int mech, int cav) const;
  Label label(std::size_t flat) const;

  /// True when qubit j (1-based) is excited in configuration q.
  bool excited(std::size_t qubits, int j) const;

  bool operator==(const CompositeSpace&) const = default;

 private:
  int n_qubits_;
  int dim_mech_;
  int dim_cav_;
  std::size_t total_dim_;
};

CompositeSpace make_space(int n_qubits, int dim_mech, int dim_cav);

/// Operator over a CompositeSpace stored in compressed-row form.
struct SparseOperator {
  SparseMatrix matrix;
  bool hermitian = false;

  std::size_t dim() const { return static_cast<std::size_t>(matrix.rows()); }
  Vector apply(const Vector& v) const { return matrix * v; }
  cplx expectation(const Vector& v) const { return v.dot(matrix * v); }
};

enum class Mode { Mechanical, Cavity };
enum class QubitOp { SigmaPlus, SigmaMinus, SigmaZ, Identity };

/// Annihilation operator of the chosen mode, identity on the other factors.
SparseOperator ladder_operator(const CompositeSpace& space, Mode mode);

/// Single-qubit operator on qubit j (1-based), identity elsewhere.
SparseOperator qubit_operator(const CompositeSpace& space, int j, QubitOp kind);

/// Sparse adjoint; the result is flagged Hermitian only if the input is.
SparseOperator adjoint(const SparseOperator& op);

/// Pure state on a CompositeSpace.
class StateVector {
 public:
  StateVector() = default;
  explicit StateVector(Vector amplitudes) : amplitudes_(std::move(amplitudes)) {}

  const Vector& amplitudes() const { return amplitudes_; }
  Vector& amplitudes() { return amplitudes_; }
  std::size_t size() const { return static_cast<std::size_t>(amplitudes_.size()); }
  double norm() const { return amplitudes_.norm(); }

 private:
  Vector amplitudes_;
};

/// Leakage tolerance applied to truncated coherent states.
inline constexpr double kCoherentLeakageTol = 1e-10;

/// Fock amplitudes c_n = e^{-|a|^2/2} a^n / sqrt(n!), n < dim, renormalised.
/// Throws ConvergenceError when the discarded weight exceeds the tolerance.
Vector coherent_state(int dim, cplx alpha, double leakage_tol = kCoherentLeakageTol);

/// Weight of a coherent state beyond the first `dim` Fock levels.
double coherent_leakage(int dim, cplx alpha);

enum class QubitPreparation {
  SingleSuperposition,  // (|e> + |g>)/sqrt(2), one qubit
  TwoQubitPhase,        // (|eg> + e^{i theta}|ge>)/sqrt(2)
  Explicit              // amplitudes over the 2^Nq register
};

struct InitialStateSpec {
  QubitPreparation qubit_kind = QubitPreparation::TwoQubitPhase;
  double theta = 0.0;
  std::vector<cplx> qubit_amplitudes;  // only for Explicit
  cplx alpha_mech{0.0, 0.0};
  cplx alpha_cav{1.0, 0.0};

  bool operator==(const InitialStateSpec&) const = default;
};

/// Normalised amplitudes of the qubit register described by `spec`.
Vector qubit_register_state(int n_qubits, const InitialStateSpec& spec);

StateVector build_initial_state(const CompositeSpace& space, const InitialStateSpec& spec);

/// rho[n, n'] = sum_{q, m} psi[q, n, m] conj(psi[q, n', m]).
DenseMatrix partial_trace_mechanical(const CompositeSpace& space, const Vector& psi);

/// Photon-number distribution of the cavity, used for truncation checks.
std::vector<double> cavity_distribution(const CompositeSpace& space, const Vector& psi);

}  // namespace hqs

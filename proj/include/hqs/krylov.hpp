#pragma once

#include <cstddef>
#include <functional>

#include "hqs/hilbert.hpp"

namespace hqs {

/// Result of advancing a state over one constant-Hamiltonian interval.
struct StepStats {
  std::size_t substeps = 0;
  std::size_t matvecs = 0;
  double error_bound = 0.0;  // sum of per-substep error estimates
};

/// Action of exp(-i H dt) on a vector for Hermitian sparse H.
///
/// Each substep builds a Lanczos basis of dimension `krylov_dim` with the plain
/// three-term recurrence, diagonalises the tridiagonal projection and picks the
/// largest substep whose a-posteriori error estimate
///   beta_m * |e_m^T exp(-i T h) e_1|
/// stays within `tolerance`. An invariant subspace (happy breakdown) makes the
/// projection exact for any step length.
class KrylovExponential {
 public:
  struct Options {
    int krylov_dim = 30;
    double tolerance = 1e-9;
    double max_substep = 0.0;  // 0 = unlimited
    std::size_t max_substeps = 2'000'000;
  };

  /// y = H x for a Hermitian H.
  using LinearMap = std::function<void(const Eigen::Ref<const Vector>& x, Vector& y)>;

  KrylovExponential(const SparseMatrix& h, Options options);
  /// norm_bound must bound the spectral radius of H from above.
  KrylovExponential(LinearMap h, double norm_bound, Options options);

  /// Propagates psi in place over dt >= 0.
  StepStats advance(Vector& psi, double dt);

 private:
  LinearMap apply_;
  Options opt_;
  double h_norm_;
  double last_step_ = 0.0;
};

/// Dense oracle backend: diagonalises H once and applies exact phases.
class DenseExponential {
 public:
  explicit DenseExponential(const SparseMatrix& h);
  void advance(Vector& psi, double dt) const;

 private:
  Eigen::VectorXd energies_;
  DenseMatrix basis_;
};

}  // namespace hqs

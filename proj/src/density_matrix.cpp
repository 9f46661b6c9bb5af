#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "hqs/analysis.hpp"
#include "hqs/error.hpp"

namespace hqs {

MechanicalDensityMatrix::MechanicalDensityMatrix(DenseMatrix rho, double tolerance)
    : rho_(std::move(rho)) {
  if (rho_.rows() != rho_.cols() || rho_.rows() < 1) {
    throw ConfigError("density matrix must be square and non-empty");
  }
  const double herm = (rho_ - rho_.adjoint()).cwiseAbs().maxCoeff();
  if (herm > tolerance) {
    throw ConfigError("density matrix is not Hermitian (residual " + std::to_string(herm) + ")");
  }
  // remove the rounding-level anti-Hermitian part before diagonalising
  rho_ = 0.5 * (rho_ + rho_.adjoint()).eval();
  const double tr = rho_.trace().real();
  if (std::abs(tr - 1.0) > tolerance) {
    throw ConfigError("density matrix trace " + std::to_string(tr) + " differs from 1");
  }
  Eigen::SelfAdjointEigenSolver<DenseMatrix> eig(rho_);
  if (eig.info() != Eigen::Success) {
    throw ConvergenceError("eigendecomposition of the density matrix failed");
  }
  eigenvalues_ = eig.eigenvalues();
  eigenvectors_ = eig.eigenvectors();
  if (eigenvalues_.minCoeff() < -tolerance) {
    throw ConfigError("density matrix has a negative eigenvalue " +
                      std::to_string(eigenvalues_.minCoeff()));
  }
  eigenvalues_ = eigenvalues_.cwiseMax(0.0).cwiseMin(1.0);
}

MechanicalDensityMatrix MechanicalDensityMatrix::from_factor(const DenseMatrix& factor, double tolerance) {
  if (factor.rows() < 1 || factor.cols() < 1) throw ConfigError("density matrix factor must be non-empty");
  const double tr = factor.squaredNorm();
  if (std::abs(tr - 1.0) > tolerance) {
    throw ConfigError("density matrix trace " + std::to_string(tr) + " differs from 1");
  }
  MechanicalDensityMatrix out;
  out.rho_.noalias() = factor * factor.adjoint();
  out.rho_ = 0.5 * (out.rho_ + out.rho_.adjoint()).eval();
  Eigen::BDCSVD<DenseMatrix> svd(factor, Eigen::ComputeThinU);
  if (svd.info() != Eigen::Success) throw ConvergenceError("SVD of the density matrix factor failed");
  out.eigenvalues_ = svd.singularValues().array().square().min(1.0).matrix();
  out.eigenvectors_ = svd.matrixU();
  return out;
}

MechanicalDensityMatrix MechanicalDensityMatrix::from_pure(const Vector& fock_amplitudes) {
  return from_factor(fock_amplitudes / fock_amplitudes.norm());
}

double MechanicalDensityMatrix::purity() const { return eigenvalues_.squaredNorm(); }

double MechanicalDensityMatrix::mean_phonon() const {
  double s = 0.0;
  for (int n = 0; n < dim(); ++n) s += n * rho_(n, n).real();
  return s;
}

int MechanicalDensityMatrix::support(double tail) const {
  double acc = 0.0;
  int k = dim();
  while (k > 1) {
    const double next = acc + std::max(0.0, rho_(k - 1, k - 1).real());
    if (next > tail) break;
    acc = next;
    --k;
  }
  return k;
}

MechanicalDensityMatrix reduce_to_mechanical(const CompositeSpace& space, const StateVector& psi) {
  using RowMajorMap =
      Eigen::Map<const Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;
  // rho = sum_q A_q A_q^dag with A_q the (mech x cav) block of qubit configuration q
  const int nm = space.dim_mech();
  const int nc = space.dim_cav();
  const auto nq = static_cast<std::ptrdiff_t>(space.qubit_dim());
  const std::size_t block = static_cast<std::size_t>(nm) * nc;
  DenseMatrix factor(nm, nq * nc);
  for (std::ptrdiff_t q = 0; q < nq; ++q) {
    factor.middleCols(q * nc, nc) = RowMajorMap(psi.amplitudes().data() + static_cast<std::size_t>(q) * block, nm, nc);
  }
  return MechanicalDensityMatrix::from_factor(factor);
}

std::vector<double> fock_distribution(const MechanicalDensityMatrix& rho) {
  std::vector<double> p(static_cast<std::size_t>(rho.dim()));
  for (int n = 0; n < rho.dim(); ++n) p[static_cast<std::size_t>(n)] = rho.rho()(n, n).real();
  return p;
}

}  // namespace hqs

#include "hqs/krylov.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <string>

#include <Eigen/Eigenvalues>

#include "hqs/error.hpp"

namespace hqs {

namespace {

// Infinity norm (max absolute row sum); a cheap upper bound on the spectral radius.
double row_sum_norm(const SparseMatrix& h) {
  double best = 0.0;
  for (std::ptrdiff_t r = 0; r < h.outerSize(); ++r) {
    double s = 0.0;
    for (SparseMatrix::InnerIterator it(h, r); it; ++it) s += std::abs(it.value());
    best = std::max(best, s);
  }
  return best;
}

}  // namespace

KrylovExponential::KrylovExponential(const SparseMatrix& h, Options options)
    : opt_(options), h_norm_(row_sum_norm(h)) {
  // a real matrix with 32-bit indices moves a third of the bytes per product
  bool real = h.rows() < std::numeric_limits<int>::max() && h.nonZeros() < std::numeric_limits<int>::max();
  for (std::ptrdiff_t k = 0; real && k < h.nonZeros(); ++k) real = h.valuePtr()[k].imag() == 0.0;
  if (real) {
    auto r = std::make_shared<const Eigen::SparseMatrix<double, Eigen::RowMajor, int>>(h.real());
    apply_ = [r](const Eigen::Ref<const Vector>& x, Vector& y) { y.noalias() = *r * x; };
  } else {
    apply_ = [&h](const Eigen::Ref<const Vector>& x, Vector& y) { y.noalias() = h * x; };
  }
  if (opt_.krylov_dim < 2) throw ConfigError("krylov_dim must be >= 2");
  if (!(opt_.tolerance > 0.0)) throw ConfigError("Krylov tolerance must be positive");
  if (opt_.max_substep < 0.0) throw ConfigError("max_substep must be >= 0");
}

KrylovExponential::KrylovExponential(LinearMap h, double norm_bound, Options options)
    : apply_(std::move(h)), opt_(options), h_norm_(norm_bound) {
  if (!apply_) throw ConfigError("Krylov operator is empty");
  if (!(norm_bound >= 0.0)) throw ConfigError("Krylov norm bound must be >= 0");
  if (opt_.krylov_dim < 2) throw ConfigError("krylov_dim must be >= 2");
  if (!(opt_.tolerance > 0.0)) throw ConfigError("Krylov tolerance must be positive");
  if (opt_.max_substep < 0.0) throw ConfigError("max_substep must be >= 0");
}

StepStats KrylovExponential::advance(Vector& psi, double dt) {
  StepStats stats;
  if (dt < 0.0) throw ConfigError("negative propagation interval");
  if (dt == 0.0) return stats;

  const std::ptrdiff_t dim = psi.size();
  const int m = static_cast<int>(std::min<std::ptrdiff_t>(opt_.krylov_dim, dim));
  DenseMatrix basis(dim, m + 1);
  Vector w(dim);
  Eigen::VectorXd alpha(m);
  Eigen::VectorXd beta(m);
  const double breakdown_tol = 1e-13 * std::max(1.0, h_norm_);

  double remaining = dt;
  while (remaining > 0.0) {
    if (stats.substeps >= opt_.max_substeps) {
      throw ConvergenceError("Krylov propagation exceeded " + std::to_string(opt_.max_substeps) +
                             " substeps");
    }
    const double beta0 = psi.norm();
    if (beta0 == 0.0) return stats;
    basis.col(0) = psi / beta0;

    int k = m;
    bool invariant = false;
    for (int j = 0; j < m; ++j) {
      // Paige's ordering: subtract the previous vector before forming alpha
      apply_(basis.col(j), w);
      ++stats.matvecs;
      // alpha and beta are real, so both passes run on the interleaved doubles
      const auto len = 2 * dim;
      double* wd = reinterpret_cast<double*>(w.data());
      const double* vd = reinterpret_cast<const double*>(basis.col(j).data());
      double a = 0.0;
      if (j > 0) {
        const double* pd = reinterpret_cast<const double*>(basis.col(j - 1).data());
        const double b = beta(j - 1);
        for (std::ptrdiff_t i = 0; i < len; ++i) {
          wd[i] -= b * pd[i];
          a += vd[i] * wd[i];
        }
      } else {
        for (std::ptrdiff_t i = 0; i < len; ++i) a += vd[i] * wd[i];
      }
      alpha(j) = a;
      double norm2 = 0.0;
      for (std::ptrdiff_t i = 0; i < len; ++i) {
        wd[i] -= a * vd[i];
        norm2 += wd[i] * wd[i];
      }
      beta(j) = std::sqrt(norm2);
      if (beta(j) < breakdown_tol) {
        k = j + 1;
        invariant = true;
        break;
      }
      basis.col(j + 1) = w / beta(j);
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig;
    eig.computeFromTridiagonal(alpha.head(k), beta.head(std::max(k - 1, 0)),
                               Eigen::ComputeEigenvectors);
    const Eigen::MatrixXd& s = eig.eigenvectors();
    const Eigen::VectorXd& lam = eig.eigenvalues();
    const Eigen::VectorXd s_first = s.row(0).transpose();

    auto coefficients = [&](double h) {
      Vector phase(k);
      for (int i = 0; i < k; ++i) phase(i) = std::polar(s_first(i), -lam(i) * h);
      return Vector(s.cast<cplx>() * phase);
    };
    auto error_estimate = [&](double h) {
      if (invariant) return 0.0;
      cplx last{0.0, 0.0};
      for (int i = 0; i < k; ++i) last += s(k - 1, i) * std::polar(s_first(i), -lam(i) * h);
      return beta(k - 1) * std::abs(last) * beta0;
    };

    double h = remaining;
    if (opt_.max_substep > 0.0) h = std::min(h, opt_.max_substep);
    if (!invariant && last_step_ > 0.0) h = std::min(h, 2.0 * last_step_);
    const double tol = opt_.tolerance * beta0;
    double err = error_estimate(h);
    int shrink = 0;
    while (err > tol) {
      const double ratio = std::pow(tol / err, 1.0 / std::max(1, k - 1));
      h *= std::clamp(0.9 * ratio, 0.1, 0.9);
      err = error_estimate(h);
      if (++shrink > 200 || h < 1e-14 * dt) {
        throw ConvergenceError("Krylov step size underflow (h=" + std::to_string(h) + ")");
      }
    }
    // grow toward the largest admissible step when the first guess was cautious
    if (!invariant && h < remaining && shrink == 0) {
      for (int g = 0; g < 8; ++g) {
        double trial = std::min(remaining, h * 1.5);
        if (opt_.max_substep > 0.0) trial = std::min(trial, opt_.max_substep);
        if (trial <= h) break;
        const double e = error_estimate(trial);
        if (e > tol) break;
        h = trial;
        err = e;
      }
    }

    const Vector c = beta0 * coefficients(h);
    psi.noalias() = basis.leftCols(k) * c;
    stats.error_bound += err;
    ++stats.substeps;
    if (!invariant) last_step_ = h;
    if (h >= remaining) {
      remaining = 0.0;
    } else {
      remaining -= h;
    }
  }
  return stats;
}

DenseExponential::DenseExponential(const SparseMatrix& h) {
  const DenseMatrix dense = DenseMatrix(h);
  Eigen::SelfAdjointEigenSolver<DenseMatrix> eig(dense);
  if (eig.info() != Eigen::Success) {
    throw ConvergenceError("dense eigendecomposition of the Hamiltonian failed");
  }
  energies_ = eig.eigenvalues();
  basis_ = eig.eigenvectors();
}

void DenseExponential::advance(Vector& psi, double dt) const {
  if (dt == 0.0) return;
  Vector c = basis_.adjoint() * psi;
  for (std::ptrdiff_t i = 0; i < c.size(); ++i) c(i) *= std::polar(1.0, -energies_(i) * dt);
  psi.noalias() = basis_ * c;
}

}  // namespace hqs

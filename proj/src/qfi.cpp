#include <cmath>
#include <numbers>
#include <vector>

#include "hqs/analysis.hpp"
#include "hqs/error.hpp"

namespace hqs {

DenseMatrix quadrature_x(int dim) {
  DenseMatrix x = DenseMatrix::Zero(dim, dim);
  for (int n = 1; n < dim; ++n) {
    const double v = std::sqrt(n / 2.0);
    x(n - 1, n) = v;
    x(n, n - 1) = v;
  }
  return x;
}

DenseMatrix quadrature_p(int dim) {
  DenseMatrix p = DenseMatrix::Zero(dim, dim);
  for (int n = 1; n < dim; ++n) {
    const double v = std::sqrt(n / 2.0);
    p(n, n - 1) = cplx{0.0, v};
    p(n - 1, n) = cplx{0.0, -v};
  }
  return p;
}

namespace {

// Eigenpairs with eta > eta_tol / 2. A retained pair needs at least one of
// them, so the remaining directions are reached through completeness.
struct Significant {
  Eigen::VectorXd eta;
  DenseMatrix u;  // dim x r
};

Significant significant(const MechanicalDensityMatrix& rho, double eta_tol) {
  if (!(eta_tol >= 0.0)) throw ConfigError("eigenvalue threshold must be >= 0");
  const auto& eta = rho.eigenvalues();
  std::vector<std::ptrdiff_t> keep;
  for (std::ptrdiff_t k = 0; k < eta.size(); ++k)
    if (eta(k) > 0.5 * eta_tol) keep.push_back(k);
  Significant s;
  s.eta.resize(static_cast<std::ptrdiff_t>(keep.size()));
  s.u.resize(rho.dim(), static_cast<std::ptrdiff_t>(keep.size()));
  for (std::size_t i = 0; i < keep.size(); ++i) {
    s.eta(static_cast<std::ptrdiff_t>(i)) = eta(keep[i]);
    s.u.col(static_cast<std::ptrdiff_t>(i)) = rho.eigenvectors().col(keep[i]);
  }
  return s;
}

// Tridiagonal quadratures applied to the columns of u.
DenseMatrix apply_x(const DenseMatrix& u) {
  const auto n = u.rows();
  DenseMatrix out = DenseMatrix::Zero(n, u.cols());
  for (std::ptrdiff_t i = 1; i < n; ++i) {
    const double v = std::sqrt(static_cast<double>(i) / 2.0);
    out.row(i - 1) += v * u.row(i);
    out.row(i) += v * u.row(i - 1);
  }
  return out;
}

DenseMatrix apply_p(const DenseMatrix& u) {
  const auto n = u.rows();
  DenseMatrix out = DenseMatrix::Zero(n, u.cols());
  for (std::ptrdiff_t i = 1; i < n; ++i) {
    const double v = std::sqrt(static_cast<double>(i) / 2.0);
    out.row(i - 1) += cplx{0.0, -v} * u.row(i);
    out.row(i) += cplx{0.0, v} * u.row(i - 1);
  }
  return out;
}

// sum over ordered pairs of w_kl * Re(<k|A|l><l|B|k>) for Hermitian A, B
// given au = A u_sig and bu = B u_sig.
double pair_sum(const Significant& s, const DenseMatrix& au, const DenseMatrix& bu, double eta_tol) {
  const auto r = s.eta.size();
  const DenseMatrix a = s.u.adjoint() * au;  // a(k, l) = <k|A|l>
  const DenseMatrix b = s.u.adjoint() * bu;
  double f = 0.0;
  for (std::ptrdiff_t k = 0; k < r; ++k) {
    cplx inside{0.0, 0.0};
    for (std::ptrdiff_t l = 0; l < r; ++l) {
      const cplx ab = a(k, l) * std::conj(b(k, l));
      inside += ab;
      const double sum = s.eta(k) + s.eta(l);
      if (sum > eta_tol) {
        const double diff = s.eta(k) - s.eta(l);
        f += 2.0 * diff * diff / sum * ab.real();
      }
    }
    // partners l outside the significant set have eta_l = 0: weight 2 eta_k, both orders
    const cplx total = au.col(k).dot(bu.col(k));  // <k|A B|k>
    f += 4.0 * s.eta(k) * (total - inside).real();
  }
  return f;
}

}  // namespace

QuadratureForm qfi_form(const MechanicalDensityMatrix& rho, double eta_tol) {
  const Significant s = significant(rho, eta_tol);
  const DenseMatrix xu = apply_x(s.u);
  const DenseMatrix pu = apply_p(s.u);
  QuadratureForm f;
  f.xx = pair_sum(s, xu, xu, eta_tol);
  f.pp = pair_sum(s, pu, pu, eta_tol);
  f.xp = pair_sum(s, xu, pu, eta_tol);
  // |X|_F^2 = |P|_F^2 = n (n - 1) / 2 for the truncated quadratures
  const double n = rho.dim();
  f.skipped_bound = 2.0 * eta_tol * n * (n - 1.0);
  return f;
}

double qfi(const MechanicalDensityMatrix& rho, const DenseMatrix& generator, double eta_tol) {
  if (generator.rows() != rho.dim() || generator.cols() != rho.dim()) {
    throw ConfigError("generator dimension does not match the density matrix");
  }
  const Significant s = significant(rho, eta_tol);
  const DenseMatrix gu = generator * s.u;
  return pair_sum(s, gu, gu, eta_tol);
}

double qfi_at_angle(const QuadratureForm& form, double phi) {
  const double s = std::sin(phi);
  const double c = std::cos(phi);
  return s * s * form.xx + c * c * form.pp + 2.0 * s * c * form.xp;
}

QfiMax qfi_max(const QuadratureForm& form) {
  const double mean = 0.5 * (form.xx + form.pp);
  const double half = 0.5 * (form.xx - form.pp);
  const double lambda = mean + std::hypot(half, form.xp);
  // eigenvector (sin phi, cos phi) of [[xx, xp], [xp, pp]]
  double v1 = 0.0;
  double v2 = 0.0;
  if (form.xp != 0.0) {
    v1 = form.xp;
    v2 = lambda - form.xx;
  } else if (form.xx >= form.pp) {
    v1 = 1.0;
  } else {
    v2 = 1.0;
  }
  double phi = std::atan2(v1, v2);
  if (phi < 0.0) phi += std::numbers::pi;
  if (phi >= std::numbers::pi) phi -= std::numbers::pi;
  return {lambda, phi};
}

QfiMax qfi_max(const MechanicalDensityMatrix& rho, double eta_tol) {
  return qfi_max(qfi_form(rho, eta_tol));
}

}  // namespace hqs

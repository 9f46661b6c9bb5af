// Wigner function of the mechanical mode.
//
// Grids are evaluated through the Weyl transform
//   W(x, p) = (1/pi) int <x + y| rho |x - y> e^{-2 i p y} dy,
// with <x|rho|x'> assembled from Hermite functions on a grid that is finer
// than the output grid by an integer factor (so x +- y stay on nodes and the
// y-sum does not alias in p). Single points use the Fock-basis Laguerre
// kernel. Both carry an explicit log-scale through their recurrences so
// that Fock levels in the hundreds neither overflow nor underflow.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <thread>

#include "hqs/analysis.hpp"
#include "hqs/error.hpp"

namespace hqs {

namespace {

constexpr double kRescale = 1e150;
constexpr double kFinePadding = 9.0;
const double kLogRescale = std::log(kRescale);

using RowMatrixXd = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using RowMatrixXcd = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// psi_n(x) = pi^{-1/4} (2^n n!)^{-1/2} H_n(x) e^{-x^2/2}, rows = points.
RowMatrixXd hermite_functions(const std::vector<double>& xs, int n_levels) {
  RowMatrixXd out = RowMatrixXd::Zero(static_cast<std::ptrdiff_t>(xs.size()), n_levels);
  const double log_norm = -0.25 * std::log(std::numbers::pi);
  for (std::size_t a = 0; a < xs.size(); ++a) {
    const double x = xs[a];
    double log_scale = log_norm - 0.5 * x * x;
    double prev = 0.0;
    double cur = 1.0;
    for (int n = 0; n < n_levels; ++n) {
      const double lv = log_scale + std::log(std::abs(cur));
      out(static_cast<std::ptrdiff_t>(a), n) = lv < -745.0 ? 0.0 : std::copysign(std::exp(lv), cur);
      const double next = std::sqrt(2.0 / (n + 1)) * x * cur - std::sqrt(static_cast<double>(n) / (n + 1)) * prev;
      prev = cur;
      cur = next;
      if (std::abs(cur) > kRescale) {
        cur /= kRescale;
        prev /= kRescale;
        log_scale += kLogRescale;
      }
    }
  }
  return out;
}

template <class Fn>
void parallel_rows(std::size_t rows, int threads, Fn&& fn) {
  const std::size_t workers =
      std::clamp<std::size_t>(static_cast<std::size_t>(std::max(threads, 1)), 1, rows);
  if (workers == 1) {
    for (std::size_t i = 0; i < rows; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < rows; i += workers) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace

double WignerGrid::integral() const {
  double s = 0.0;
  for (double v : values) s += v;
  return s * cell_area();
}

double WignerGrid::max() const { return *std::max_element(values.begin(), values.end()); }
double WignerGrid::min() const { return *std::min_element(values.begin(), values.end()); }

GridSpec default_grid(const MechanicalDensityMatrix& rho, int points) {
  const double nbar = rho.mean_phonon();
  const int top = rho.support(1e-6) - 1;
  double extent = std::max(6.0, std::sqrt(2.0 * (nbar + 3.0 * std::sqrt(nbar + 1.0))));
  extent = std::max(extent, std::sqrt(2.0 * top + 1.0) + 3.0);
  return {extent, points};
}

WignerGrid wigner(const MechanicalDensityMatrix& rho, const GridSpec& grid, int threads) {
  if (grid.points < 3) throw ConfigError("Wigner grid needs at least 3 points per axis");
  if (!(grid.extent > 0.0)) throw ConfigError("Wigner grid extent must be positive");

  // cross terms scale with the square root of the dropped weight
  const int n_levels = rho.support(1e-26);
  // rho = phi phi^dag restricted to the retained levels
  const auto& eta = rho.eigenvalues();
  std::vector<std::ptrdiff_t> kept;
  for (std::ptrdiff_t r = 0; r < eta.size(); ++r)
    if (eta(r) > 1e-20) kept.push_back(r);
  DenseMatrix phi_n(n_levels, static_cast<std::ptrdiff_t>(kept.size()));
  for (std::size_t r = 0; r < kept.size(); ++r) {
    phi_n.col(static_cast<std::ptrdiff_t>(r)) =
        std::sqrt(eta(kept[r])) * rho.eigenvectors().col(kept[r]).head(n_levels);
  }
  const auto m = static_cast<std::size_t>(grid.points);
  const double length = grid.extent;
  const double dx = 2.0 * length / static_cast<double>(m - 1);

  // oversampling so that the y-step h satisfies pi / h > 2.5 * extent
  const double needed = 1.25 * 4.0 * length * length / (std::numbers::pi * static_cast<double>(m - 1));
  const auto over = static_cast<std::size_t>(std::max(2.0, std::ceil(needed)));
  const double h = dx / static_cast<double>(over);
  // the fine grid runs past the output window so that the y-integral is not
  // cut off where the wavefunctions are still of order 1e-5 or larger
  const auto pad = static_cast<std::size_t>(std::ceil(kFinePadding / h));
  const std::size_t fine = over * (m - 1) + 1 + 2 * pad;

  std::vector<double> xf(fine);
  for (std::size_t a = 0; a < fine; ++a) xf[a] = -length + (static_cast<double>(a) - static_cast<double>(pad)) * h;
  const RowMatrixXd psi = hermite_functions(xf, n_levels);
  const RowMatrixXcd phi = psi.cast<cplx>() * phi_n;  // phi(a, r) = sum_n psi_n(x_a) phi_nr

  WignerGrid out;
  out.x.resize(m);
  out.p.resize(m);
  for (std::size_t i = 0; i < m; ++i) out.x[i] = out.p[i] = -length + static_cast<double>(i) * dx;
  // keep the axes exactly symmetric
  for (std::size_t i = 0; i < m / 2; ++i) out.x[m - 1 - i] = out.p[m - 1 - i] = -out.x[i];
  if (m % 2 == 1) out.x[m / 2] = out.p[m / 2] = 0.0;
  out.dx = out.dp = dx;
  out.values.assign(m * m, 0.0);

  // twiddle[j][k] = exp(-2 i p_j k h)
  const std::size_t kmax_all = (fine - 1) / 2;
  RowMatrixXcd twiddle(static_cast<std::ptrdiff_t>(m), static_cast<std::ptrdiff_t>(kmax_all + 1));
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t k = 0; k <= kmax_all; ++k) {
      twiddle(static_cast<std::ptrdiff_t>(j), static_cast<std::ptrdiff_t>(k)) =
          std::polar(1.0, -2.0 * out.p[j] * static_cast<double>(k) * h);
    }
  }

  const double pref = h / std::numbers::pi;
  parallel_rows(m, threads, [&](std::size_t i) {
    const std::size_t c = pad + over * i;
    const std::size_t kmax = std::min(c, fine - 1 - c);
    Vector f(static_cast<std::ptrdiff_t>(kmax + 1));
    for (std::size_t k = 0; k <= kmax; ++k) {
      f(static_cast<std::ptrdiff_t>(k)) = phi.row(static_cast<std::ptrdiff_t>(c - k))
                                              .dot(phi.row(static_cast<std::ptrdiff_t>(c + k)));
    }
    for (std::size_t j = 0; j < m; ++j) {
      double s = f(0).real();
      const auto tw = twiddle.row(static_cast<std::ptrdiff_t>(j));
      for (std::size_t k = 1; k <= kmax; ++k) {
        s += 2.0 * (f(static_cast<std::ptrdiff_t>(k)) * tw(static_cast<std::ptrdiff_t>(k))).real();
      }
      out.values[i * m + j] = pref * s;
    }
  });

  const double total = out.integral();
  if (std::abs(total - 1.0) > kWignerCoverageTol) {
    throw ConvergenceError("Wigner grid coverage " + std::to_string(total) + " with extent " +
                           std::to_string(length) + ": increase the grid extent or the number of points");
  }
  return out;
}

double wigner_point(const DenseMatrix& rho, double x, double p) {
  const int n = static_cast<int>(rho.rows());
  const double u = 2.0 * (x * x + p * p);  // 4 |alpha|^2 with alpha = (x + i p)/sqrt(2)
  const double theta = std::atan2(p, x);
  double total = 0.0;
  for (int d = 0; d < n; ++d) {
    if (d > 0 && u == 0.0) break;
    double log_scale = -0.5 * u - 0.5 * std::lgamma(d + 1.0);
    if (d > 0) log_scale += 0.5 * d * std::log(u);
    double prev = 0.0;
    double cur = 1.0;
    cplx acc{0.0, 0.0};
    for (int mm = 0; mm + d < n; ++mm) {
      const double lv = log_scale + std::log(std::abs(cur));
      if (lv > -745.0) {
        const double phi = (mm % 2 == 0 ? 1.0 : -1.0) * std::copysign(std::exp(lv), cur);
        acc += rho(mm, mm + d) * phi;
      }
      const double next = ((2.0 * mm + 1.0 + d - u) * cur - std::sqrt(static_cast<double>(mm) * (mm + d)) * prev) /
                          std::sqrt((mm + 1.0) * (mm + 1.0 + d));
      prev = cur;
      cur = next;
      if (std::abs(cur) > kRescale) {
        cur /= kRescale;
        prev /= kRescale;
        log_scale += kLogRescale;
      }
    }
    const double weight = d == 0 ? 1.0 : 2.0;
    total += weight * (acc * std::polar(1.0, d * theta)).real();
  }
  return total / std::numbers::pi;
}

double negativity_ratio(const WignerGrid& grid) {
  double neg = 0.0;
  double pos = 0.0;
  for (double v : grid.values) {
    if (v < 0.0) {
      neg -= v;
    } else {
      pos += v;
    }
  }
  return pos > 0.0 ? neg / pos : 0.0;
}

void AnalysisOptions::validate() const {
  if (grid.points < 3) throw ConfigError("analysis.grid.points must be at least 3");
  if (grid.points % 2 == 0) throw ConfigError("analysis.grid.points must be odd");
  if (!(grid.extent >= 0.0) || !std::isfinite(grid.extent))
    throw ConfigError("analysis.grid.extent must be finite and non-negative");
  if (max_points < 3) throw ConfigError("analysis.max_grid_points must be at least 3");
  if (!(eta_tol >= 0.0) || eta_tol >= 1.0) throw ConfigError("analysis.eta_tol must lie in [0, 1)");
}

GridSpec AnalysisOptions::grid_for(const MechanicalDensityMatrix& rho) const {
  return grid.extent > 0.0 ? grid : default_grid(rho, grid.points);
}

WignerGrid analysed_wigner(const MechanicalDensityMatrix& rho, const AnalysisOptions& options, int threads) {
  GridSpec spec = options.grid_for(rho);
  while (true) {
    try {
      return wigner(rho, spec, threads);
    } catch (const ConvergenceError&) {
      if (2 * spec.points - 1 > options.max_points) throw;
      spec.points = 2 * spec.points - 1;
    }
  }
}

}  // namespace hqs

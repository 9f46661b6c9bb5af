#pragma once

#include <vector>

#include "hqs/hilbert.hpp"

namespace hqs {

/// Reduced state of the mechanical mode with its spectral decomposition.
///
/// Construction checks Hermiticity, unit trace (1e-10) and positivity
/// (eigenvalues >= -1e-10); eigenvalues are then clipped to [0, 1]. The stored
/// eigenpairs span the range of rho; every direction outside them has
/// eigenvalue zero.
class MechanicalDensityMatrix {
 public:
  explicit MechanicalDensityMatrix(DenseMatrix rho, double tolerance = 1e-10);

  /// rho = F F^dag for an n x r factor. The spectrum comes from a thin SVD of
  /// F, which costs O(n r^2) instead of O(n^3).
  static MechanicalDensityMatrix from_factor(const DenseMatrix& factor, double tolerance = 1e-10);
  static MechanicalDensityMatrix from_pure(const Vector& fock_amplitudes);

  int dim() const { return static_cast<int>(rho_.rows()); }
  const DenseMatrix& rho() const { return rho_; }
  const Eigen::VectorXd& eigenvalues() const { return eigenvalues_; }
  const DenseMatrix& eigenvectors() const { return eigenvectors_; }  // dim x eigenvalues().size()

  double trace() const { return rho_.trace().real(); }
  double purity() const;
  double mean_phonon() const;

  /// Smallest dimension K such that the populations of levels >= K sum to at
  /// most `tail`. Used to trim the Wigner evaluation.
  int support(double tail = 1e-14) const;

 private:
  MechanicalDensityMatrix() = default;

  DenseMatrix rho_;
  Eigen::VectorXd eigenvalues_;
  DenseMatrix eigenvectors_;
};

MechanicalDensityMatrix reduce_to_mechanical(const CompositeSpace& space, const StateVector& psi);

/// P(n) = rho[n, n].
std::vector<double> fock_distribution(const MechanicalDensityMatrix& rho);

// ---------------------------------------------------------------------------
// Wigner function. Quadratures x = (b + b^dag)/sqrt(2), p = i(b^dag - b)/sqrt(2),
// normalised so that the integral over dx dp is one.

struct GridSpec {
  double extent = 6.0;  // axes span [-extent, extent]
  int points = 401;     // per axis, odd so that the origin is a node

  bool operator==(const GridSpec&) const = default;
};

/// Extent max(6, sqrt(2 (nbar + 3 sqrt(nbar + 1)))), enlarged so the
/// outermost populated Fock ring (radius sqrt(2 n + 1)) sits three units
/// inside the grid.
GridSpec default_grid(const MechanicalDensityMatrix& rho, int points = 401);

struct WignerGrid {
  std::vector<double> x;       // size nx
  std::vector<double> p;       // size np
  std::vector<double> values;  // row-major, values[i * np + j] = W(x_i, p_j)
  double dx = 0.0;
  double dp = 0.0;

  double at(std::size_t i, std::size_t j) const { return values[i * p.size() + j]; }
  double cell_area() const { return dx * dp; }
  double integral() const;
  double max() const;
  double min() const;
};

/// Coverage window for the integral of W over the grid.
inline constexpr double kWignerCoverageTol = 1e-3;

/// Evaluates W on the grid. Throws ConvergenceError when the grid integral
/// leaves [1 - 1e-3, 1 + 1e-3], i.e. the extent is too small.
WignerGrid wigner(const MechanicalDensityMatrix& rho, const GridSpec& grid, int threads = 1);

/// W at a single phase-space point.
double wigner_point(const DenseMatrix& rho, double x, double p);

/// zeta = (negative volume) / (positive volume), midpoint rule on the grid.
double negativity_ratio(const WignerGrid& grid);

// ---------------------------------------------------------------------------
// Quantum Fisher information for the quadratures.

inline constexpr double kEigenvalueThreshold = 1e-12;

struct QuadratureForm {
  double xx = 0.0;
  double pp = 0.0;
  double xp = 0.0;
  double skipped_bound = 0.0;  // bound on skipped pairs and on zeroed eigenvalues
};

/// F[rho, G] = 2 sum_{k,l: eta_k + eta_l > eta_tol} (eta_k - eta_l)^2 / (eta_k + eta_l) |<k|G|l>|^2
/// for G = X, P and the cross term with Re(<k|X|l><l|P|k>).
///
/// Eigenvalues at or below eta_tol / 2 are treated as zero, so only the
/// significant eigenvectors are needed; their partners outside the
/// significant set enter through completeness, sum_l |<k|G|l>|^2 = |G|k>|^2.
QuadratureForm qfi_form(const MechanicalDensityMatrix& rho, double eta_tol = kEigenvalueThreshold);

/// QFI for an arbitrary Hermitian generator in the Fock basis of the mode.
double qfi(const MechanicalDensityMatrix& rho, const DenseMatrix& generator,
           double eta_tol = kEigenvalueThreshold);

struct QfiMax {
  double value = 0.0;
  double phi = 0.0;  // maximiser of F(phi) for G(phi) = X sin(phi) + P cos(phi), in [0, pi)
};

/// F(phi) = sin^2 F_XX + cos^2 F_PP + 2 sin cos F_XP.
double qfi_at_angle(const QuadratureForm& form, double phi);

/// Largest eigenvalue of [[F_XX, F_XP], [F_XP, F_PP]] and its angle.
QfiMax qfi_max(const QuadratureForm& form);
QfiMax qfi_max(const MechanicalDensityMatrix& rho, double eta_tol = kEigenvalueThreshold);

/// Truncated quadrature matrices on a dim-level Fock space.
DenseMatrix quadrature_x(int dim);
DenseMatrix quadrature_p(int dim);

/// Settings shared by single runs and sweeps. A grid extent of zero selects
/// default_grid for each state.
struct AnalysisOptions {
  GridSpec grid{0.0, 401};
  int max_points = 1601;  // refinement cap for analysed_wigner
  double eta_tol = kEigenvalueThreshold;

  void validate() const;
  GridSpec grid_for(const MechanicalDensityMatrix& rho) const;
  bool operator==(const AnalysisOptions&) const = default;
};

/// W on options.grid_for(rho). While the coverage check fails the grid is
/// refined (M -> 2M - 1) up to options.max_points; the last failure propagates.
WignerGrid analysed_wigner(const MechanicalDensityMatrix& rho, const AnalysisOptions& options,
                           int threads = 1);

}  // namespace hqs

#include "hqs/model.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hqs/error.hpp"

namespace hqs {

namespace {

using Triplet = Eigen::Triplet<cplx, std::ptrdiff_t>;

bool finite(double v) { return std::isfinite(v); }

}  // namespace

void ModelParams::validate() const {
  if (!finite(g_qm) || !finite(g_mc) || !finite(detuning) || !finite(drive) || !finite(w_q)) {
    throw ConfigError("model parameters must be finite");
  }
  if (!(w_q > 0.0)) throw ConfigError("w_q must be positive");
  if (std::isnan(tau_c) || tau_c < 0.0) throw ConfigError("tau_c must be >= 0 or infinity");
  if (n_qubits < 1) throw ConfigError("n_qubits must be >= 1");
}

// Each term is written directly into triplets in the composite basis. The
// hopping terms are emitted pairwise (entry and its mirror with the same
// value), so the assembled matrix is exactly Hermitian.
SparseOperator build_hamiltonian(const CompositeSpace& space, const ModelParams& params,
                                 double drive_strength) {
  params.validate();
  if (params.n_qubits != space.n_qubits()) {
    throw ConfigError("ModelParams.n_qubits (" + std::to_string(params.n_qubits) +
                      ") does not match the space (" + std::to_string(space.n_qubits()) + ")");
  }
  if (!finite(drive_strength)) throw ConfigError("drive strength must be finite");

  const int nq = space.n_qubits();
  const int nm = space.dim_mech();
  const int nc = space.dim_cav();
  std::vector<Triplet> t;
  t.reserve(space.total_dim() * static_cast<std::size_t>(3 + 2 * nq + (drive_strength != 0.0) * 2));

  for (std::size_t q = 0; q < space.qubit_dim(); ++q) {
    int excitations = 0;
    for (int j = 1; j <= nq; ++j) excitations += space.excited(q, j) ? 1 : 0;
    for (int n = 0; n < nm; ++n) {
      for (int m = 0; m < nc; ++m) {
        const std::size_t col = space.index(q, n, m);
        // (w_q/2)(sz + I) = w_q |e><e|
        const double diag = params.w_q * excitations + n - params.detuning * m;
        t.emplace_back(col, col, diag);

        if (n + 1 < nm) {
          const std::size_t up = space.index(q, n + 1, m);
          // g_mc a^dag a (b + b^dag)
          if (m > 0 && params.g_mc != 0.0) {
            const double v = params.g_mc * m * std::sqrt(static_cast<double>(n + 1));
            t.emplace_back(up, col, v);
            t.emplace_back(col, up, v);
          }
          // g_qm s+_j b maps |g_j, n+1> -> sqrt(n+1) |e_j, n>; mirror is s-_j b^dag.
          if (params.g_qm != 0.0) {
            for (int j = 1; j <= nq; ++j) {
              if (space.excited(q, j)) continue;
              const std::size_t bit = std::size_t{1} << (nq - j);
              const std::size_t from = space.index(q, n + 1, m);        // |g_j, n+1>
              const std::size_t to = space.index(q | bit, n, m);        // |e_j, n>
              const double v = params.g_qm * std::sqrt(static_cast<double>(n + 1));
              t.emplace_back(to, from, v);
              t.emplace_back(from, to, v);
            }
          }
        }
        // drive (a + a^dag)
        if (drive_strength != 0.0 && m + 1 < nc) {
          const std::size_t up = space.index(q, n, m + 1);
          const double v = drive_strength * std::sqrt(static_cast<double>(m + 1));
          t.emplace_back(up, col, v);
          t.emplace_back(col, up, v);
        }
      }
    }
  }
  SparseMatrix h(static_cast<std::ptrdiff_t>(space.total_dim()),
                 static_cast<std::ptrdiff_t>(space.total_dim()));
  h.setFromTriplets(t.begin(), t.end());
  h.prune(cplx{0.0, 0.0});
  h.makeCompressed();
  return {std::move(h), true};
}

HamiltonianAction::HamiltonianAction(const CompositeSpace& space, const ModelParams& params,
                                     double drive_strength)
    : space_(space), params_(params), drive_(drive_strength) {
  params.validate();
  if (params.n_qubits != space.n_qubits()) {
    throw ConfigError("ModelParams.n_qubits does not match the space");
  }
  if (!finite(drive_strength)) throw ConfigError("drive strength must be finite");
  const int nm = space.dim_mech();
  const int nc = space.dim_cav();
  sqrt_.resize(static_cast<std::size_t>(std::max(nm, nc)) + 1);
  for (std::size_t k = 0; k < sqrt_.size(); ++k) sqrt_[k] = std::sqrt(static_cast<double>(k));
  excitations_.resize(space.qubit_dim());
  for (std::size_t q = 0; q < space.qubit_dim(); ++q) {
    for (int j = 1; j <= space.n_qubits(); ++j) excitations_[q] += space.excited(q, j) ? 1 : 0;
  }
  // row sums of |H|, evaluated on the corners where each term peaks
  const double g_qm = std::abs(params.g_qm);
  const double g_mc = std::abs(params.g_mc);
  for (std::size_t q = 0; q < space.qubit_dim(); ++q) {
    for (int n = 0; n < nm; ++n) {
      const double mech = (n > 0 ? sqrt_[n] : 0.0) + (n + 1 < nm ? sqrt_[n + 1] : 0.0);
      for (int m : {0, nc - 1}) {
        for (int mm = std::max(0, m - 1); mm <= std::min(nc - 1, m + 1); ++mm) {
          double s = std::abs(params.w_q * excitations_[q] + n - params.detuning * mm);
          s += g_mc * mm * mech;
          s += g_qm * space.n_qubits() * mech;
          s += std::abs(drive_) * ((mm > 0 ? sqrt_[mm] : 0.0) + (mm + 1 < nc ? sqrt_[mm + 1] : 0.0));
          norm_bound_ = std::max(norm_bound_, s);
        }
      }
    }
  }
}

void HamiltonianAction::apply(const Eigen::Ref<const Vector>& x, Vector& y) const {
  const int nq = space_.n_qubits();
  const int nm = space_.dim_mech();
  const int nc = space_.dim_cav();
  const auto row = static_cast<std::size_t>(nc);
  y.resize(x.size());
  const cplx* xp = x.data();
  cplx* yp = y.data();
  const double* sq = sqrt_.data();
  const double g_mc = params_.g_mc;
  const double g_qm = params_.g_qm;
  const double det = params_.detuning;
  for (std::size_t q = 0; q < space_.qubit_dim(); ++q) {
    const double qubit_energy = params_.w_q * excitations_[q];
    for (int n = 0; n < nm; ++n) {
      const std::size_t base = space_.index(q, n, 0);
      const cplx* xr = xp + base;
      cplx* yr = yp + base;
      const double e0 = qubit_energy + n;
      for (int m = 0; m < nc; ++m) yr[m] = (e0 - det * m) * xr[m];
      if (drive_ != 0.0) {
        for (int m = 0; m + 1 < nc; ++m) {
          const double v = drive_ * sq[m + 1];
          yr[m] += v * xr[m + 1];
          yr[m + 1] += v * xr[m];
        }
      }
      // g_mc m (b + b^dag) couples rows n and n +- 1 at equal m
      if (g_mc != 0.0) {
        if (n > 0) {
          const cplx* xd = xr - row;
          const double v = g_mc * sq[n];
          for (int m = 1; m < nc; ++m) yr[m] += (v * m) * xd[m];
        }
        if (n + 1 < nm) {
          const cplx* xu = xr + row;
          const double v = g_mc * sq[n + 1];
          for (int m = 1; m < nc; ++m) yr[m] += (v * m) * xu[m];
        }
      }
      if (g_qm != 0.0) {
        for (int j = 1; j <= nq; ++j) {
          const std::size_t bit = std::size_t{1} << (nq - j);
          const cplx* xs = nullptr;
          double v = 0.0;
          if (q & bit) {
            // s+_j b: |g_j, n+1> -> sqrt(n+1) |e_j, n>
            if (n + 1 >= nm) continue;
            xs = xp + space_.index(q & ~bit, n + 1, 0);
            v = g_qm * sq[n + 1];
          } else {
            // s-_j b^dag: |e_j, n-1> -> sqrt(n) |g_j, n>
            if (n == 0) continue;
            xs = xp + space_.index(q | bit, n - 1, 0);
            v = g_qm * sq[n];
          }
          for (int m = 0; m < nc; ++m) yr[m] += v * xs[m];
        }
      }
    }
  }
}

HamiltonianPair build_hamiltonian_pair(const CompositeSpace& space, const ModelParams& params) {
  return {build_hamiltonian(space, params, params.drive), build_hamiltonian(space, params, 0.0)};
}

double drive_schedule(const ModelParams& params, double tau) {
  if (params.tau_c <= 0.0) return 0.0;
  return tau <= params.tau_c ? params.drive : 0.0;
}

SparseOperator number_operator(const CompositeSpace& space, Mode mode) {
  SparseMatrix d(static_cast<std::ptrdiff_t>(space.total_dim()),
                 static_cast<std::ptrdiff_t>(space.total_dim()));
  std::vector<Triplet> t;
  t.reserve(space.total_dim());
  for (std::size_t i = 0; i < space.total_dim(); ++i) {
    const auto l = space.label(i);
    const int n = mode == Mode::Mechanical ? l.mech : l.cav;
    if (n != 0) t.emplace_back(i, i, static_cast<double>(n));
  }
  d.setFromTriplets(t.begin(), t.end());
  d.makeCompressed();
  return {std::move(d), true};
}

SparseOperator qubit_excitation_operator(const CompositeSpace& space) {
  SparseMatrix d(static_cast<std::ptrdiff_t>(space.total_dim()),
                 static_cast<std::ptrdiff_t>(space.total_dim()));
  std::vector<Triplet> t;
  t.reserve(space.total_dim());
  for (std::size_t i = 0; i < space.total_dim(); ++i) {
    const auto l = space.label(i);
    int e = 0;
    for (int j = 1; j <= space.n_qubits(); ++j) e += space.excited(l.qubits, j) ? 1 : 0;
    if (e != 0) t.emplace_back(i, i, static_cast<double>(e));
  }
  d.setFromTriplets(t.begin(), t.end());
  d.makeCompressed();
  return {std::move(d), true};
}

}  // namespace hqs

#include "hqs/hilbert.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <string>

#include "hqs/error.hpp"

namespace hqs {

namespace {

// Hard cap on the flat dimension; beyond this the state vector alone runs
// into tens of gigabytes.
constexpr std::size_t kMaxTotalDim = std::size_t{1} << 31;

using Triplet = Eigen::Triplet<cplx, std::ptrdiff_t>;

SparseMatrix from_triplets(std::size_t dim, const std::vector<Triplet>& triplets) {
  SparseMatrix m(static_cast<std::ptrdiff_t>(dim), static_cast<std::ptrdiff_t>(dim));
  m.setFromTriplets(triplets.begin(), triplets.end());
  m.makeCompressed();
  return m;
}

}  // namespace

CompositeSpace::CompositeSpace(int n_qubits, int dim_mech, int dim_cav)
    : n_qubits_(n_qubits), dim_mech_(dim_mech), dim_cav_(dim_cav), total_dim_(0) {
  if (n_qubits < 1 || n_qubits > 30) {
    throw ConfigError("n_qubits must be in [1, 30], got " + std::to_string(n_qubits));
  }
  if (dim_mech < 2 || dim_cav < 2) {
    throw ConfigError("Fock truncations must be >= 2 (dim_mech=" + std::to_string(dim_mech) +
                      ", dim_cav=" + std::to_string(dim_cav) + ")");
  }
  const std::size_t q = std::size_t{1} << n_qubits;
  const auto nm = static_cast<std::size_t>(dim_mech);
  const auto nc = static_cast<std::size_t>(dim_cav);
  if (q > kMaxTotalDim / nm || q * nm > kMaxTotalDim / nc) {
    throw ConfigError("composite dimension overflows the supported maximum");
  }
  total_dim_ = q * nm * nc;
}

std::size_t CompositeSpace::index(std::size_t qubits, int mech, int cav) const {
  return (qubits * static_cast<std::size_t>(dim_mech_) + static_cast<std::size_t>(mech)) *
             static_cast<std::size_t>(dim_cav_) +
         static_cast<std::size_t>(cav);
}

CompositeSpace::Label CompositeSpace::label(std::size_t flat) const {
  const auto nc = static_cast<std::size_t>(dim_cav_);
  const auto nm = static_cast<std::size_t>(dim_mech_);
  Label l{};
  l.cav = static_cast<int>(flat % nc);
  flat /= nc;
  l.mech = static_cast<int>(flat % nm);
  l.qubits = flat / nm;
  return l;
}

bool CompositeSpace::excited(std::size_t qubits, int j) const {
  return ((qubits >> (n_qubits_ - j)) & 1U) != 0;
}

CompositeSpace make_space(int n_qubits, int dim_mech, int dim_cav) {
  return CompositeSpace(n_qubits, dim_mech, dim_cav);
}

SparseOperator ladder_operator(const CompositeSpace& space, Mode mode) {
  std::vector<Triplet> t;
  t.reserve(space.total_dim());
  for (std::size_t q = 0; q < space.qubit_dim(); ++q) {
    for (int n = 0; n < space.dim_mech(); ++n) {
      for (int m = 0; m < space.dim_cav(); ++m) {
        const std::size_t col = space.index(q, n, m);
        if (mode == Mode::Mechanical && n > 0) {
          t.emplace_back(space.index(q, n - 1, m), col, std::sqrt(static_cast<double>(n)));
        } else if (mode == Mode::Cavity && m > 0) {
          t.emplace_back(space.index(q, n, m - 1), col, std::sqrt(static_cast<double>(m)));
        }
      }
    }
  }
  return {from_triplets(space.total_dim(), t), false};
}

SparseOperator qubit_operator(const CompositeSpace& space, int j, QubitOp kind) {
  if (j < 1 || j > space.n_qubits()) {
    throw ConfigError("qubit index " + std::to_string(j) + " outside [1, " +
                      std::to_string(space.n_qubits()) + "]");
  }
  const std::size_t bit = std::size_t{1} << (space.n_qubits() - j);
  const std::size_t block = static_cast<std::size_t>(space.dim_mech()) * space.dim_cav();
  std::vector<Triplet> t;
  t.reserve(space.total_dim());
  for (std::size_t q = 0; q < space.qubit_dim(); ++q) {
    const bool up = (q & bit) != 0;
    for (std::size_t k = 0; k < block; ++k) {
      const std::size_t col = q * block + k;
      switch (kind) {
        case QubitOp::SigmaPlus:
          if (!up) t.emplace_back((q | bit) * block + k, col, 1.0);
          break;
        case QubitOp::SigmaMinus:
          if (up) t.emplace_back((q & ~bit) * block + k, col, 1.0);
          break;
        case QubitOp::SigmaZ:
          t.emplace_back(col, col, up ? 1.0 : -1.0);
          break;
        case QubitOp::Identity:
          t.emplace_back(col, col, 1.0);
          break;
      }
    }
  }
  const bool herm = kind == QubitOp::SigmaZ || kind == QubitOp::Identity;
  return {from_triplets(space.total_dim(), t), herm};
}

SparseOperator adjoint(const SparseOperator& op) {
  SparseMatrix adj = op.matrix.adjoint();
  adj.makeCompressed();
  return {std::move(adj), op.hermitian};
}

double coherent_leakage(int dim, cplx alpha) {
  const double r2 = std::norm(alpha);
  if (r2 == 0.0) return 0.0;
  const double log_r = std::log(std::abs(alpha));
  double kept = 0.0;
  for (int n = 0; n < dim; ++n) {
    kept += std::exp(-r2 + 2.0 * n * log_r - std::lgamma(n + 1.0));
  }
  return std::max(0.0, 1.0 - kept);
}

Vector coherent_state(int dim, cplx alpha, double leakage_tol) {
  if (dim < 1) throw ConfigError("coherent_state: dim must be >= 1");
  Vector c = Vector::Zero(dim);
  const double r = std::abs(alpha);
  if (r == 0.0) {
    c(0) = 1.0;
    return c;
  }
  const double leak = coherent_leakage(dim, alpha);
  if (leak > leakage_tol) {
    char msg[160];
    std::snprintf(msg, sizeof msg, "coherent state |alpha|=%g needs more than %d Fock levels (leakage %.3g)", r,
                  dim, leak);
    throw ConvergenceError(msg);
  }
  const double phase = std::arg(alpha);
  const double log_r = std::log(r);
  for (int n = 0; n < dim; ++n) {
    const double mag = std::exp(-0.5 * r * r + n * log_r - 0.5 * std::lgamma(n + 1.0));
    c(n) = std::polar(mag, n * phase);
  }
  c /= c.norm();
  return c;
}

Vector qubit_register_state(int n_qubits, const InitialStateSpec& spec) {
  const std::size_t qdim = std::size_t{1} << n_qubits;
  Vector q = Vector::Zero(static_cast<std::ptrdiff_t>(qdim));
  const double s = std::numbers::sqrt2 / 2.0;
  switch (spec.qubit_kind) {
    case QubitPreparation::SingleSuperposition:
      if (n_qubits != 1) {
        throw ConfigError("single_superposition requires n_qubits = 1");
      }
      q(0) = s;  // |g>
      q(1) = s;  // |e>
      break;
    case QubitPreparation::TwoQubitPhase:
      if (n_qubits != 2) {
        throw ConfigError("two_qubit_phase requires n_qubits = 2");
      }
      q(0b10) = s;                                       // |e g>
      q(0b01) = std::polar(s, spec.theta);               // |g e>
      break;
    case QubitPreparation::Explicit: {
      if (spec.qubit_amplitudes.size() != qdim) {
        throw ConfigError("explicit qubit amplitudes: expected " + std::to_string(qdim) +
                          " entries, got " + std::to_string(spec.qubit_amplitudes.size()));
      }
      for (std::size_t i = 0; i < qdim; ++i) q(static_cast<std::ptrdiff_t>(i)) = spec.qubit_amplitudes[i];
      const double nrm = q.norm();
      if (!(nrm > 0.0) || !std::isfinite(nrm)) {
        throw ConfigError("explicit qubit amplitudes must have finite non-zero norm");
      }
      q /= nrm;
      break;
    }
  }
  return q;
}

StateVector build_initial_state(const CompositeSpace& space, const InitialStateSpec& spec) {
  const Vector q = qubit_register_state(space.n_qubits(), spec);
  const Vector mech = coherent_state(space.dim_mech(), spec.alpha_mech);
  const Vector cav = coherent_state(space.dim_cav(), spec.alpha_cav);
  Vector psi(static_cast<std::ptrdiff_t>(space.total_dim()));
  for (std::size_t iq = 0; iq < space.qubit_dim(); ++iq) {
    for (int n = 0; n < space.dim_mech(); ++n) {
      const cplx qn = q(static_cast<std::ptrdiff_t>(iq)) * mech(n);
      for (int m = 0; m < space.dim_cav(); ++m) {
        psi(static_cast<std::ptrdiff_t>(space.index(iq, n, m))) = qn * cav(m);
      }
    }
  }
  psi /= psi.norm();
  return StateVector(std::move(psi));
}

DenseMatrix partial_trace_mechanical(const CompositeSpace& space, const Vector& psi) {
  using RowMajorMap =
      Eigen::Map<const Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;
  if (static_cast<std::size_t>(psi.size()) != space.total_dim()) {
    throw ConfigError("partial trace: state dimension does not match the space");
  }
  const int nm = space.dim_mech();
  const int nc = space.dim_cav();
  const std::size_t block = static_cast<std::size_t>(nm) * nc;
  DenseMatrix rho = DenseMatrix::Zero(nm, nm);
  for (std::size_t q = 0; q < space.qubit_dim(); ++q) {
    RowMajorMap a(psi.data() + q * block, nm, nc);
    rho.noalias() += a * a.adjoint();
  }
  return rho;
}

std::vector<double> cavity_distribution(const CompositeSpace& space, const Vector& psi) {
  std::vector<double> p(static_cast<std::size_t>(space.dim_cav()), 0.0);
  for (std::size_t i = 0; i < space.total_dim(); ++i) {
    p[i % static_cast<std::size_t>(space.dim_cav())] += std::norm(psi(static_cast<std::ptrdiff_t>(i)));
  }
  return p;
}

}  // namespace hqs

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "hqs/analysis.hpp"
#include "hqs/error.hpp"
#include "oracles.hpp"

using namespace hqs;

namespace {

constexpr double kPi = std::numbers::pi;

MechanicalDensityMatrix fock(int dim, int n) {
  Vector v = Vector::Zero(dim);
  v(n) = 1.0;
  return MechanicalDensityMatrix::from_pure(v);
}

MechanicalDensityMatrix coherent(int dim, cplx alpha) {
  return MechanicalDensityMatrix::from_pure(coherent_state(dim, alpha));
}

double nearest(const WignerGrid& g, double x, double p) {
  const auto i = static_cast<std::size_t>(std::lround((x - g.x.front()) / g.dx));
  const auto j = static_cast<std::size_t>(std::lround((p - g.p.front()) / g.dp));
  return g.at(i, j);
}

}  // namespace

TEST_CASE("Wigner function of Fock states at the origin") {
  const GridSpec spec{6.0, 401};
  const auto w0 = wigner(fock(8, 0), spec);
  const auto w1 = wigner(fock(8, 1), spec);
  CHECK(std::abs(nearest(w0, 0, 0) - 1.0 / kPi) < 1e-12);
  CHECK(std::abs(nearest(w1, 0, 0) + 1.0 / kPi) < 1e-12);
  CHECK(std::abs(w0.integral() - 1.0) < 1e-9);
  CHECK(std::abs(w1.integral() - 1.0) < 1e-9);
  CHECK(w0.max() == doctest::Approx(1.0 / kPi).epsilon(1e-12));
  CHECK(w1.min() == doctest::Approx(-1.0 / kPi).epsilon(1e-12));
}

TEST_CASE("coherent state peak sits at (sqrt2 Re alpha, sqrt2 Im alpha)") {
  const cplx alpha{1.2, -0.7};
  const auto rho = coherent(30, alpha);
  const GridSpec spec{6.0, 601};  // dx = 0.02
  const auto w = wigner(rho, spec);
  std::size_t best = 0;
  for (std::size_t k = 0; k < w.values.size(); ++k)
    if (w.values[k] > w.values[best]) best = k;
  const double xm = w.x[best / w.p.size()];
  const double pm = w.p[best % w.p.size()];
  CHECK(std::abs(xm - std::numbers::sqrt2 * alpha.real()) <= w.dx);
  CHECK(std::abs(pm - std::numbers::sqrt2 * alpha.imag()) <= w.dp);
  // Gaussian of unit-variance width 1/sqrt2 in each quadrature
  const double x0 = std::numbers::sqrt2 * alpha.real();
  const double p0 = std::numbers::sqrt2 * alpha.imag();
  for (double x : {-1.0, 0.3, 2.0}) {
    for (double p : {-1.5, 0.0, 0.8}) {
      const double ref = std::exp(-(x - x0) * (x - x0) - (p - p0) * (p - p0)) / kPi;
      CHECK(std::abs(wigner_point(rho.rho(), x, p) - ref) < 1e-10);
    }
  }
}

TEST_CASE("grid and point evaluators agree with the parity oracle") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 3; ++trial) {
    const int dim = 6 + 3 * trial;
    const auto r = oracle::random_density(dim, 1 + trial, rng);
    const MechanicalDensityMatrix rho(r);
    const auto w = wigner(rho, GridSpec{8.0, 81});
    for (std::size_t i = 13; i < w.x.size(); i += 11) {
      for (std::size_t j = 15; j < w.p.size(); j += 13) {
        // the padded displacement is only exact well inside the padding
        if (std::hypot(w.x[i], w.p[j]) > 5.0) continue;
        const double ref = oracle::wigner_parity(r, w.x[i], w.p[j], 100);
        CHECK(std::abs(w.at(i, j) - ref) < 1e-10);
        CHECK(std::abs(wigner_point(r, w.x[i], w.p[j]) - ref) < 1e-10);
      }
    }
  }
}

TEST_CASE("point evaluator stays finite for high Fock levels") {
  for (int n : {150, 400, 900}) {
    Vector v = Vector::Zero(n + 1);
    v(n) = 1.0;
    const DenseMatrix r = v * v.adjoint();
    // W_n(0, 0) = (-1)^n / pi
    CHECK(std::abs(wigner_point(r, 0.0, 0.0) - (n % 2 == 0 ? 1.0 : -1.0) / kPi) < 1e-9);
    // far outside the ring the function vanishes
    CHECK(std::abs(wigner_point(r, 2.0 * std::sqrt(2.0 * n + 1.0), 0.0)) < 1e-12);
    const double on_ring = wigner_point(r, 0.0, std::sqrt(2.0 * n + 1.0));
    CHECK(std::isfinite(on_ring));
  }
}

TEST_CASE("high-Fock grid normalisation") {
  const auto rho = fock(401, 400);
  // 401 points cannot resolve the radial oscillations and the coverage test notices
  CHECK_THROWS_AS(wigner(rho, default_grid(rho, 401)), ConvergenceError);
  const auto spec = default_grid(rho, 801);
  CHECK(spec.extent >= std::sqrt(801.0) + 3.0);
  const auto w = wigner(rho, spec);
  CHECK(std::abs(w.integral() - 1.0) < 1e-6);
  CHECK(std::abs(nearest(w, 0, 0) - 1.0 / kPi) < 1e-9);
}

TEST_CASE("Wigner map is linear in rho") {
  std::mt19937_64 rng(5);
  const auto a = oracle::random_density(10, 2, rng);
  const auto b = oracle::random_density(10, 3, rng);
  const double c = 0.3;
  const GridSpec spec{7.0, 101};
  const auto wa = wigner(MechanicalDensityMatrix(a), spec);
  const auto wb = wigner(MechanicalDensityMatrix(b), spec);
  const auto wm = wigner(MechanicalDensityMatrix(c * a + (1 - c) * b), spec);
  double worst = 0.0;
  for (std::size_t k = 0; k < wm.values.size(); ++k)
    worst = std::max(worst, std::abs(wm.values[k] - c * wa.values[k] - (1 - c) * wb.values[k]));
  CHECK(worst < 1e-13);
}

TEST_CASE("negativity ratio") {
  const GridSpec spec{6.0, 401};
  SUBCASE("Gaussian states have none") {
    CHECK(negativity_ratio(wigner(fock(8, 0), spec)) < 1e-6);
    CHECK(negativity_ratio(wigner(coherent(30, {1.0, 0.5}), spec)) < 1e-6);
  }
  SUBCASE("single phonon") {
    // closed form: (2 e^{-1/2} - 1) / (2 e^{-1/2})
    const double e = std::exp(-0.5);
    const double ref = (2 * e - 1) / (2 * e);
    CHECK(std::abs(ref - 0.17564) < 1e-5);
    CHECK(std::abs(negativity_ratio(wigner(fock(8, 1), spec)) - ref) < 1e-4);
  }
  SUBCASE("invariant under phase-space rotation") {
    std::mt19937_64 rng(9);
    const Vector v = oracle::random_state(8, rng);
    Vector rotated = v;
    for (int n = 0; n < 8; ++n) rotated(n) *= std::polar(1.0, 0.7 * n);
    const double z0 = negativity_ratio(wigner(MechanicalDensityMatrix::from_pure(v), spec));
    const double z1 = negativity_ratio(wigner(MechanicalDensityMatrix::from_pure(rotated), spec));
    CHECK(z0 > 0.01);
    CHECK(std::abs(z0 - z1) < 1e-4);
  }
}

TEST_CASE("grid too small is reported") {
  CHECK_THROWS_AS(wigner(coherent(40, 3.0), GridSpec{3.0, 101}), ConvergenceError);
  CHECK_THROWS_AS(wigner(fock(4, 0), GridSpec{6.0, 2}), ConfigError);
  CHECK_THROWS_AS(wigner(fock(4, 0), GridSpec{0.0, 11}), ConfigError);
}

TEST_CASE("default grid covers the state") {
  const auto rho = coherent(60, 4.0);
  const auto spec = default_grid(rho);
  CHECK(spec.points == 401);
  CHECK(spec.extent >= 6.0);
  CHECK(std::abs(wigner(rho, spec).integral() - 1.0) < 1e-6);
}

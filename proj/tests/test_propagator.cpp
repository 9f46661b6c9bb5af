#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "hqs/error.hpp"
#include "hqs/krylov.hpp"
#include "hqs/propagator.hpp"
#include "oracles.hpp"

using namespace hqs;

namespace {

ModelParams jc_params() {
  ModelParams p;
  p.w_q = 1.0;
  p.g_qm = 0.05;
  p.g_mc = 0.0;
  p.drive = 0.0;
  p.detuning = 0.0;
  p.n_qubits = 1;
  return p;
}

ModelParams fig2_params() {
  ModelParams p;
  p.g_qm = 0.05;
  p.g_mc = 2.0;
  p.drive = 0.3;
  p.tau_c = std::numbers::pi;
  p.n_qubits = 2;
  return p;
}

InitialStateSpec fig2_initial() {
  InitialStateSpec s;
  s.qubit_kind = QubitPreparation::TwoQubitPhase;
  s.theta = 0.0;
  s.alpha_cav = 1.0;
  return s;
}

std::vector<double> grid(double t_end, int count) {
  std::vector<double> t(static_cast<std::size_t>(count) + 1);
  for (int i = 0; i <= count; ++i) t[static_cast<std::size_t>(i)] = t_end * i / count;
  return t;
}

}  // namespace

TEST_CASE("Jaynes-Cummings Rabi oscillation") {
  const auto s = make_space(1, 3, 2);
  Vector psi = Vector::Zero(static_cast<std::ptrdiff_t>(s.total_dim()));
  psi(static_cast<std::ptrdiff_t>(s.index(1, 0, 0))) = 1.0;
  PropagatorConfig cfg;
  cfg.sample_times = grid(100.0, 400);
  const auto rec = evolve(s, jc_params(), StateVector(psi), cfg);
  double worst = 0.0;
  for (const auto& smp : rec.samples) {
    const double c = std::cos(0.05 * smp.tau);
    worst = std::max(worst, std::abs(smp.qubit_pop - c * c));
  }
  CHECK(worst < 1e-8);
}

TEST_CASE("stationary product state without couplings") {
  ModelParams p;
  p.g_qm = p.g_mc = p.drive = 0.0;
  p.n_qubits = 2;
  const auto s = make_space(2, 6, 16);
  const auto psi0 = build_initial_state(s, fig2_initial());
  PropagatorConfig cfg;
  cfg.sample_times = grid(20.0, 40);
  const auto rec = evolve(s, p, psi0, cfg);
  for (const auto& smp : rec.samples) {
    CHECK(std::abs(smp.qubit_pop - 1.0) < 1e-10);
    CHECK(std::abs(smp.phonon_pop) < 1e-10);
    CHECK(std::abs(smp.photon_pop - 1.0) < 1e-9);
  }
}

TEST_CASE("conservation laws on a coarse fig2 truncation") {
  const auto p = fig2_params();
  const auto s = make_space(2, 32, 14);
  const auto psi0 = build_initial_state(s, fig2_initial());
  PropagatorConfig cfg;
  cfg.sample_times = grid(8.0, 80);
  cfg.sample_times.push_back(8.0);  // duplicate sample times are allowed
  const auto rec = evolve(s, p, psi0, cfg);

  double e_on = std::numeric_limits<double>::quiet_NaN();
  double e_off = e_on;
  double n_after = e_on;
  for (const auto& smp : rec.samples) {
    CHECK(std::abs(smp.norm - 1.0) < 1e-9);
    CHECK(smp.qubit_pop > -1e-10);
    CHECK(smp.phonon_pop > -1e-10);
    if (smp.tau <= p.tau_c) {
      if (std::isnan(e_on)) e_on = smp.energy;
      CHECK(std::abs(smp.energy - e_on) < 1e-8 * std::max(1.0, std::abs(e_on)));
    } else {
      if (std::isnan(e_off)) e_off = smp.energy;
      if (std::isnan(n_after)) n_after = smp.photon_pop;
      CHECK(std::abs(smp.energy - e_off) < 1e-8 * std::max(1.0, std::abs(e_off)));
      CHECK(std::abs(smp.photon_pop - n_after) < 1e-8);
    }
  }
  CHECK(rec.error_bound < 1e-6);
}

TEST_CASE("Krylov and dense backends agree") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int draw = 0; draw < 4; ++draw) {
    ModelParams p;
    p.n_qubits = 1 + draw % 2;
    p.w_q = 1.0 + 0.3 * u(rng);
    p.g_qm = 0.2 * u(rng);
    p.g_mc = 1.5 * u(rng);
    p.detuning = u(rng);
    p.drive = 0.5 * u(rng);
    p.tau_c = 1.0 + 2.0 * std::abs(u(rng));
    const auto s = make_space(p.n_qubits, 10, 12);
    InitialStateSpec init;
    init.qubit_kind = QubitPreparation::Explicit;
    const auto q = oracle::random_state(1 << p.n_qubits, rng);
    init.qubit_amplitudes.assign(q.data(), q.data() + q.size());
    init.alpha_cav = cplx{0.4 * u(rng), 0.4 * u(rng)};
    const auto psi0 = build_initial_state(s, init);
    PropagatorConfig k;
    k.sample_times = {0.0, 0.7, 2.5, 4.0};
    k.store_states = true;
    PropagatorConfig d = k;
    d.backend = Backend::DenseEigen;
    const auto rk = evolve(s, p, psi0, k);
    const auto rd = evolve(s, p, psi0, d);
    for (std::size_t i = 0; i < rk.samples.size(); ++i) {
      const auto diff = (rk.samples[i].state->amplitudes() - rd.samples[i].state->amplitudes()).norm();
      CHECK(diff < 1e-7);
    }
  }
}

TEST_CASE("dense backend matches the full matrix exponential") {
  ModelParams p = fig2_params();
  p.n_qubits = 1;
  p.tau_c = 1.0;
  const auto s = make_space(1, 6, 9);
  InitialStateSpec init;
  init.qubit_kind = QubitPreparation::SingleSuperposition;
  init.alpha_cav = 0.3;
  const auto psi0 = build_initial_state(s, init);
  PropagatorConfig d;
  d.backend = Backend::DenseEigen;
  const auto psi = state_at(s, p, psi0, 2.5, d);
  const auto h_on = oracle::hamiltonian(1, 6, 9, p.w_q, p.g_qm, p.g_mc, p.detuning, p.drive);
  const auto h_off = oracle::hamiltonian(1, 6, 9, p.w_q, p.g_qm, p.g_mc, p.detuning, 0.0);
  const oracle::Vec ref = (cplx{0.0, -1.5} * h_off).exp() * ((cplx{0.0, -1.0} * h_on).exp() * psi0.amplitudes());
  CHECK((psi.amplitudes() - ref).norm() < 1e-10);
}

TEST_CASE("state_at") {
  const auto p = fig2_params();
  const auto s = make_space(2, 24, 14);
  const auto psi0 = build_initial_state(s, fig2_initial());
  PropagatorConfig cfg;
  SUBCASE("tau = 0 returns the input exactly") {
    const auto out = state_at(s, p, psi0, 0.0, cfg);
    CHECK((out.amplitudes() - psi0.amplitudes()).norm() == 0.0);
  }
  SUBCASE("semigroup across the switch-off time") {
    const double tau = 4.0;
    const auto whole = state_at(s, p, psi0, tau, cfg);
    const auto half = state_at(s, p, psi0, tau / 2, cfg);
    ModelParams shifted = p;
    shifted.tau_c = p.tau_c - tau / 2;
    const auto rest = state_at(s, shifted, half, tau / 2, cfg);
    CHECK((whole.amplitudes() - rest.amplitudes()).norm() < 2e-9 * 10);
  }
}

TEST_CASE("degenerate switch-off times") {
  auto p = fig2_params();
  const auto s = make_space(2, 16, 14);
  const auto psi0 = build_initial_state(s, fig2_initial());
  PropagatorConfig cfg;
  cfg.backend = Backend::Krylov;
  p.tau_c = 0.0;
  const auto never = state_at(s, p, psi0, 1.5, cfg);
  auto p_off = p;
  p_off.drive = 0.0;
  const auto ref = state_at(s, p_off, psi0, 1.5, cfg);
  CHECK((never.amplitudes() - ref.amplitudes()).norm() < 1e-8);

  p.tau_c = std::numeric_limits<double>::infinity();
  auto p_late = p;
  p_late.tau_c = 100.0;
  const auto always = state_at(s, p, psi0, 1.5, cfg);
  const auto late = state_at(s, p_late, psi0, 1.5, cfg);
  CHECK((always.amplitudes() - late.amplitudes()).norm() < 1e-8);
}

TEST_CASE("propagator input validation") {
  const auto s = make_space(1, 3, 3);
  ModelParams p = jc_params();
  PropagatorConfig cfg;
  cfg.sample_times = {0.5, 1.0};
  CHECK_THROWS_AS(Propagator(s, p, cfg), ConfigError);
  cfg.sample_times = {0.0, 1.0, 0.5};
  CHECK_THROWS_AS(Propagator(s, p, cfg), ConfigError);
  cfg.sample_times = {0.0};
  cfg.step_tolerance = 0.0;
  CHECK_THROWS_AS(Propagator(s, p, cfg), ConfigError);
  cfg.step_tolerance = 1e-9;
  Vector bad = Vector::Ones(static_cast<std::ptrdiff_t>(s.total_dim()));
  CHECK_THROWS_AS(Propagator(s, p, cfg).evolve(StateVector(bad)), ConfigError);
  cfg.backend = Backend::DenseEigen;
  CHECK_THROWS_AS(Propagator(make_space(2, 40, 40), ModelParams{}, cfg), ConfigError);
}

TEST_CASE("Krylov substep budget is enforced") {
  const auto s = make_space(2, 24, 10);
  const auto h = build_hamiltonian(s, fig2_params(), 0.3);
  KrylovExponential::Options opt;
  opt.max_substeps = 2;
  opt.max_substep = 0.01;
  KrylovExponential k(h.matrix, opt);
  Vector psi = Vector::Zero(static_cast<std::ptrdiff_t>(s.total_dim()));
  psi(0) = 1.0;
  CHECK_THROWS_AS(k.advance(psi, 1.0), ConvergenceError);
}

TEST_CASE("happy breakdown on an invariant subspace") {
  // vacuum of an uncoupled system is an eigenvector: the Krylov space is 1-d
  ModelParams p;
  p.g_qm = p.g_mc = p.drive = 0.0;
  p.n_qubits = 1;
  const auto s = make_space(1, 4, 4);
  const auto h = build_hamiltonian(s, p, 0.0);
  KrylovExponential k(h.matrix, {});
  Vector psi = Vector::Zero(static_cast<std::ptrdiff_t>(s.total_dim()));
  psi(static_cast<std::ptrdiff_t>(s.index(1, 2, 0))) = 1.0;  // energy 1 + 2 = 3
  const auto stats = k.advance(psi, 1000.0);
  CHECK(stats.substeps == 1);
  CHECK(std::abs(psi(static_cast<std::ptrdiff_t>(s.index(1, 2, 0))) - std::polar(1.0, -3000.0)) < 1e-10);
}

TEST_CASE("convergence check") {
  SUBCASE("uncoupled system has zero deviation") {
    ModelParams p;
    p.g_qm = p.g_mc = p.drive = 0.0;
    p.n_qubits = 2;
    const auto s = make_space(2, 4, 14);
    PropagatorConfig cfg;
    const auto r = convergence_check(s, p, fig2_initial(), 2.0, cfg);
    CHECK(r.phonon_deviation == 0.0);
    // the cavity coherent state itself is truncated differently in the two spaces
    CHECK(r.photon_deviation < 1e-9);
    CHECK(r.enlarged.dim_mech == 6);
    CHECK(r.enlarged.dim_cav == 21);
    CHECK(r.accepted);
  }
  SUBCASE("a tiny mechanical truncation is flagged") {
    const auto s = make_space(2, 4, 14);
    PropagatorConfig cfg;
    const auto r = convergence_check(s, fig2_params(), fig2_initial(), std::numbers::pi, cfg);
    CHECK(r.base.top_mech > kTopFockTolerance);
    CHECK_FALSE(r.accepted);
  }
  SUBCASE("memory budget") {
    const auto s = make_space(2, 400, 30);
    CHECK_THROWS_AS(convergence_check(s, fig2_params(), fig2_initial(), 1.0, {}, 1 << 20), ConfigError);
  }
}

#include "hqs/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "hqs/error.hpp"
#include "hqs/output.hpp"

#ifndef HQS_VERSION
#define HQS_VERSION "unknown"
#endif

namespace hqs {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

Json report_json(const ConvergenceReport& r) {
  auto run_json = [](const TruncationRun& t) {
    return Json{{"dim_mech", t.dim_mech},     {"dim_cav", t.dim_cav},   {"phonon_pop", t.phonon_pop},
                {"photon_pop", t.photon_pop}, {"top_mech", t.top_mech}, {"top_cav", t.top_cav}};
  };
  return Json{{"base", run_json(r.base)},
              {"enlarged", run_json(r.enlarged)},
              {"phonon_deviation", r.phonon_deviation},
              {"photon_deviation", r.photon_deviation},
              {"accepted", r.accepted}};
}

std::string rejection(const ConvergenceReport& r) {
  return "truncation (" + std::to_string(r.base.dim_mech) + ", " + std::to_string(r.base.dim_cav) +
         ") rejected: top Fock occupancies " + format_double(r.base.top_mech) + " (mechanics), " +
         format_double(r.base.top_cav) + " (cavity) exceed " + format_double(kTopFockTolerance) +
         "; relative phonon deviation after enlarging " + format_double(r.phonon_deviation);
}

Json base_meta(const RunConfig& config, int threads) {
  return Json{{"software", Json{{"name", "hqs"}, {"version", HQS_VERSION}}},
              {"config", to_json(config)},
              {"threads", threads}};
}

RunOutcome run_sweep_config(const RunConfig& config, int threads, const std::filesystem::path& dir) {
  const auto start = Clock::now();
  RunOutcome out;
  out.meta = base_meta(config, threads);
  const auto spec = config.sweep_spec();
  const auto res = run_sweep(spec, threads);

  const auto csv = dir / "sweep.csv";
  write_sweep_csv(csv, res);
  out.files.push_back(csv);

  Json flagged = Json::array();
  const std::size_t n2 = res.axis2.size();
  for (std::size_t k : res.flagged()) {
    flagged.push_back(Json{{"i", k / n2},
                           {"j", k % n2},
                           {"flag", static_cast<int>(res.flags[k])},
                           {"diagnostic", res.diagnostics[k]}});
  }
  Json sweep{{"axis1", to_string(spec.axis1.field)},
             {"axis2", to_string(spec.axis2.field)},
             {"observable", to_string(spec.observable)},
             {"shape", {res.axis1.size(), n2}},
             {"failures", res.failures()},
             {"flagged", flagged},
             {"corner", {{"i", res.corner_index / n2}, {"j", res.corner_index % n2}}}};
  if (res.corner_check) sweep["corner"]["check"] = report_json(*res.corner_check);
  out.meta["sweep"] = sweep;
  out.meta["truncation"] = Json{{"dim_mech", config.dim_mech}, {"dim_cav", config.dim_cav}};
  out.meta["runtimes"] = Json{{"sweep_s", res.runtime_seconds}, {"total_s", seconds_since(start)}};

  const auto meta = dir / "meta.json";
  write_json(meta, out.meta);
  out.files.push_back(meta);
  if (res.corner_check && !res.corner_check->accepted)
    throw ConvergenceError("sweep corner check failed, " + rejection(*res.corner_check));
  return out;
}

RunOutcome run_single(const RunConfig& config, int threads, const std::filesystem::path& dir) {
  const auto start = Clock::now();
  RunOutcome out;
  out.meta = base_meta(config, threads);

  const auto space = make_space(config.model.n_qubits, config.dim_mech, config.dim_cav);
  const auto psi0 = build_initial_state(space, config.initial);
  Json truncation{{"dim_mech", config.dim_mech}, {"dim_cav", config.dim_cav}};

  double check_s = 0.0;
  if (config.validate_truncation) {
    const auto t = Clock::now();
    PropagatorConfig pc = config.propagator;
    pc.sample_times = {0.0};
    const auto report = convergence_check(space, config.model, config.initial, config.snapshots.tau_star, pc);
    check_s = seconds_since(t);
    truncation["check"] = report_json(report);
    if (!report.accepted) throw ConvergenceError(rejection(report));
  }

  // population trajectory
  double propagation_s = 0.0;
  const auto times = config.trajectory.times();
  if (!times.empty()) {
    const auto t = Clock::now();
    PropagatorConfig pc = config.propagator;
    pc.sample_times = times;
    pc.store_states = false;
    const auto rec = evolve(space, config.model, psi0, pc);
    propagation_s += seconds_since(t);
    const auto csv = dir / "trajectory.csv";
    write_trajectory_csv(csv, rec);
    out.files.push_back(csv);
    double drift = 0.0;
    for (const auto& s : rec.samples) drift = std::max(drift, std::abs(s.norm - 1.0));
    out.meta["trajectory"] = Json{{"samples", rec.samples.size()},
                                  {"error_bound", rec.error_bound},
                                  {"substeps", rec.substeps},
                                  {"matvecs", rec.matvecs},
                                  {"max_norm_drift", drift}};
  }

  // snapshots: the analysed state plus any extra Wigner grids
  std::vector<double> snaps = config.snapshots.wigner_times;
  snaps.push_back(config.snapshots.tau_star);
  snaps.push_back(0.0);
  std::sort(snaps.begin(), snaps.end());
  snaps.erase(std::unique(snaps.begin(), snaps.end()), snaps.end());
  auto t = Clock::now();
  PropagatorConfig pc = config.propagator;
  pc.sample_times = snaps;
  pc.store_states = true;
  const auto rec = evolve(space, config.model, psi0, pc);
  propagation_s += seconds_since(t);

  t = Clock::now();
  Json snapshots = Json::array();
  for (const auto& s : rec.samples) {
    const bool wanted = std::find(config.snapshots.wigner_times.begin(), config.snapshots.wigner_times.end(),
                                  s.tau) != config.snapshots.wigner_times.end();
    const bool star = s.tau == config.snapshots.tau_star;
    if (!wanted && !star) continue;
    const auto rho = reduce_to_mechanical(space, *s.state);
    const auto grid = analysed_wigner(rho, config.analysis, threads);
    Json info{{"tau", s.tau}, {"grid_extent", grid.x.back()}, {"grid_points", grid.x.size()},
              {"wigner_integral", grid.integral()}, {"wigner_min", grid.min()}, {"wigner_max", grid.max()},
              {"zeta", negativity_ratio(grid)}};
    if (wanted) {
      const auto csv = dir / ("wigner_" + snapshot_label(s.tau) + ".csv");
      write_wigner_csv(csv, grid);
      out.files.push_back(csv);
      info["file"] = csv.filename().string();
    }
    snapshots.push_back(info);
    if (star) {
      const auto [top_mech, top_cav] = top_fock_occupancy(space, s.state->amplitudes());
      truncation["top_mech"] = top_mech;
      truncation["top_cav"] = top_cav;
      const auto q = qfi_max(rho, config.analysis.eta_tol);
      const auto fock = fock_distribution(rho);
      const auto csv = dir / "fock.csv";
      write_fock_csv(csv, fock);
      out.files.push_back(csv);
      out.meta["results"] = Json{{"tau_star", s.tau},
                                 {"zeta", negativity_ratio(grid)},
                                 {"qfi_max", q.value},
                                 {"qfi_phi", q.phi},
                                 {"mean_phonon", rho.mean_phonon()},
                                 {"purity", rho.purity()},
                                 {"P0", fock[0]},
                                 {"P1", fock[1]},
                                 {"qubit_pop", s.qubit_pop},
                                 {"photon_pop", s.photon_pop}};
    }
  }
  out.meta["snapshots"] = snapshots;
  out.meta["truncation"] = truncation;
  out.meta["runtimes"] = Json{{"convergence_check_s", check_s},
                              {"propagation_s", propagation_s},
                              {"analysis_s", seconds_since(t)},
                              {"total_s", seconds_since(start)}};
  const auto meta = dir / "meta.json";
  write_json(meta, out.meta);
  out.files.push_back(meta);
  return out;
}

}  // namespace

RunOutcome run(const RunConfig& config, int threads, std::filesystem::path out_dir) {
  config.validate();
  if (out_dir.empty()) out_dir = config.output_dir;
  ensure_directory(out_dir);
  threads = std::max(threads, 1);
  return config.sweep ? run_sweep_config(config, threads, out_dir) : run_single(config, threads, out_dir);
}

}  // namespace hqs

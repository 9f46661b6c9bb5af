#include <numbers>

#include "hqs/config.hpp"
#include "hqs/error.hpp"

namespace hqs {

namespace {

constexpr double kPi = std::numbers::pi;

// Truncations (N_m, N_c) accepted by convergence_check at tau = pi.
// Sweeps use the truncation accepted at their most demanding corner; for the
// cavity that is the G_mc = 0 edge, where the resonant drive is unopposed.
constexpr int kFig2Mech = 1000, kFig2Cav = 16;
constexpr int kFig3Mech = 900, kFig3Cav = 20;
constexpr int kFig4Mech = 1100, kFig4Cav = 20;
constexpr int kFig5aMech = 1200, kFig5aCav = 24;
constexpr int kFig5bMech = 1400, kFig5bCav = 30;
constexpr int kFig5NewAMech = 1400, kFig5NewACav = 18;
constexpr int kFig5NewBMech = 1600, kFig5NewBCav = 40;
constexpr int kFig6aMech = 1400, kFig6aCav = 30;
constexpr int kFig6bMech = 1200, kFig6bCav = 18;

Json model(double g_mc, double drive, int n_qubits, double detuning = 0.0) {
  return Json{{"w_q", 1.0},  {"G_qm", 0.05}, {"G_mc", g_mc}, {"D", detuning},
              {"E0", drive}, {"tau_c", kPi}, {"n_qubits", n_qubits}};
}

Json two_qubit(double theta) {
  return Json{{"qubits", "two_qubit_phase"}, {"theta", theta}, {"alpha_cav", 1.0}};
}

Json one_qubit() { return Json{{"qubits", "single_superposition"}, {"alpha_cav", 1.0}}; }

Json truncation(int dim_mech, int dim_cav) { return Json{{"dim_mech", dim_mech}, {"dim_cav", dim_cav}}; }

Json axis(const char* field, double lo, double hi, int count) {
  return Json{{"field", field}, {"min", lo}, {"max", hi}, {"count", count}};
}

Json sweep(Json a1, Json a2, const char* observable) {
  return Json{{"axis1", std::move(a1)}, {"axis2", std::move(a2)}, {"observable", observable}};
}

Json base(const char* name, Json m, Json init, Json trunc) {
  return Json{{"preset", name}, {"model", std::move(m)}, {"initial", std::move(init)},
              {"truncation", std::move(trunc)}, {"output_dir", std::string("out/") + name}};
}

}  // namespace

std::vector<std::string> preset_names() {
  return {"fig2", "fig3", "fig4", "fig5a", "fig5b", "fig5b_text", "fig5new_a", "fig5new_b", "fig6a", "fig6b"};
}

Json preset_document(const std::string& name) {
  if (name == "fig2") {
    auto d = base("fig2", model(2.0, 0.3, 2), two_qubit(0.0), truncation(kFig2Mech, kFig2Cav));
    d["trajectory"] = Json{{"t_end", 20.0}, {"steps", 400}};
    return d;
  }
  if (name == "fig3") {
    auto d = base("fig3", model(2.0, 0.5, 2), two_qubit(0.0), truncation(kFig3Mech, kFig3Cav));
    d["snapshots"] = Json{{"tau_star", kPi}, {"wigner_times", {0.0, kPi / 3, 2 * kPi / 3, kPi}}};
    return d;
  }
  if (name == "fig4") {
    auto d = base("fig4", model(2.0, 0.8, 2), two_qubit(kPi), truncation(kFig4Mech, kFig4Cav));
    d["snapshots"] = Json{{"tau_star", kPi}, {"wigner_times", {kPi}}};
    return d;
  }
  if (name == "fig5a") {
    auto d = base("fig5a", model(2.0, 0.8, 2), two_qubit(0.0), truncation(kFig5aMech, kFig5aCav));
    d["sweep"] = sweep(axis("theta", -kPi, kPi, 9), axis("alpha_cav", 0.0, 1.6, 9), "zeta");
    return d;
  }
  if (name == "fig5b") {
    auto d = base("fig5b", model(2.0, 0.8, 1), one_qubit(), truncation(kFig5bMech, kFig5bCav));
    d["sweep"] = sweep(axis("G_qm", 0.0, 0.2, 9), axis("G_mc", 0.0, 2.4, 9), "zeta");
    return d;
  }
  if (name == "fig5b_text") {
    // same map for the two-qubit initial state
    auto d = base("fig5b_text", model(2.0, 0.8, 2), two_qubit(0.0), truncation(kFig5bMech, kFig5bCav));
    d["sweep"] = sweep(axis("G_qm", 0.0, 0.2, 9), axis("G_mc", 0.0, 2.4, 9), "zeta");
    return d;
  }
  if (name == "fig5new_a") {
    auto d = base("fig5new_a", model(2.0, 0.8, 1), one_qubit(), truncation(kFig5NewAMech, kFig5NewACav));
    d["sweep"] = sweep(axis("D", -2.0, 2.0, 9), axis("E0", 0.0, 1.0, 9), "zeta");
    return d;
  }
  if (name == "fig5new_b") {
    auto d = base("fig5new_b", model(2.0, 0.8, 1), one_qubit(), truncation(kFig5NewBMech, kFig5NewBCav));
    d["sweep"] = sweep(axis("E0", 0.0, 1.0, 9), axis("G_mc", 0.0, 2.4, 9), "zeta");
    return d;
  }
  if (name == "fig6a") {
    auto d = base("fig6a", model(2.0, 0.8, 2), two_qubit(0.0), truncation(kFig6aMech, kFig6aCav));
    d["sweep"] = sweep(axis("theta", 0.0, kPi, 2), axis("G_mc", 0.0, 2.4, 9), "qfi_max");
    return d;
  }
  if (name == "fig6b") {
    auto d = base("fig6b", model(2.0, 0.8, 2), two_qubit(0.0), truncation(kFig6bMech, kFig6bCav));
    d["sweep"] = sweep(axis("theta", 0.0, kPi, 2), axis("D", -2.0, 2.0, 9), "qfi_max");
    return d;
  }
  std::string known;
  for (const auto& n : preset_names()) known += (known.empty() ? "" : ", ") + n;
  throw ConfigError("unknown preset \"" + name + "\" (known: " + known + ")");
}

}  // namespace hqs

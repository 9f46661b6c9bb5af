#include "hqs/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <set>

#include "hqs/error.hpp"

namespace hqs {

namespace {

// Walks one JSON object, remembering which keys were read so that the rest
// can be reported as unknown.
class Section {
 public:
  Section(const Json& node, std::string path) : node_(node), path_(std::move(path)) {
    if (!node_.is_object()) throw ConfigError(where() + "expected an object");
  }

  bool has(const char* key) {
    seen_.insert(key);
    return node_.contains(key) && !node_.at(key).is_null();
  }

  const Json& at(const char* key) { return node_.at(key); }
  std::string child(const char* key) const { return path_.empty() ? key : path_ + "." + key; }

  double number(const char* key, double fallback) {
    if (!has(key)) return fallback;
    const auto& v = at(key);
    if (!v.is_number()) throw ConfigError(child(key) + ": expected a number");
    return v.get<double>();
  }

  // accepts a number or "inf"
  double extended(const char* key, double fallback) {
    if (!has(key)) return fallback;
    const auto& v = at(key);
    if (v.is_string() && (v == "inf" || v == "infinity")) return std::numeric_limits<double>::infinity();
    if (!v.is_number()) throw ConfigError(child(key) + ": expected a number or \"inf\"");
    return v.get<double>();
  }

  long long integer(const char* key, long long fallback) {
    if (!has(key)) return fallback;
    const auto& v = at(key);
    if (!v.is_number_integer()) throw ConfigError(child(key) + ": expected an integer");
    return v.get<long long>();
  }

  bool boolean(const char* key, bool fallback) {
    if (!has(key)) return fallback;
    const auto& v = at(key);
    if (!v.is_boolean()) throw ConfigError(child(key) + ": expected true or false");
    return v.get<bool>();
  }

  std::string string(const char* key, const std::string& fallback) {
    if (!has(key)) return fallback;
    const auto& v = at(key);
    if (!v.is_string()) throw ConfigError(child(key) + ": expected a string");
    return v.get<std::string>();
  }

  cplx complex(const char* key, cplx fallback) {
    if (!has(key)) return fallback;
    return to_complex(at(key), child(key));
  }

  static cplx to_complex(const Json& v, const std::string& path) {
    if (v.is_number()) return {v.get<double>(), 0.0};
    if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
      return {v[0].get<double>(), v[1].get<double>()};
    throw ConfigError(path + ": expected a number or [re, im]");
  }

  void finish() const {
    for (const auto& [key, value] : node_.items()) {
      if (!seen_.contains(key)) throw ConfigError(child(key.c_str()) + ": unknown key");
    }
  }

 private:
  std::string where() const { return path_.empty() ? "" : path_ + ": "; }

  const Json& node_;
  std::string path_;
  std::set<std::string> seen_;
};

template <class Enum>
struct Names {
  Enum value;
  const char* name;
};

constexpr Names<QubitPreparation> kQubitNames[] = {
    {QubitPreparation::SingleSuperposition, "single_superposition"},
    {QubitPreparation::TwoQubitPhase, "two_qubit_phase"},
    {QubitPreparation::Explicit, "explicit"}};
constexpr Names<Backend> kBackendNames[] = {{Backend::Krylov, "krylov"}, {Backend::DenseEigen, "dense_eigen"}};
constexpr Names<SweepField> kFieldNames[] = {
    {SweepField::Theta, "theta"}, {SweepField::AlphaCav, "alpha_cav"}, {SweepField::GQm, "G_qm"},
    {SweepField::GMc, "G_mc"},    {SweepField::Detuning, "D"},          {SweepField::Drive, "E0"}};
constexpr Names<Observable> kObservableNames[] = {{Observable::Zeta, "zeta"},
                                                  {Observable::QfiMax, "qfi_max"},
                                                  {Observable::PhononPopulation, "phonon_population"}};

template <class Enum, std::size_t N>
Enum lookup(const Names<Enum> (&table)[N], const std::string& name, const std::string& path) {
  for (const auto& e : table)
    if (name == e.name) return e.value;
  std::string allowed;
  for (const auto& e : table) allowed += std::string(allowed.empty() ? "" : ", ") + e.name;
  throw ConfigError(path + ": unknown value \"" + name + "\" (allowed: " + allowed + ")");
}

template <class Enum, std::size_t N>
const char* name_of(const Names<Enum> (&table)[N], Enum value) {
  for (const auto& e : table)
    if (e.value == value) return e.name;
  return "?";
}

Json complex_json(cplx z) { return Json::array({z.real(), z.imag()}); }

Json extended_json(double v) {
  if (std::isinf(v)) return "inf";
  return v;
}

SweepAxis parse_axis(const Json& node, const std::string& path) {
  Section s(node, path);
  SweepAxis a;
  if (!s.has("field")) throw ConfigError(path + ".field: required");
  a.field = lookup(kFieldNames, s.string("field", ""), s.child("field"));
  if (!s.has("min") || !s.has("max")) throw ConfigError(path + ": min and max are required");
  a.min = s.number("min", 0.0);
  a.max = s.number("max", 0.0);
  a.count = static_cast<int>(s.integer("count", 9));
  s.finish();
  return a;
}

Json axis_json(const SweepAxis& a) {
  return Json{{"field", name_of(kFieldNames, a.field)}, {"min", a.min}, {"max", a.max}, {"count", a.count}};
}

RunConfig parse_resolved(const Json& doc) {
  Section root(doc, "");
  RunConfig c;
  c.preset = root.string("preset", "");

  if (root.has("model")) {
    Section s(root.at("model"), "model");
    c.model.w_q = s.number("w_q", c.model.w_q);
    c.model.g_qm = s.number("G_qm", c.model.g_qm);
    c.model.g_mc = s.number("G_mc", c.model.g_mc);
    c.model.detuning = s.number("D", c.model.detuning);
    c.model.drive = s.number("E0", c.model.drive);
    c.model.tau_c = s.extended("tau_c", c.model.tau_c);
    c.model.n_qubits = static_cast<int>(s.integer("n_qubits", c.model.n_qubits));
    s.finish();
  }
  if (root.has("initial")) {
    Section s(root.at("initial"), "initial");
    c.initial.qubit_kind = lookup(kQubitNames, s.string("qubits", "two_qubit_phase"), s.child("qubits"));
    c.initial.theta = s.number("theta", c.initial.theta);
    if (s.has("amplitudes")) {
      const auto& arr = s.at("amplitudes");
      if (!arr.is_array()) throw ConfigError(s.child("amplitudes") + ": expected an array");
      for (std::size_t i = 0; i < arr.size(); ++i)
        c.initial.qubit_amplitudes.push_back(
            Section::to_complex(arr[i], s.child("amplitudes") + "[" + std::to_string(i) + "]"));
    }
    c.initial.alpha_mech = s.complex("alpha_mech", c.initial.alpha_mech);
    c.initial.alpha_cav = s.complex("alpha_cav", c.initial.alpha_cav);
    s.finish();
  }
  if (root.has("truncation")) {
    Section s(root.at("truncation"), "truncation");
    c.dim_mech = static_cast<int>(s.integer("dim_mech", c.dim_mech));
    c.dim_cav = static_cast<int>(s.integer("dim_cav", c.dim_cav));
    s.finish();
  }
  if (root.has("propagator")) {
    Section s(root.at("propagator"), "propagator");
    c.propagator.backend = lookup(kBackendNames, s.string("backend", "krylov"), s.child("backend"));
    c.propagator.krylov_dim = static_cast<int>(s.integer("krylov_dim", c.propagator.krylov_dim));
    c.propagator.step_tolerance = s.number("step_tolerance", c.propagator.step_tolerance);
    c.propagator.max_substep = s.number("max_substep", c.propagator.max_substep);
    const long long cap = s.integer("max_substeps", static_cast<long long>(c.propagator.max_substeps));
    if (cap < 1) throw ConfigError("propagator.max_substeps must be >= 1");
    c.propagator.max_substeps = static_cast<std::size_t>(cap);
    s.finish();
  }
  if (root.has("trajectory")) {
    Section s(root.at("trajectory"), "trajectory");
    c.trajectory.t_end = s.number("t_end", c.trajectory.t_end);
    c.trajectory.steps = static_cast<int>(s.integer("steps", c.trajectory.steps));
    s.finish();
  }
  if (root.has("snapshots")) {
    Section s(root.at("snapshots"), "snapshots");
    c.snapshots.tau_star = s.number("tau_star", c.snapshots.tau_star);
    if (s.has("wigner_times")) {
      const auto& arr = s.at("wigner_times");
      if (!arr.is_array()) throw ConfigError(s.child("wigner_times") + ": expected an array");
      for (std::size_t i = 0; i < arr.size(); ++i) {
        if (!arr[i].is_number())
          throw ConfigError(s.child("wigner_times") + "[" + std::to_string(i) + "]: expected a number");
        c.snapshots.wigner_times.push_back(arr[i].get<double>());
      }
    }
    s.finish();
  }
  if (root.has("analysis")) {
    Section s(root.at("analysis"), "analysis");
    c.analysis.grid.extent = s.number("grid_extent", c.analysis.grid.extent);
    c.analysis.grid.points = static_cast<int>(s.integer("grid_points", c.analysis.grid.points));
    c.analysis.max_points = static_cast<int>(s.integer("max_grid_points", c.analysis.max_points));
    c.analysis.eta_tol = s.number("eta_tol", c.analysis.eta_tol);
    s.finish();
  }
  if (root.has("sweep")) {
    Section s(root.at("sweep"), "sweep");
    SweepOptions sw;
    if (!s.has("axis1") || !s.has("axis2")) throw ConfigError("sweep: axis1 and axis2 are required");
    sw.axis1 = parse_axis(s.at("axis1"), "sweep.axis1");
    sw.axis2 = parse_axis(s.at("axis2"), "sweep.axis2");
    sw.observable = lookup(kObservableNames, s.string("observable", "zeta"), s.child("observable"));
    s.finish();
    c.sweep = sw;
  }
  c.validate_truncation = root.boolean("validate_truncation", c.validate_truncation);
  c.output_dir = root.string("output_dir", c.output_dir);
  root.finish();

  c.propagator.sample_times = {0.0};
  c.validate();
  return c;
}

}  // namespace

std::vector<double> TrajectoryOptions::times() const {
  std::vector<double> t;
  if (steps <= 0) return t;
  t.resize(static_cast<std::size_t>(steps) + 1);
  for (int i = 0; i <= steps; ++i) t[static_cast<std::size_t>(i)] = t_end * i / steps;
  t.back() = t_end;
  return t;
}

void RunConfig::validate() const {
  model.validate();
  const auto space = make_space(model.n_qubits, dim_mech, dim_cav);
  qubit_register_state(model.n_qubits, initial);
  propagator.validate();
  if (propagator.backend == Backend::DenseEigen && space.total_dim() > kDenseBackendMaxDim)
    throw ConfigError("propagator.backend: dense_eigen is limited to " + std::to_string(kDenseBackendMaxDim) +
                      " states, the space has " + std::to_string(space.total_dim()));
  if (!(trajectory.t_end >= 0.0) || !std::isfinite(trajectory.t_end))
    throw ConfigError("trajectory.t_end must be finite and >= 0");
  if (trajectory.steps < 0) throw ConfigError("trajectory.steps must be >= 0");
  if (trajectory.steps > 0 && trajectory.t_end == 0.0)
    throw ConfigError("trajectory.t_end must be positive when steps > 0");
  if (!(snapshots.tau_star >= 0.0) || !std::isfinite(snapshots.tau_star))
    throw ConfigError("snapshots.tau_star must be finite and >= 0");
  std::set<std::string> labels;
  for (double t : snapshots.wigner_times) {
    if (!(t >= 0.0) || !std::isfinite(t)) throw ConfigError("snapshots.wigner_times must be finite and >= 0");
    if (!labels.insert(snapshot_label(t)).second)
      throw ConfigError("snapshots.wigner_times: two times share the file label " + snapshot_label(t));
  }
  analysis.validate();
  if (sweep) sweep_spec().validate();
  if (output_dir.empty()) throw ConfigError("output_dir must not be empty");
}

SweepSpec RunConfig::sweep_spec() const {
  if (!sweep) throw ConfigError("configuration has no sweep section");
  SweepSpec s;
  s.axis1 = sweep->axis1;
  s.axis2 = sweep->axis2;
  s.observable = sweep->observable;
  s.params = model;
  s.initial = initial;
  s.dim_mech = dim_mech;
  s.dim_cav = dim_cav;
  s.propagator = propagator;
  s.propagator.sample_times = {0.0};
  s.analysis = analysis;
  s.tau_star = snapshots.tau_star;
  s.validate_truncation = validate_truncation;
  return s;
}

std::string snapshot_label(double tau) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", tau);
  return buf;
}

Json to_json(const RunConfig& c) {
  Json doc;
  if (!c.preset.empty()) doc["preset"] = c.preset;
  doc["model"] = Json{{"w_q", c.model.w_q},
                      {"G_qm", c.model.g_qm},
                      {"G_mc", c.model.g_mc},
                      {"D", c.model.detuning},
                      {"E0", c.model.drive},
                      {"tau_c", extended_json(c.model.tau_c)},
                      {"n_qubits", c.model.n_qubits}};
  Json amps = Json::array();
  for (cplx z : c.initial.qubit_amplitudes) amps.push_back(complex_json(z));
  doc["initial"] = Json{{"qubits", name_of(kQubitNames, c.initial.qubit_kind)},
                        {"theta", c.initial.theta},
                        {"amplitudes", amps},
                        {"alpha_mech", complex_json(c.initial.alpha_mech)},
                        {"alpha_cav", complex_json(c.initial.alpha_cav)}};
  doc["truncation"] = Json{{"dim_mech", c.dim_mech}, {"dim_cav", c.dim_cav}};
  doc["propagator"] = Json{{"backend", name_of(kBackendNames, c.propagator.backend)},
                           {"krylov_dim", c.propagator.krylov_dim},
                           {"step_tolerance", c.propagator.step_tolerance},
                           {"max_substep", c.propagator.max_substep},
                           {"max_substeps", c.propagator.max_substeps}};
  doc["trajectory"] = Json{{"t_end", c.trajectory.t_end}, {"steps", c.trajectory.steps}};
  doc["snapshots"] = Json{{"tau_star", c.snapshots.tau_star}, {"wigner_times", c.snapshots.wigner_times}};
  doc["analysis"] = Json{
      {"grid_extent", c.analysis.grid.extent}, {"grid_points", c.analysis.grid.points},
      {"max_grid_points", c.analysis.max_points}, {"eta_tol", c.analysis.eta_tol}};
  if (c.sweep) {
    doc["sweep"] = Json{{"axis1", axis_json(c.sweep->axis1)},
                        {"axis2", axis_json(c.sweep->axis2)},
                        {"observable", name_of(kObservableNames, c.sweep->observable)}};
  } else {
    doc["sweep"] = nullptr;  // also clears a sweep coming from the preset
  }
  doc["validate_truncation"] = c.validate_truncation;
  doc["output_dir"] = c.output_dir;
  return doc;
}

void apply_override(Json& doc, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0)
    throw ConfigError("override \"" + assignment + "\" is not of the form key=value");
  const std::string path = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  Json value = Json::parse(text, nullptr, false);
  if (value.is_discarded()) value = text;

  Json* node = &doc;
  std::size_t start = 0;
  while (true) {
    const auto dot = path.find('.', start);
    const std::string key = path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (key.empty()) throw ConfigError("override \"" + assignment + "\" has an empty path component");
    if (!node->is_object()) {
      if (!node->is_null()) throw ConfigError("override \"" + path + "\": " + key + " is not inside an object");
      *node = Json::object();
    }
    if (dot == std::string::npos) {
      (*node)[key] = value;
      return;
    }
    node = &(*node)[key];
    start = dot + 1;
  }
}

RunConfig parse_config_document(const Json& doc, const std::vector<std::string>& overrides) {
  if (!doc.is_object()) throw ConfigError("configuration must be a JSON object");
  Json merged;
  if (doc.contains("preset")) {
    if (!doc["preset"].is_string()) throw ConfigError("preset: expected a string");
    merged = preset_document(doc["preset"].get<std::string>());
    merged.merge_patch(doc);
  } else {
    std::vector<std::string> missing;
    for (const char* key : {"model", "initial", "truncation"})
      if (!doc.contains(key)) missing.emplace_back(key);
    if (!missing.empty()) {
      std::string list;
      for (const auto& k : missing) list += (list.empty() ? "" : ", ") + k;
      throw ConfigError("missing required fields: " + list + " (or name a preset)");
    }
    merged = doc;
  }
  for (const auto& o : overrides) apply_override(merged, o);
  return parse_resolved(merged);
}

RunConfig parse_config(std::string_view text, const std::vector<std::string>& overrides) {
  Json doc;
  try {
    doc = Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    throw ConfigError(std::string("configuration is not valid JSON: ") + e.what());
  }
  return parse_config_document(doc, overrides);
}

}  // namespace hqs

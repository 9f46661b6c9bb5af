#include <doctest.h>

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include "hqs/config.hpp"
#include "hqs/error.hpp"
#include "hqs/output.hpp"

using namespace hqs;

namespace {

std::string error_of(const std::string& text, const std::vector<std::string>& overrides = {}) {
  try {
    parse_config(text, overrides);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

bool contains(const std::string& haystack, const std::string& needle) {
  return haystack.find(needle) != std::string::npos;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

double parse_double(const std::string& s) {
  double v = 0.0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  REQUIRE(r.ec == std::errc{});
  REQUIRE(r.ptr == s.data() + s.size());
  return v;
}

std::filesystem::path scratch(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("hqs_test_config_" + name);
  std::filesystem::remove_all(p);
  return p;
}

}  // namespace

TEST_CASE("minimal fig2 document expands to the full parameter set") {
  const auto c = parse_config(R"({"preset": "fig2"})");
  CHECK(c.preset == "fig2");
  CHECK(c.model.w_q == 1.0);
  CHECK(c.model.g_qm == 0.05);
  CHECK(c.model.detuning == 0.0);
  CHECK(c.model.drive == 0.3);
  CHECK(c.model.g_mc == 2.0);
  CHECK(c.model.tau_c == std::numbers::pi);
  CHECK(c.model.n_qubits == 2);
  CHECK(c.initial.qubit_kind == QubitPreparation::TwoQubitPhase);
  CHECK(c.initial.theta == 0.0);
  CHECK(c.initial.alpha_cav == cplx{1.0, 0.0});
  CHECK(c.initial.alpha_mech == cplx{0.0, 0.0});
  CHECK(c.trajectory.steps > 0);
  CHECK(!c.sweep.has_value());
}

TEST_CASE("every preset parses, validates and round-trips") {
  for (const auto& name : preset_names()) {
    CAPTURE(name);
    const auto c = parse_config_document(Json{{"preset", name}});
    CHECK_NOTHROW(c.validate());
    CHECK(parse_config_document(to_json(c)) == c);
    CHECK(parse_config(to_json(c).dump()) == c);
    if (c.sweep) CHECK_NOTHROW(c.sweep_spec().validate());
  }
  CHECK(parse_config(R"({"preset": "fig4"})").initial.theta == std::numbers::pi);
  CHECK(parse_config(R"({"preset": "fig4"})").model.drive == 0.8);
  CHECK(parse_config(R"({"preset": "fig3"})").model.drive == 0.5);
  CHECK(parse_config(R"({"preset": "fig5b"})").model.n_qubits == 1);
  CHECK(parse_config(R"({"preset": "fig5b_text"})").model.n_qubits == 2);
}

TEST_CASE("empty document lists the required fields") {
  const auto e = error_of("{}");
  CHECK(contains(e, "model"));
  CHECK(contains(e, "initial"));
  CHECK(contains(e, "truncation"));
}

TEST_CASE("unknown keys are reported with their path") {
  CHECK(contains(error_of(R"({"preset": "fig2", "model": {"g_qmm": 1}})"), "model.g_qmm"));
  CHECK(contains(error_of(R"({"preset": "fig2", "colour": 1})"), "colour"));
  CHECK(contains(error_of(R"({"preset": "fig5a", "sweep": {"axis1": {"feild": "theta"}}})"), "sweep.axis1.feild"));
}

TEST_CASE("type and physical validation errors") {
  CHECK(contains(error_of(R"({"preset": "fig2", "model": {"G_mc": "two"}})"), "model.G_mc"));
  CHECK(!error_of(R"({"preset": "fig2", "truncation": {"dim_mech": -3}})").empty());
  CHECK(!error_of(R"({"preset": "fig2", "model": {"n_qubits": 0}})").empty());
  CHECK(!error_of(R"({"preset": "fig2", "analysis": {"grid_points": 400}})").empty());
  CHECK(!error_of(R"({"preset": "fig2", "propagator": {"backend": "magic"}})").empty());
  CHECK(!error_of(R"({"preset": "nope"})").empty());
  CHECK(!error_of("not json").empty());
}

TEST_CASE("full document without a preset") {
  const std::string doc = R"({
    "model": {"w_q": 1.0, "G_qm": 0.1, "G_mc": 1.5, "D": -0.5, "E0": 0.2, "tau_c": "inf", "n_qubits": 1},
    "initial": {"qubits": "single_superposition", "alpha_cav": [0.5, -0.25]},
    "truncation": {"dim_mech": 20, "dim_cav": 10}
  })";
  const auto c = parse_config(doc);
  CHECK(c.model.tau_c == std::numeric_limits<double>::infinity());
  CHECK(c.model.detuning == -0.5);
  CHECK(c.initial.alpha_cav == cplx{0.5, -0.25});
  CHECK(c.dim_mech == 20);
  CHECK(c.dim_cav == 10);
  CHECK(parse_config_document(to_json(c)) == c);
  CHECK(to_json(c)["model"]["tau_c"] == "inf");
}

TEST_CASE("overrides apply after preset expansion") {
  const auto c = parse_config(R"({"preset": "fig2"})", {"model.G_mc=1.5", "truncation.dim_mech=64",
                                                        "propagator.backend=dense_eigen", "output_dir=elsewhere"});
  CHECK(c.model.g_mc == 1.5);
  CHECK(c.dim_mech == 64);
  CHECK(c.propagator.backend == Backend::DenseEigen);
  CHECK(c.output_dir == "elsewhere");
  CHECK(c.model.drive == 0.3);
  // user document keys sit between the preset and the overrides
  const auto d = parse_config(R"({"preset": "fig2", "model": {"G_mc": 1.0}})", {"model.E0=0.4"});
  CHECK(d.model.g_mc == 1.0);
  CHECK(d.model.drive == 0.4);
  CHECK(!error_of(R"({"preset": "fig2"})", {"model.G_mc"}).empty());
  CHECK(contains(error_of(R"({"preset": "fig2"})", {"model.bogus=1"}), "model.bogus"));
}

TEST_CASE("snapshot labels") {
  CHECK(snapshot_label(std::numbers::pi) == "3.1416");
  CHECK(snapshot_label(std::numbers::pi / 3) == "1.0472");
  CHECK(snapshot_label(0.0) == "0.0000");
}

TEST_CASE("shortest round-trip formatting") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1e3, 1e3);
  for (int k = 0; k < 2000; ++k) {
    const double v = k % 3 == 0 ? std::ldexp(u(rng), -k % 600) : u(rng);
    CHECK(parse_double(format_double(v)) == v);
  }
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(std::nan("")) == "nan");
}

TEST_CASE("written files re-parse to the in-memory values") {
  const auto dir = scratch("files");
  ensure_directory(dir);

  std::vector<double> probs{0.5, 0.25, 1.0 / 3.0, 1e-300, 0.0};
  write_fock_csv(dir / "fock.csv", probs);
  const std::string fock = slurp(dir / "fock.csv");
  CHECK(fock.find('\r') == std::string::npos);
  std::istringstream in(fock);
  std::string line;
  std::getline(in, line);
  CHECK(line == "n,P");
  for (std::size_t n = 0; n < probs.size(); ++n) {
    REQUIRE(std::getline(in, line));
    const auto comma = line.find(',');
    CHECK(line.substr(0, comma) == std::to_string(n));
    CHECK(parse_double(line.substr(comma + 1)) == probs[n]);
  }
  CHECK(!std::getline(in, line));

  WignerGrid g;
  g.x = {-1.0, 0.0, 1.0};
  g.p = {-1.0, 0.0, 1.0};
  g.dx = g.dp = 1.0;
  for (int k = 0; k < 9; ++k) g.values.push_back(std::sin(0.7 * k) / 7.0);
  write_wigner_csv(dir / "w.csv", g);
  std::istringstream win(slurp(dir / "w.csv"));
  std::getline(win, line);
  CHECK(line == "x,p,W");
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      REQUIRE(std::getline(win, line));
      const auto a = line.find(',');
      const auto b = line.find(',', a + 1);
      CHECK(parse_double(line.substr(0, a)) == g.x[i]);
      CHECK(parse_double(line.substr(a + 1, b - a - 1)) == g.p[j]);
      CHECK(parse_double(line.substr(b + 1)) == g.at(i, j));
    }
  }

  const auto c = parse_config(R"({"preset": "fig6b"})");
  write_json(dir / "meta.json", to_json(c));
  CHECK(parse_config(slurp(dir / "meta.json")) == c);
  std::filesystem::remove_all(dir);
}

TEST_CASE("I/O failures raise IoError") {
  const auto dir = scratch("io");
  ensure_directory(dir);
  std::ofstream(dir / "file") << "x";
  CHECK_THROWS_AS(ensure_directory(dir / "file"), IoError);
  CHECK_THROWS_AS(write_fock_csv(dir / "missing" / "deeper" / "fock.csv", {1.0}), IoError);
  std::filesystem::remove_all(dir);
}

// Command-line front end: runs a preset or a JSON configuration and writes
// the CSV/JSON outputs.
//
// Exit codes: 0 success, 2 configuration error, 3 convergence failure,
// 4 I/O failure, 1 anything else.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hqs/config.hpp"
#include "hqs/error.hpp"
#include "hqs/runner.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitConvergence = 3;
constexpr int kExitIo = 4;

int env_threads() {
  const char* v = std::getenv("HQS_THREADS");
  if (v == nullptr || *v == '\0') return 1;
  char* end = nullptr;
  const long n = std::strtol(v, &end, 10);
  if (*end != '\0' || n < 1 || n > 4096) throw hqs::ConfigError("HQS_THREADS must be a positive integer");
  return static_cast<int>(n);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw hqs::IoError("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Closed-system simulator for qubits coupled to a mechanical mode and a driven cavity"};
  std::string preset;
  std::string config_path;
  std::string out_dir;
  std::vector<std::string> overrides;
  int threads = 0;
  bool list = false;
  app.add_option("--preset", preset, "named experiment (see --list-presets)");
  app.add_option("--config", config_path, "JSON configuration file");
  app.add_option("--out", out_dir, "output directory (default: output_dir of the configuration)");
  app.add_option("--override", overrides, "dotted key=value applied after preset expansion (repeatable)")
      ->allow_extra_args(false);
  app.add_option("--threads", threads, "worker threads (default: HQS_THREADS or 1)")->check(CLI::PositiveNumber);
  app.add_flag("--list-presets", list, "print the preset names and exit");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (list) {
      for (const auto& n : hqs::preset_names()) std::cout << n << '\n';
      return 0;
    }
    if (preset.empty() == config_path.empty()) throw hqs::ConfigError("give exactly one of --preset or --config");
    if (threads == 0) threads = env_threads();

    hqs::Json doc;
    if (!preset.empty()) {
      doc = hqs::Json{{"preset", preset}};
    } else {
      try {
        doc = hqs::Json::parse(read_file(config_path));
      } catch (const hqs::Json::parse_error& e) {
        throw hqs::ConfigError(config_path + ": " + e.what());
      }
    }
    const hqs::RunConfig config = hqs::parse_config_document(doc, overrides);
    const auto outcome = hqs::run(config, threads, out_dir);
    for (const auto& f : outcome.files) std::cout << f.string() << '\n';
    return 0;
  } catch (const hqs::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const hqs::ConvergenceError& e) {
    std::cerr << "convergence failure: " << e.what() << '\n';
    return kExitConvergence;
  } catch (const hqs::IoError& e) {
    std::cerr << "I/O failure: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}

#include "hqs/output.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "hqs/error.hpp"

namespace hqs {

namespace {

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.close();
  if (!out) throw IoError("failed to write " + path.string());
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

void ensure_directory(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir))
    throw IoError("cannot create output directory " + dir.string() + (ec ? ": " + ec.message() : ""));
}

void write_trajectory_csv(const std::filesystem::path& path, const TrajectoryRecord& record) {
  std::string s = "tau,qubit_pop,phonon_pop,photon_pop\n";
  for (const auto& smp : record.samples) {
    s += format_double(smp.tau) + ',' + format_double(smp.qubit_pop) + ',' + format_double(smp.phonon_pop) + ',' +
         format_double(smp.photon_pop) + '\n';
  }
  write_file(path, s);
}

void write_wigner_csv(const std::filesystem::path& path, const WignerGrid& grid) {
  std::string s = "x,p,W\n";
  s.reserve(grid.values.size() * 64);
  std::vector<std::string> ps(grid.p.size());
  for (std::size_t j = 0; j < grid.p.size(); ++j) ps[j] = format_double(grid.p[j]);
  for (std::size_t i = 0; i < grid.x.size(); ++i) {
    const std::string xs = format_double(grid.x[i]);
    for (std::size_t j = 0; j < grid.p.size(); ++j) {
      s += xs;
      s += ',';
      s += ps[j];
      s += ',';
      s += format_double(grid.at(i, j));
      s += '\n';
    }
  }
  write_file(path, s);
}

void write_fock_csv(const std::filesystem::path& path, const std::vector<double>& probabilities) {
  std::string s = "n,P\n";
  for (std::size_t n = 0; n < probabilities.size(); ++n) s += std::to_string(n) + ',' + format_double(probabilities[n]) + '\n';
  write_file(path, s);
}

void write_sweep_csv(const std::filesystem::path& path, const SweepResult& result) {
  std::string s = "axis1,axis2,value,flag\n";
  const std::size_t n2 = result.axis2.size();
  for (std::size_t i = 0; i < result.axis1.size(); ++i) {
    for (std::size_t j = 0; j < n2; ++j) {
      const std::size_t k = i * n2 + j;
      s += format_double(result.axis1[i]) + ',' + format_double(result.axis2[j]) + ',' +
           format_double(result.values[k]) + ',' + std::to_string(static_cast<int>(result.flags[k])) + '\n';
    }
  }
  write_file(path, s);
}

void write_json(const std::filesystem::path& path, const Json& doc) { write_file(path, doc.dump(2) + '\n'); }

}  // namespace hqs

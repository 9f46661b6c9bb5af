#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "hqs/analysis.hpp"
#include "hqs/config.hpp"
#include "hqs/propagator.hpp"
#include "hqs/sweep.hpp"

namespace hqs {

/// Shortest decimal that parses back to the same double; "nan", "inf" and
/// "-inf" for non-finite values.
std::string format_double(double v);

/// Files are UTF-8 with a header row and LF line endings. All writers throw
/// IoError when the file cannot be written.
void write_trajectory_csv(const std::filesystem::path& path, const TrajectoryRecord& record);
void write_wigner_csv(const std::filesystem::path& path, const WignerGrid& grid);
void write_fock_csv(const std::filesystem::path& path, const std::vector<double>& probabilities);
void write_sweep_csv(const std::filesystem::path& path, const SweepResult& result);
void write_json(const std::filesystem::path& path, const Json& doc);

/// Creates the directory (and parents) or throws IoError.
void ensure_directory(const std::filesystem::path& dir);

}  // namespace hqs

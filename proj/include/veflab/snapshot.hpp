#pragma once

#include <string>
#include <vector>

#include "veflab/solver.hpp"
#include "veflab/state.hpp"

namespace veflab {

/// State container, format "VEFSNAP1": one JSON header line
/// {dim, n, length, time, mu, fields:[{name,rank},...]} followed by the raw
/// little-endian complex payload of each field (components outer, modes
/// row-major inner, re then im per coefficient). Doubles round-trip exactly.
void save_state(const State& s, const std::string& path);
State load_state(const std::string& path);

/// write-temp-rename; directories are created as needed
void write_file_atomic(const std::string& path, const std::string& content);

std::string format_csv_row(const std::vector<double>& values);

/// Persisted trajectory: manifest.json plus one snapshot file per cadence
/// point under <dir>/snapshots/.
void save_trajectory(const Trajectory& traj, const std::string& dir,
                     const std::string& manifest_json);
Trajectory load_trajectory(const std::string& dir);
std::string load_manifest(const std::string& dir);

/// FNV-1a 64-bit content hash, hex digest (used as the config hash).
std::string content_hash(const std::string& content);

}  // namespace veflab

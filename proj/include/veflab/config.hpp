#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "veflab/initial_data.hpp"

namespace veflab {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Minimal TOML value: bool, number, string, or number array.
struct TomlValue {
    enum class Type { kBool, kNumber, kString, kArray } type = Type::kNumber;
    bool b = false;
    double num = 0.0;
    bool is_integer = false;
    std::string str;
    std::vector<double> array;
};

/// section -> key -> value; top-level keys live under "".
using TomlTable = std::map<std::string, std::map<std::string, TomlValue>>;

/// Parser for the TOML subset used by the presets: [sections],
/// key = bool | number | "string" | [numbers], full-line and trailing
/// comments. Malformed input raises ConfigError.
TomlTable parse_toml(const std::string& text);

struct RunConfig {
    std::string experiment = "simulate";

    int dim = 2;
    int n = 64;
    double length = 2.0 * 3.14159265358979323846;

    double mu = 1.0;

    DataRecipe recipe;

    double dt = 0.01;
    double t_final = 1.0;
    int snapshot_every = 1;
    double c_cfl = 0.5;
    bool linear_only = false;

    std::vector<int> alphas{0, 1};
    double t_lo = 1e2;
    double t_hi = 1e4;
    int num_times = 25;
    double window_lo = 1e2;
    double window_hi = 1e4;
    double rho = 0.2;
    double q_radius = 8.0;
    double q_rel_tol = 1e-9;
    bool certificate = false;

    std::string ws_mode = "refine";  // refine | perturb
    double perturb_eps = 1e-4;
    double tol_energy = 0.05;
    double envelope_slack = 0.1;

    double kappa_max = 0.1;
    double smallness = 0.1;
    bool monitors = true;

    std::string out_dir = "out";
    int threads = 1;
};

/// Strict schema validation: unknown sections/keys or wrong types raise
/// ConfigError.
RunConfig config_from_toml(const TomlTable& table);
RunConfig load_config(const std::string& path);

/// Canonical JSON echo (doubles round-trip exactly) and its reconstruction;
/// serialize(deserialize(x)) == x.
std::string config_to_json(const RunConfig& cfg);
RunConfig config_from_json(const std::string& text);

}  // namespace veflab

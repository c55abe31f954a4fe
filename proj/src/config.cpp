#include "veflab/config.hpp"

#include <cctype>
#include <fstream>
#include <functional>
#include <sstream>

#include "json.hpp"

namespace veflab {

using nlohmann::json;

namespace {

std::string strip(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos)
        return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

// removes a trailing comment that is not inside a string literal
std::string strip_comment(const std::string& s) {
    bool in_str = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '"')
            in_str = !in_str;
        else if (s[i] == '#' && !in_str)
            return s.substr(0, i);
    }
    return s;
}

TomlValue parse_scalar(const std::string& tok, int lineno) {
    TomlValue v;
    if (tok == "true" || tok == "false") {
        v.type = TomlValue::Type::kBool;
        v.b = tok == "true";
        return v;
    }
    if (tok.size() >= 2 && tok.front() == '"' && tok.back() == '"') {
        v.type = TomlValue::Type::kString;
        v.str = tok.substr(1, tok.size() - 2);
        return v;
    }
    try {
        std::size_t used = 0;
        v.num = std::stod(tok, &used);
        if (used != tok.size())
            throw std::invalid_argument(tok);
        v.type = TomlValue::Type::kNumber;
        v.is_integer = tok.find_first_of(".eE") == std::string::npos;
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config line " + std::to_string(lineno) + ": cannot parse value '" +
                          tok + "'");
    }
}

}  // namespace

TomlTable parse_toml(const std::string& text) {
    TomlTable table;
    std::string section;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = strip(strip_comment(line));
        if (line.empty())
            continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("config line " + std::to_string(lineno) +
                                  ": malformed section header");
            section = strip(line.substr(1, line.size() - 2));
            if (section.empty())
                throw ConfigError("config line " + std::to_string(lineno) + ": empty section");
            table[section];
            continue;
        }
        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
        std::string key = strip(line.substr(0, eq));
        std::string val = strip(line.substr(eq + 1));
        if (key.empty() || val.empty())
            throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
        if (val.front() == '[') {
            if (val.back() != ']')
                throw ConfigError("config line " + std::to_string(lineno) +
                                  ": unterminated array");
            TomlValue v;
            v.type = TomlValue::Type::kArray;
            std::string body = val.substr(1, val.size() - 2);
            std::istringstream items(body);
            std::string item;
            while (std::getline(items, item, ',')) {
                item = strip(item);
                if (item.empty())
                    continue;
                TomlValue s = parse_scalar(item, lineno);
                if (s.type != TomlValue::Type::kNumber)
                    throw ConfigError("config line " + std::to_string(lineno) +
                                      ": arrays hold numbers only");
                v.array.push_back(s.num);
            }
            table[section][key] = v;
        } else {
            table[section][key] = parse_scalar(val, lineno);
        }
    }
    return table;
}

namespace {

struct Schema {
    RunConfig* cfg;
    const TomlTable* table;
    std::map<std::string, std::map<std::string, bool>> seen;

    void mark(const std::string& sec, const std::string& key) { seen[sec][key] = true; }

    const TomlValue* find(const std::string& sec, const std::string& key) {
        auto s = table->find(sec);
        if (s == table->end())
            return nullptr;
        auto k = s->second.find(key);
        if (k == s->second.end())
            return nullptr;
        return &k->second;
    }

    void number(const std::string& sec, const std::string& key, double& dst) {
        mark(sec, key);
        if (const TomlValue* v = find(sec, key)) {
            if (v->type != TomlValue::Type::kNumber)
                throw ConfigError(sec + "." + key + " must be a number");
            dst = v->num;
        }
    }
    void integer(const std::string& sec, const std::string& key, int& dst) {
        mark(sec, key);
        if (const TomlValue* v = find(sec, key)) {
            if (v->type != TomlValue::Type::kNumber || !v->is_integer)
                throw ConfigError(sec + "." + key + " must be an integer");
            dst = static_cast<int>(v->num);
        }
    }
    void u64(const std::string& sec, const std::string& key, std::uint64_t& dst) {
        mark(sec, key);
        if (const TomlValue* v = find(sec, key)) {
            if (v->type != TomlValue::Type::kNumber || !v->is_integer || v->num < 0)
                throw ConfigError(sec + "." + key + " must be a nonnegative integer");
            dst = static_cast<std::uint64_t>(v->num);
        }
    }
    void boolean(const std::string& sec, const std::string& key, bool& dst) {
        mark(sec, key);
        if (const TomlValue* v = find(sec, key)) {
            if (v->type != TomlValue::Type::kBool)
                throw ConfigError(sec + "." + key + " must be a boolean");
            dst = v->b;
        }
    }
    void text(const std::string& sec, const std::string& key, std::string& dst) {
        mark(sec, key);
        if (const TomlValue* v = find(sec, key)) {
            if (v->type != TomlValue::Type::kString)
                throw ConfigError(sec + "." + key + " must be a string");
            dst = v->str;
        }
    }
    void int_array(const std::string& sec, const std::string& key, std::vector<int>& dst) {
        mark(sec, key);
        if (const TomlValue* v = find(sec, key)) {
            if (v->type != TomlValue::Type::kArray)
                throw ConfigError(sec + "." + key + " must be an array");
            dst.clear();
            for (double x : v->array)
                dst.push_back(static_cast<int>(x));
        }
    }

    void reject_unknown() const {
        for (const auto& [sec, keys] : *table) {
            auto s = seen.find(sec);
            if (s == seen.end())
                throw ConfigError("unknown config section [" + sec + "]");
            for (const auto& [key, _] : keys)
                if (!s->second.count(key))
                    throw ConfigError("unknown config key " + sec + "." + key);
        }
    }
};

}  // namespace

RunConfig config_from_toml(const TomlTable& table) {
    RunConfig cfg;
    Schema sc{&cfg, &table, {}};

    sc.text("run", "experiment", cfg.experiment);

    sc.integer("grid", "dim", cfg.dim);
    sc.integer("grid", "n", cfg.n);
    sc.number("grid", "length", cfg.length);

    sc.number("physics", "mu", cfg.mu);

    std::string kind = "zero_strain";
    switch (cfg.recipe.kind) {
        case DataRecipe::Kind::kZeroStrain: kind = "zero_strain"; break;
        case DataRecipe::Kind::kLagrangianMap: kind = "lagrangian_map"; break;
        case DataRecipe::Kind::kSpectralProfile: kind = "spectral_profile"; break;
    }
    sc.text("data", "kind", kind);
    if (kind == "zero_strain")
        cfg.recipe.kind = DataRecipe::Kind::kZeroStrain;
    else if (kind == "lagrangian_map")
        cfg.recipe.kind = DataRecipe::Kind::kLagrangianMap;
    else if (kind == "spectral_profile")
        cfg.recipe.kind = DataRecipe::Kind::kSpectralProfile;
    else
        throw ConfigError("data.kind must be zero_strain, lagrangian_map or spectral_profile");
    sc.number("data", "delta", cfg.recipe.delta);
    sc.u64("data", "seed", cfg.recipe.seed);
    sc.integer("data", "band", cfg.recipe.band);
    sc.number("data", "flow_time", cfg.recipe.flow_time);
    sc.number("data", "ode_tol", cfg.recipe.ode_tol);
    sc.number("data", "c0", cfg.recipe.c0);
    sc.number("data", "zeta", cfg.recipe.zeta);
    sc.text("data", "shape", cfg.recipe.shape);

    sc.number("stepping", "dt", cfg.dt);
    sc.number("stepping", "t_final", cfg.t_final);
    sc.integer("stepping", "snapshot_every", cfg.snapshot_every);
    sc.number("stepping", "c_cfl", cfg.c_cfl);
    sc.boolean("stepping", "linear_only", cfg.linear_only);

    sc.int_array("decay", "alphas", cfg.alphas);
    sc.number("decay", "t_lo", cfg.t_lo);
    sc.number("decay", "t_hi", cfg.t_hi);
    sc.integer("decay", "num_times", cfg.num_times);
    sc.number("decay", "window_lo", cfg.window_lo);
    sc.number("decay", "window_hi", cfg.window_hi);
    sc.number("decay", "rho", cfg.rho);
    sc.number("decay", "radius", cfg.q_radius);
    sc.number("decay", "rel_tol", cfg.q_rel_tol);
    sc.boolean("decay", "certificate", cfg.certificate);

    sc.text("weak_strong", "mode", cfg.ws_mode);
    sc.number("weak_strong", "perturb_eps", cfg.perturb_eps);
    sc.number("weak_strong", "tol_energy", cfg.tol_energy);
    sc.number("weak_strong", "envelope_slack", cfg.envelope_slack);

    sc.number("invariants", "kappa_max", cfg.kappa_max);
    sc.number("invariants", "smallness", cfg.smallness);
    sc.boolean("invariants", "monitors", cfg.monitors);

    sc.text("output", "dir", cfg.out_dir);
    sc.integer("output", "threads", cfg.threads);

    sc.reject_unknown();

    if (cfg.dim != 2 && cfg.dim != 3)
        throw ConfigError("grid.dim must be 2 or 3");
    if (cfg.n <= 0 || cfg.n % 2)
        throw ConfigError("grid.n must be positive and even");
    if (!(cfg.mu > 0.0))
        throw ConfigError("physics.mu must be positive");
    if (!(cfg.dt > 0.0))
        throw ConfigError("stepping.dt must be positive");
    if (cfg.snapshot_every < 1)
        throw ConfigError("stepping.snapshot_every must be >= 1");
    if (cfg.ws_mode != "refine" && cfg.ws_mode != "perturb")
        throw ConfigError("weak_strong.mode must be refine or perturb");
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return config_from_toml(parse_toml(ss.str()));
}

std::string config_to_json(const RunConfig& c) {
    std::string kind = c.recipe.kind == DataRecipe::Kind::kZeroStrain ? "zero_strain"
                       : c.recipe.kind == DataRecipe::Kind::kLagrangianMap ? "lagrangian_map"
                                                                           : "spectral_profile";
    json j = {
        {"run", {{"experiment", c.experiment}}},
        {"grid", {{"dim", c.dim}, {"n", c.n}, {"length", c.length}}},
        {"physics", {{"mu", c.mu}}},
        {"data",
         {{"kind", kind},
          {"delta", c.recipe.delta},
          {"seed", c.recipe.seed},
          {"band", c.recipe.band},
          {"flow_time", c.recipe.flow_time},
          {"ode_tol", c.recipe.ode_tol},
          {"c0", c.recipe.c0},
          {"zeta", c.recipe.zeta},
          {"shape", c.recipe.shape}}},
        {"stepping",
         {{"dt", c.dt},
          {"t_final", c.t_final},
          {"snapshot_every", c.snapshot_every},
          {"c_cfl", c.c_cfl},
          {"linear_only", c.linear_only}}},
        {"decay",
         {{"alphas", c.alphas},
          {"t_lo", c.t_lo},
          {"t_hi", c.t_hi},
          {"num_times", c.num_times},
          {"window_lo", c.window_lo},
          {"window_hi", c.window_hi},
          {"rho", c.rho},
          {"radius", c.q_radius},
          {"rel_tol", c.q_rel_tol},
          {"certificate", c.certificate}}},
        {"weak_strong",
         {{"mode", c.ws_mode},
          {"perturb_eps", c.perturb_eps},
          {"tol_energy", c.tol_energy},
          {"envelope_slack", c.envelope_slack}}},
        {"invariants",
         {{"kappa_max", c.kappa_max}, {"smallness", c.smallness}, {"monitors", c.monitors}}},
        {"output", {{"dir", c.out_dir}, {"threads", c.threads}}},
    };
    return j.dump(2);
}

RunConfig config_from_json(const std::string& text) {
    json j = json::parse(text);
    RunConfig c;
    c.experiment = j.at("run").at("experiment").get<std::string>();
    c.dim = j.at("grid").at("dim").get<int>();
    c.n = j.at("grid").at("n").get<int>();
    c.length = j.at("grid").at("length").get<double>();
    c.mu = j.at("physics").at("mu").get<double>();
    const auto& d = j.at("data");
    std::string kind = d.at("kind").get<std::string>();
    c.recipe.kind = kind == "zero_strain"      ? DataRecipe::Kind::kZeroStrain
                    : kind == "lagrangian_map" ? DataRecipe::Kind::kLagrangianMap
                                               : DataRecipe::Kind::kSpectralProfile;
    c.recipe.delta = d.at("delta").get<double>();
    c.recipe.seed = d.at("seed").get<std::uint64_t>();
    c.recipe.band = d.at("band").get<int>();
    c.recipe.flow_time = d.at("flow_time").get<double>();
    c.recipe.ode_tol = d.at("ode_tol").get<double>();
    c.recipe.c0 = d.at("c0").get<double>();
    c.recipe.zeta = d.at("zeta").get<double>();
    c.recipe.shape = d.at("shape").get<std::string>();
    const auto& st = j.at("stepping");
    c.dt = st.at("dt").get<double>();
    c.t_final = st.at("t_final").get<double>();
    c.snapshot_every = st.at("snapshot_every").get<int>();
    c.c_cfl = st.at("c_cfl").get<double>();
    c.linear_only = st.at("linear_only").get<bool>();
    const auto& de = j.at("decay");
    c.alphas = de.at("alphas").get<std::vector<int>>();
    c.t_lo = de.at("t_lo").get<double>();
    c.t_hi = de.at("t_hi").get<double>();
    c.num_times = de.at("num_times").get<int>();
    c.window_lo = de.at("window_lo").get<double>();
    c.window_hi = de.at("window_hi").get<double>();
    c.rho = de.at("rho").get<double>();
    c.q_radius = de.at("radius").get<double>();
    c.q_rel_tol = de.at("rel_tol").get<double>();
    c.certificate = de.at("certificate").get<bool>();
    const auto& ws = j.at("weak_strong");
    c.ws_mode = ws.at("mode").get<std::string>();
    c.perturb_eps = ws.at("perturb_eps").get<double>();
    c.tol_energy = ws.at("tol_energy").get<double>();
    c.envelope_slack = ws.at("envelope_slack").get<double>();
    const auto& iv = j.at("invariants");
    c.kappa_max = iv.at("kappa_max").get<double>();
    c.smallness = iv.at("smallness").get<double>();
    c.monitors = iv.at("monitors").get<bool>();
    c.out_dir = j.at("output").at("dir").get<std::string>();
    c.threads = j.at("output").at("threads").get<int>();
    return c;
}

}  // namespace veflab

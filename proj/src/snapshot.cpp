#include "veflab/snapshot.hpp"

#include <bit>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace veflab {

namespace fs = std::filesystem;
using nlohmann::json;

static_assert(std::endian::native == std::endian::little,
              "snapshot payload is defined little-endian");

namespace {

void append_field(std::string& out, const SpectralField& f) {
    const char* raw = reinterpret_cast<const char*>(f.data().data());
    out.append(raw, f.data().size() * sizeof(Complex));
}

void read_field(std::istream& in, SpectralField& f) {
    in.read(reinterpret_cast<char*>(f.data().data()),
            static_cast<std::streamsize>(f.data().size() * sizeof(Complex)));
    if (!in)
        throw std::runtime_error("snapshot payload truncated");
}

}  // namespace

void write_file_atomic(const std::string& path, const std::string& content) {
    fs::path p(path);
    if (p.has_parent_path())
        fs::create_directories(p.parent_path());
    fs::path tmp = p;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out)
            throw std::runtime_error("short write to " + tmp.string());
    }
    fs::rename(tmp, p);
}

void save_state(const State& s, const std::string& path) {
    const Grid& g = s.u.grid();
    json header = {
        {"format", "VEFSNAP1"},
        {"dim", g.dim()},
        {"n", g.n()},
        {"length", g.length()},
        {"time", s.t},
        {"mu", s.mu},
        {"fields", json::array({{{"name", "u"}, {"rank", 1}}, {{"name", "E"}, {"rank", 2}}})},
    };
    std::string out = "VEFSNAP1\n";
    out += header.dump();
    out += '\n';
    append_field(out, s.u);
    append_field(out, s.E);
    write_file_atomic(path, out);
}

State load_state(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open snapshot " + path);
    std::string magic, header_line;
    std::getline(in, magic);
    if (magic != "VEFSNAP1")
        throw std::runtime_error(path + " is not a VEFSNAP1 container");
    std::getline(in, header_line);
    json header = json::parse(header_line);
    Grid g(header.at("dim").get<int>(), header.at("n").get<int>(),
           header.at("length").get<double>());
    State s{SpectralField(g, 1), SpectralField(g, 2), header.at("time").get<double>(),
            header.at("mu").get<double>()};
    read_field(in, s.u);
    read_field(in, s.E);
    return s;
}

std::string format_csv_row(const std::vector<double>& values) {
    std::ostringstream os;
    os.precision(17);
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i)
            os << ',';
        os << values[i];
    }
    os << '\n';
    return os.str();
}

void save_trajectory(const Trajectory& traj, const std::string& dir,
                     const std::string& manifest_json) {
    fs::create_directories(fs::path(dir) / "snapshots");
    json manifest = json::parse(manifest_json);
    json files = json::array();
    for (std::size_t k = 0; k < traj.snapshots.size(); ++k) {
        char name[64];
        std::snprintf(name, sizeof(name), "snapshots/snap_%06zu.vfs", k);
        save_state(traj.snapshots[k], (fs::path(dir) / name).string());
        files.push_back(name);
    }
    manifest["snapshots"] = files;
    manifest["dt"] = traj.dt;
    write_file_atomic((fs::path(dir) / "manifest.json").string(), manifest.dump(2) + "\n");
}

Trajectory load_trajectory(const std::string& dir) {
    json manifest = json::parse(load_manifest(dir));
    Trajectory t;
    t.dt = manifest.value("dt", 0.0);
    for (const auto& name : manifest.at("snapshots"))
        t.snapshots.push_back(load_state((fs::path(dir) / name.get<std::string>()).string()));
    return t;
}

std::string load_manifest(const std::string& dir) {
    std::ifstream in(fs::path(dir) / "manifest.json");
    if (!in)
        throw std::runtime_error("no manifest.json under " + dir);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string content_hash(const std::string& content) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : content) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace veflab

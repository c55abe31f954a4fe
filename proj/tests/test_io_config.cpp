#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <unistd.h>

#include "test_helpers.hpp"
#include "veflab/config.hpp"
#include "veflab/initial_data.hpp"
#include "veflab/snapshot.hpp"
#include "veflab/solver.hpp"

using namespace veflab;
using namespace veflab::test;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("veflab_test_" + std::to_string(::getpid()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("state snapshots round-trip bit-exactly") {
    Grid g(2, 32, 2.0 * M_PI);
    auto data = make_zero_strain(1e-2, 5, g);
    State s = data.state;
    s.t = 0.625;
    s.mu = 1.5;
    s.E = random_field(g, 2, 4, 17);

    TempDir tmp;
    std::string path = (tmp.path / "snap.vfs").string();
    save_state(s, path);
    State back = load_state(path);
    CHECK(back.t == s.t);
    CHECK(back.mu == s.mu);
    CHECK(back.u.grid() == s.u.grid());
    CHECK(back.u.data() == s.u.data());
    CHECK(back.E.data() == s.E.data());
}

TEST_CASE("trajectory persistence and reload") {
    Grid g(2, 16, 2.0 * M_PI);
    auto data = make_zero_strain(1e-2, 9, g);
    RunOptions opts;
    opts.snapshot_every = 2;
    Trajectory t = run(data.state, 0.25, 1.0 / 16.0, opts);
    TempDir tmp;
    std::string dir = (tmp.path / "traj").string();
    save_trajectory(t, dir, R"({"note":"test"})");
    Trajectory back = load_trajectory(dir);
    REQUIRE(back.snapshots.size() == t.snapshots.size());
    CHECK(back.dt == t.dt);
    for (std::size_t k = 0; k < t.snapshots.size(); ++k) {
        CHECK(back.snapshots[k].t == t.snapshots[k].t);
        CHECK(back.snapshots[k].u.data() == t.snapshots[k].u.data());
        CHECK(back.snapshots[k].E.data() == t.snapshots[k].E.data());
    }
}

TEST_CASE("toml parsing") {
    const char* text = R"(
# preset
[run]
experiment = "linear-decay"   # trailing comment

[grid]
dim = 3
n = 48
length = 6.283185307179586

[data]
kind = "spectral_profile"
delta = 1e-2
seed = 4242
c0 = 0.1
zeta = 0.5

[decay]
alphas = [0, 1]
t_lo = 1e2
certificate = true
)";
    TomlTable t = parse_toml(text);
    RunConfig cfg = config_from_toml(t);
    CHECK(cfg.experiment == "linear-decay");
    CHECK(cfg.dim == 3);
    CHECK(cfg.n == 48);
    CHECK(cfg.recipe.kind == DataRecipe::Kind::kSpectralProfile);
    CHECK(cfg.recipe.seed == 4242);
    CHECK(cfg.recipe.c0 == 0.1);
    CHECK(cfg.alphas == std::vector<int>{0, 1});
    CHECK(cfg.certificate);
    CHECK(cfg.t_lo == 100.0);
    CHECK(cfg.t_hi == 1e4);  // default untouched

    SUBCASE("unknown keys are rejected") {
        CHECK_THROWS_AS(config_from_toml(parse_toml("[grid]\nwidth = 3\n")), ConfigError);
        CHECK_THROWS_AS(config_from_toml(parse_toml("[mystery]\nx = 1\n")), ConfigError);
    }
    SUBCASE("type errors are rejected") {
        CHECK_THROWS_AS(config_from_toml(parse_toml("[grid]\nn = \"many\"\n")), ConfigError);
        CHECK_THROWS_AS(config_from_toml(parse_toml("[grid]\nn = 3.5\n")), ConfigError);
    }
    SUBCASE("malformed lines are rejected") {
        CHECK_THROWS_AS(parse_toml("[grid\nn = 4\n"), ConfigError);
        CHECK_THROWS_AS(parse_toml("just words\n"), ConfigError);
    }
    SUBCASE("semantic validation") {
        CHECK_THROWS_AS(config_from_toml(parse_toml("[grid]\ndim = 4\n")), ConfigError);
        CHECK_THROWS_AS(config_from_toml(parse_toml("[stepping]\ndt = -0.5\n")), ConfigError);
    }
}

TEST_CASE("config serialization round-trips losslessly") {
    RunConfig cfg;
    cfg.experiment = "weak-strong";
    cfg.dim = 3;
    cfg.n = 24;
    cfg.length = 5.431;
    cfg.mu = 0.77;
    cfg.recipe.kind = DataRecipe::Kind::kLagrangianMap;
    cfg.recipe.delta = 3.3e-3;
    cfg.recipe.seed = 99;
    cfg.dt = 1.0 / 96.0;
    cfg.alphas = {0, 1, 2};
    cfg.q_rel_tol = 2.5e-11;
    std::string once = config_to_json(cfg);
    RunConfig back = config_from_json(once);
    std::string twice = config_to_json(back);
    CHECK(once == twice);
    CHECK(back.length == cfg.length);
    CHECK(back.q_rel_tol == cfg.q_rel_tol);
    CHECK(content_hash(once) == content_hash(twice));
    CHECK(content_hash(once) != content_hash(once + " "));
}

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "veflab/config.hpp"
#include "veflab/decay.hpp"
#include "veflab/initial_data.hpp"
#include "veflab/invariants.hpp"
#include "veflab/operators.hpp"
#include "veflab/rng.hpp"
#include "veflab/semigroup.hpp"
#include "veflab/snapshot.hpp"
#include "veflab/solver.hpp"
#include "veflab/weak_strong.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace veflab;

namespace {

constexpr const char* kVersion = "veflab 0.1.0";

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitCertificate = 3;
constexpr int kExitBlowup = 4;

struct CommonFlags {
    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int threads = 0;
};

RunConfig effective_config(const CommonFlags& flags) {
    RunConfig cfg = load_config(flags.config_path);
    if (!flags.out_dir.empty())
        cfg.out_dir = flags.out_dir;
    if (flags.seed_set)
        cfg.recipe.seed = flags.seed;
    if (flags.threads > 0)
        cfg.threads = flags.threads;
    return cfg;
}

json base_manifest(const RunConfig& cfg, const std::string& command) {
    std::string echo = config_to_json(cfg);
    return json{{"code_version", kVersion},
                {"command", command},
                {"config", json::parse(echo)},
                {"config_hash", content_hash(echo)},
                {"seed", cfg.recipe.seed},
                {"rng", CounterRng::kName},
                {"threads", cfg.threads}};
}

void write_manifest(const json& manifest, const std::string& dir) {
    write_file_atomic((fs::path(dir) / "manifest.json").string(), manifest.dump(2) + "\n");
}

SpectralProfile profile_from(const RunConfig& cfg) {
    return make_profile(cfg.recipe.delta, cfg.recipe.c0, cfg.recipe.zeta, cfg.recipe.shape);
}

int cmd_linear_decay(const RunConfig& cfg) {
    SpectralProfile profile = profile_from(cfg);
    std::vector<double> times = logspace(cfg.t_lo, cfg.t_hi, cfg.num_times);
    RadialQuadratureParams qp;
    qp.radius = cfg.q_radius;
    qp.rel_tol = cfg.q_rel_tol;

    std::string csv = "t,norm,alpha,d,mu\n";
    json slopes = json::array();
    for (int alpha : cfg.alphas) {
        DecaySeries series = decay_series(profile, times, alpha, cfg.mu, cfg.dim, qp, cfg.threads);
        for (std::size_t i = 0; i < series.times.size(); ++i)
            csv += format_csv_row({series.times[i], series.norms[i], double(alpha),
                                   double(cfg.dim), cfg.mu});
        try {
            SlopeFit fit = fit_decay_exponent(series, cfg.window_lo, cfg.window_hi);
            slopes.push_back({{"alpha", alpha},
                              {"slope", fit.slope},
                              {"stderr", fit.stderr_slope},
                              {"samples", fit.samples},
                              {"window", {cfg.window_lo, cfg.window_hi}}});
        } catch (const std::invalid_argument& e) {
            // norms can vanish in the window (fast-decaying profiles); the
            // certificate below is still meaningful
            slopes.push_back({{"alpha", alpha}, {"error", e.what()}});
        }
    }
    write_file_atomic((fs::path(cfg.out_dir) / "decay.csv").string(), csv);
    write_file_atomic((fs::path(cfg.out_dir) / "slopes.json").string(), slopes.dump(2) + "\n");

    json manifest = base_manifest(cfg, "linear-decay");
    manifest["artifacts"] = {"decay.csv", "slopes.json"};

    int rc = kExitOk;
    if (cfg.certificate) {
        LowerBoundReport rep = lower_bound_certificate(profile, times, cfg.mu, cfg.dim, cfg.rho, qp);
        json cert = {{"rho", rep.rho},     {"t0", rep.t0},       {"T", rep.t_end},
                     {"min_m", rep.min_m}, {"max_m", rep.max_m}, {"pass", rep.pass}};
        if (rep.violating_time)
            cert["violating_time"] = *rep.violating_time;
        if (rep.earliest_pass)
            cert["earliest_pass"] = *rep.earliest_pass;
        cert["margin"] = rep.margin;
        write_file_atomic((fs::path(cfg.out_dir) / "certificate.json").string(),
                          cert.dump(2) + "\n");
        manifest["artifacts"].push_back("certificate.json");
        if (!rep.pass) {
            std::cerr << "lower-bound certificate failed (margin " << rep.margin << ")\n";
            rc = kExitCertificate;
        }
    }
    write_manifest(manifest, cfg.out_dir);
    return rc;
}

json report_to_json(const DataReport& r) {
    return {{"det_dev", r.det_dev},         {"divFT_norm", r.divFT_norm},
            {"piola_res", r.piola_res},     {"u_h2", r.u_h2},
            {"e_h2", r.e_h2},               {"min_det_flow", r.min_det_flow},
            {"ode_error", r.ode_error},     {"interp_residual", r.interp_residual}};
}

std::string monitor_csv(const std::vector<State>& snaps, double kappa) {
    std::string csv = "t,det_dev,divFT,piola,energy,dissipation,G,H,kappa\n";
    for (const State& s : snaps) {
        InvariantReport r = evaluate_invariants(s, kappa);
        csv += format_csv_row({r.t, r.det_dev, r.divFT_norm, r.piola_res, r.energy, r.dissipation,
                               r.G, r.H, r.kappa});
    }
    return csv;
}

int cmd_simulate(const RunConfig& cfg) {
    Grid grid(cfg.dim, cfg.n, cfg.length);
    ConstructedData data = make_state(cfg.recipe, grid, cfg.mu);

    RunOptions opts;
    opts.controls.c_cfl = cfg.c_cfl;
    opts.controls.linear_only = cfg.linear_only;
    opts.snapshot_every = cfg.snapshot_every;
    Trajectory traj = run(data.state, cfg.t_final, cfg.dt, opts);

    json manifest = base_manifest(cfg, "simulate");
    manifest["data_report"] = report_to_json(data.report);
    manifest["artifacts"] = json::array({"snapshots"});
    if (cfg.monitors) {
        double kappa = select_kappa(grid, cfg.mu, cfg.kappa_max, cfg.recipe.seed + 101);
        write_file_atomic((fs::path(cfg.out_dir) / "monitors.csv").string(),
                          monitor_csv(traj.snapshots, kappa));
        manifest["kappa"] = kappa;
        manifest["artifacts"].push_back("monitors.csv");
    }
    save_trajectory(traj, cfg.out_dir, manifest.dump());
    return kExitOk;
}

int cmd_invariants(const RunConfig& cfg, const std::string& traj_dir) {
    std::string dir = traj_dir.empty() ? cfg.out_dir : traj_dir;
    Trajectory traj = load_trajectory(dir);
    const Grid& grid = traj.snapshots.front().u.grid();
    double kappa = select_kappa(grid, cfg.mu, cfg.kappa_max, cfg.recipe.seed + 101);

    write_file_atomic((fs::path(cfg.out_dir) / "monitors.csv").string(),
                      monitor_csv(traj.snapshots, kappa));

    // summary gates: G non-increasing within O(dt^2) t slack, energy identity
    double g0 = lyapunov_G(traj.snapshots.front(), kappa);
    double dt = traj.dt > 0.0 ? traj.dt : 1.0;
    bool g_ok = true;
    double worst_uplift = 0.0;
    double run_min = g0;
    for (const State& s : traj.snapshots) {
        double G = lyapunov_G(s, kappa);
        double slack = 5.0 * g0 * dt * dt * std::max(s.t, 1.0);
        worst_uplift = std::max(worst_uplift, G - run_min - slack);
        if (G > run_min + slack)
            g_ok = false;
        run_min = std::min(run_min, G);
    }
    json summary = {{"kappa", kappa},
                    {"g_monotone", g_ok},
                    {"worst_uplift_past_slack", worst_uplift},
                    {"snapshots", traj.snapshots.size()}};
    write_file_atomic((fs::path(cfg.out_dir) / "invariants_summary.json").string(),
                      summary.dump(2) + "\n");
    json manifest = base_manifest(cfg, "invariants");
    manifest["artifacts"] = {"monitors.csv", "invariants_summary.json"};
    manifest["trajectory"] = dir;
    if (dir != cfg.out_dir)
        write_manifest(manifest, cfg.out_dir);
    else
        write_file_atomic((fs::path(cfg.out_dir) / "invariants_manifest.json").string(),
                          manifest.dump(2) + "\n");
    return g_ok ? kExitOk : kExitCertificate;
}

int cmd_weak_strong(const RunConfig& cfg) {
    Grid grid(cfg.dim, cfg.n, cfg.length);
    ConstructedData data = make_state(cfg.recipe, grid, cfg.mu);

    RunOptions strong_opts;
    strong_opts.controls.c_cfl = cfg.c_cfl;
    strong_opts.snapshot_every = cfg.snapshot_every;
    Trajectory strong = run(data.state, cfg.t_final, cfg.dt, strong_opts);

    GronwallConfig gc;
    gc.tol_energy = cfg.tol_energy;
    gc.envelope_slack = cfg.envelope_slack;

    if (cfg.ws_mode == "refine") {
        // same data at dt, dt/2, dt/4: both pairs must certify and the final
        // relative energy must drop by the squared-order factor ~16
        RunOptions half_opts = strong_opts;
        half_opts.snapshot_every = 2 * cfg.snapshot_every;
        RunOptions quarter_opts = strong_opts;
        quarter_opts.snapshot_every = 4 * cfg.snapshot_every;
        Trajectory half = run(data.state, cfg.t_final, 0.5 * cfg.dt, half_opts);
        Trajectory quarter = run(data.state, cfg.t_final, 0.25 * cfg.dt, quarter_opts);
        RelativeEnergyReport pa = gronwall_certificate(strong, half, gc);
        RelativeEnergyReport pb = gronwall_certificate(half, quarter, gc);
        double ratio = pa.rel_energy.back() / std::max(pb.rel_energy.back(), 1e-300);
        bool ratio_ok = ratio >= 12.0 && ratio <= 20.0;
        bool pass = pa.pass && pb.pass && ratio_ok;

        std::string csv = "t,rel_energy,grad_diff,R1,R2,h,envelope\n";
        for (std::size_t k = 0; k < pa.times.size(); ++k)
            csv += format_csv_row({pa.times[k], pa.rel_energy[k], pa.grad_diff[k], pa.r1[k],
                                   pa.r2[k], pa.h[k], pa.envelope[k]});
        write_file_atomic((fs::path(cfg.out_dir) / "relative_energy.csv").string(), csv);
        json summary = {{"mode", "refine"},
                        {"pass", pass},
                        {"order_ratio", ratio},
                        {"order_ratio_window", {12.0, 20.0}},
                        {"rel_energy_final_pair1", pa.rel_energy.back()},
                        {"rel_energy_final_pair2", pb.rel_energy.back()},
                        {"c_fit", pa.c_fit},
                        {"tol_energy", gc.tol_energy},
                        {"note", pa.note}};
        write_file_atomic((fs::path(cfg.out_dir) / "weak_strong_summary.json").string(),
                          summary.dump(2) + "\n");
        json manifest = base_manifest(cfg, "weak-strong");
        manifest["data_report"] = report_to_json(data.report);
        manifest["artifacts"] = {"relative_energy.csv", "weak_strong_summary.json"};
        write_manifest(manifest, cfg.out_dir);
        if (!pass) {
            std::cerr << "weak-strong refine certificate failed (ratio " << ratio << ")\n";
            return kExitCertificate;
        }
        return kExitOk;
    }

    State w0 = data.state;
    add_perturbation(w0, cfg.perturb_eps, cfg.recipe.seed + 7777, cfg.recipe.band);
    Trajectory weak = run(w0, cfg.t_final, cfg.dt, strong_opts);

    RelativeEnergyReport rep = gronwall_certificate(strong, weak, gc);

    std::string csv = "t,rel_energy,grad_diff,R1,R2,h,envelope\n";
    for (std::size_t k = 0; k < rep.times.size(); ++k)
        csv += format_csv_row({rep.times[k], rep.rel_energy[k], rep.grad_diff[k], rep.r1[k],
                               rep.r2[k], rep.h[k], rep.envelope[k]});
    write_file_atomic((fs::path(cfg.out_dir) / "relative_energy.csv").string(), csv);
    json summary = {{"c_fit", rep.c_fit},
                    {"rel0", rep.rel0},
                    {"same_data", rep.same_data},
                    {"pass", rep.pass},
                    {"note", rep.note},
                    {"mode", cfg.ws_mode},
                    {"tol_energy", gc.tol_energy},
                    {"envelope_slack", gc.envelope_slack},
                    {"rel_energy_final", rep.rel_energy.back()}};
    write_file_atomic((fs::path(cfg.out_dir) / "weak_strong_summary.json").string(),
                      summary.dump(2) + "\n");
    json manifest = base_manifest(cfg, "weak-strong");
    manifest["data_report"] = report_to_json(data.report);
    manifest["artifacts"] = {"relative_energy.csv", "weak_strong_summary.json"};
    write_manifest(manifest, cfg.out_dir);
    if (!rep.pass) {
        std::cerr << "weak-strong certificate failed: " << rep.note << "\n";
        return kExitCertificate;
    }
    return kExitOk;
}

int cmd_greens_dump(const std::string& out_dir, std::vector<double> mus, double xi_lo,
                    double xi_hi, int xi_n, std::vector<double> times) {
    if (mus.empty())
        mus = {1.0};
    if (times.empty())
        times = {0.1, 1.0, 10.0};
    std::string csv = "t,xi_mag,mu,re_g11,im_g11,re_g12,im_g12,re_g21,im_g21,re_g22,im_g22\n";
    for (double mu : mus)
        for (double t : times)
            for (double x : logspace(xi_lo, xi_hi, xi_n)) {
                GreensMatrix g = greens_function(t, {mu, x});
                csv += format_csv_row({t, x, mu, g.g11.real(), g.g11.imag(), g.g12.real(),
                                       g.g12.imag(), g.g21.real(), g.g21.imag(), g.g22.real(),
                                       g.g22.imag()});
            }
    write_file_atomic((fs::path(out_dir) / "greens.csv").string(), csv);
    json manifest = {{"code_version", kVersion},
                     {"command", "greens-dump"},
                     {"mu", mus},
                     {"times", times},
                     {"xi", {{"lo", xi_lo}, {"hi", xi_hi}, {"n", xi_n}}},
                     {"artifacts", {"greens.csv"}}};
    write_manifest(manifest, out_dir);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"pseudo-spectral laboratory for incompressible viscoelastic flow"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    CommonFlags flags;
    auto add_common = [&](CLI::App* sub, bool need_config) {
        auto* c = sub->add_option("--config", flags.config_path, "TOML configuration file");
        if (need_config)
            c->required()->check(CLI::ExistingFile);
        sub->add_option("--out", flags.out_dir, "output directory")->envname("VEFLAB_OUT");
        sub->add_option("--seed", flags.seed, "override data.seed")->envname("VEFLAB_SEED");
        sub->add_option("--threads", flags.threads, "worker threads")->envname("VEFLAB_THREADS");
    };

    auto* lin = app.add_subcommand("linear-decay", "linear decay rates by radial quadrature");
    add_common(lin, true);
    auto* sim = app.add_subcommand("simulate", "nonlinear run with snapshots and monitors");
    add_common(sim, true);
    auto* inv = app.add_subcommand("invariants", "structural monitors over a trajectory");
    add_common(inv, true);
    std::string traj_dir;
    inv->add_option("--traj", traj_dir, "trajectory directory (defaults to output.dir)");
    auto* ws = app.add_subcommand("weak-strong", "relative-energy certificate for a pair of runs");
    add_common(ws, true);
    auto* gd = app.add_subcommand("greens-dump", "propagator entry tables as CSV");
    std::vector<double> gd_mus, gd_times;
    double gd_xi_lo = 1e-3, gd_xi_hi = 1e3;
    int gd_xi_n = 50;
    std::string gd_out = "out";
    gd->add_option("--mu", gd_mus, "viscosities");
    gd->add_option("--times", gd_times, "evaluation times");
    gd->add_option("--xi-lo", gd_xi_lo, "lowest |xi|");
    gd->add_option("--xi-hi", gd_xi_hi, "highest |xi|");
    gd->add_option("--xi-n", gd_xi_n, "number of |xi| samples (log-spaced)");
    gd->add_option("--out", gd_out, "output directory")->envname("VEFLAB_OUT");

    // --seed needs a presence flag; CLI11 counts it for us
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitConfig;
    }
    for (CLI::App* sub : {lin, sim, inv, ws})
        if (sub->parsed() && sub->count("--seed"))
            flags.seed_set = true;

    try {
        if (gd->parsed())
            return cmd_greens_dump(gd_out, gd_mus, gd_xi_lo, gd_xi_hi, gd_xi_n, gd_times);
        RunConfig cfg = effective_config(flags);
        if (lin->parsed())
            return cmd_linear_decay(cfg);
        if (sim->parsed())
            return cmd_simulate(cfg);
        if (inv->parsed())
            return cmd_invariants(cfg, traj_dir);
        if (ws->parsed())
            return cmd_weak_strong(cfg);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const BlowupError& e) {
        std::cerr << e.what() << "\n";
        return kExitBlowup;
    } catch (const AdmissibilityError& e) {
        std::cerr << "rejected: " << e.what() << "\n";
        return kExitCertificate;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return kExitOk;
}

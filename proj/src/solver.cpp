#include "veflab/solver.hpp"

#include <cmath>

#include "veflab/operators.hpp"
#include "veflab/semigroup.hpp"
#include "veflab/transform.hpp"

namespace veflab {

namespace {

bool finite(const SpectralField& f) {
    for (const auto& c : f.data())
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
            return false;
    return true;
}

// forcing of the (u_i, n_i) pairs and the row-curl remainder of h
struct SplitForcing {
    SpectralField g;       // rank 1
    SpectralField h_div;   // rank 2, rows parallel to xi
    SpectralField h_curl;  // rank 2, remainder (zero mode lives here)
    SpectralField fn;      // rank 1, i xi_k h_ik / |xi|
};

SplitForcing split_forcing(const Nonlinearity& nl) {
    const Grid& g = nl.h.grid();
    const int d = g.dim();
    SplitForcing out{nl.g, SpectralField(g, 2), nl.h, SpectralField(g, 1)};
    for (std::size_t m = 0; m < nl.h.num_modes(); ++m) {
        double x2 = g.xi_sq(m);
        if (x2 == 0.0)
            continue;
        double x = std::sqrt(x2);
        auto xi = g.xi_vec(m);
        for (int i = 0; i < d; ++i) {
            Complex dot(0.0, 0.0);
            for (int k = 0; k < d; ++k)
                dot += nl.h.tensor_at(i, k, m) * xi[k];
            out.fn.at(i, m) = Complex(0.0, 1.0) * dot / x;
            for (int j = 0; j < d; ++j) {
                Complex dp = dot * xi[j] / x2;
                out.h_div.tensor_at(i, j, m) = dp;
                out.h_curl.tensor_at(i, j, m) = nl.h.tensor_at(i, j, m) - dp;
            }
        }
    }
    return out;
}

// y = G(dt) x applied per mode and component to the pairs (u_i, n_i)
void propagate_pairs(const Grid& g, double mu, double dt, SpectralField& u, SpectralField& n) {
    const int d = g.dim();
    for (std::size_t m = 0; m < u.num_modes(); ++m) {
        double x2 = g.xi_sq(m);
        if (x2 == 0.0)
            continue;
        double x = std::sqrt(x2);
        GreensScalars s = greens_scalars(dt, {mu, x});
        double g11 = -mu * x2 * s.ed - s.em;
        double g12 = x * s.ed;
        double g21 = -g12;
        double g22 = -s.em;
        for (int i = 0; i < d; ++i) {
            Complex ui = u.at(i, m), ni = n.at(i, m);
            u.at(i, m) = g11 * ui + g12 * ni;
            n.at(i, m) = g21 * ui + g22 * ni;
        }
    }
}

// n of the state plus the curl remainder of E (div part reconstructs from n)
struct PairState {
    SpectralField u;
    SpectralField n;
    SpectralField e_curl;
    SpectralField e_zero;  // rank 2 zero-mode carrier (modes other than 0 unused)
};

PairState to_pairs(const State& s) {
    const Grid& g = s.u.grid();
    const int d = g.dim();
    PairState p{s.u, SpectralField(g, 1), SpectralField(g, 2), SpectralField(g, 2)};
    for (std::size_t m = 0; m < s.E.num_modes(); ++m) {
        double x2 = g.xi_sq(m);
        if (x2 == 0.0) {
            for (int c = 0; c < d * d; ++c)
                p.e_zero.at(c, m) = s.E.at(c, m);
            continue;
        }
        double x = std::sqrt(x2);
        auto xi = g.xi_vec(m);
        for (int i = 0; i < d; ++i) {
            Complex dot(0.0, 0.0);
            for (int k = 0; k < d; ++k)
                dot += s.E.tensor_at(i, k, m) * xi[k];
            p.n.at(i, m) = Complex(0.0, 1.0) * dot / x;
            for (int j = 0; j < d; ++j)
                p.e_curl.tensor_at(i, j, m) = s.E.tensor_at(i, j, m) - dot * xi[j] / x2;
        }
    }
    return p;
}

State from_pairs(const PairState& p, double t, double mu) {
    const Grid& g = p.u.grid();
    const int d = g.dim();
    State s{p.u, p.e_curl, t, mu};
    for (std::size_t m = 0; m < s.E.num_modes(); ++m) {
        double x2 = g.xi_sq(m);
        if (x2 == 0.0) {
            for (int c = 0; c < d * d; ++c)
                s.E.at(c, m) = p.e_zero.at(c, m);
            continue;
        }
        double x = std::sqrt(x2);
        auto xi = g.xi_vec(m);
        for (int i = 0; i < d; ++i) {
            Complex div_coef = Complex(0.0, -1.0) * p.n.at(i, m) / x;
            for (int j = 0; j < d; ++j)
                s.E.tensor_at(i, j, m) += div_coef * xi[j];
        }
    }
    return s;
}

}  // namespace

Nonlinearity compute_nonlinearities(const State& s) {
    const Grid& g = s.u.grid();
    const int d = g.dim();
    const std::size_t np = g.num_points();

    SpectralField u_hat = s.u;
    SpectralField e_hat = s.E;
    dealias(u_hat);
    dealias(e_hat);

    PhysicalField u = to_physical(u_hat);
    PhysicalField gu = to_physical(tensor_grad(u_hat));
    PhysicalField e = to_physical(e_hat);
    std::vector<PhysicalField> ge;  // ge[k] = d_k E
    ge.reserve(d);
    for (int k = 0; k < d; ++k) {
        SpectralField dk(g, 2);
        for (std::size_t m = 0; m < e_hat.num_modes(); ++m) {
            auto idx = g.unravel(m);
            int fr = g.freq(idx[k]);
            Complex f = fr == -g.n() / 2 ? Complex(0.0, 0.0) : Complex(0.0, g.xi(idx[k]));
            for (int c = 0; c < d * d; ++c)
                dk.at(c, m) = f * e_hat.at(c, m);
        }
        ge.push_back(to_physical(dk));
    }

    PhysicalField conv{g, 1, std::vector<double>(static_cast<std::size_t>(d) * np, 0.0)};
    PhysicalField ee{g, 2, std::vector<double>(static_cast<std::size_t>(d) * d * np, 0.0)};
    PhysicalField hp{g, 2, std::vector<double>(static_cast<std::size_t>(d) * d * np, 0.0)};
    for (std::size_t x = 0; x < np; ++x) {
        for (int i = 0; i < d; ++i) {
            double c = 0.0;
            for (int k = 0; k < d; ++k)
                c += u.at(k, x) * gu.at(i * d + k, x);
            conv.at(i, x) = c;
        }
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                double pe = 0.0, ph = 0.0;
                for (int k = 0; k < d; ++k) {
                    pe += e.at(i * d + k, x) * e.at(j * d + k, x);
                    ph += -u.at(k, x) * ge[k].at(i * d + j, x) +
                          gu.at(i * d + k, x) * e.at(k * d + j, x);
                }
                ee.at(i * d + j, x) = pe;
                hp.at(i * d + j, x) = ph;
            }
    }

    SpectralField conv_hat = to_spectral(conv);
    SpectralField ee_hat = to_spectral(ee);
    Nonlinearity out{SpectralField(g, 1), to_spectral(hp)};
    SpectralField pre_g = div_tensor(ee_hat);
    pre_g -= conv_hat;
    out.g = leray_project(pre_g);
    dealias(out.g);
    dealias(out.h);
    return out;
}

State step(const State& s, double dt, const StepControls& controls) {
    if (!(dt > 0.0))
        throw std::invalid_argument("step: dt must be positive");
    const Grid& g = s.u.grid();
    double umax = linf_norm(s.u);
    double dt_max = controls.c_cfl * g.dx() / std::max(umax, controls.eps_u);
    if (dt > dt_max)
        throw CflError(dt, dt_max);

    const bool nl = !controls.linear_only;
    Nonlinearity f0 = nl ? compute_nonlinearities(s)
                         : Nonlinearity{SpectralField(g, 1), SpectralField(g, 2)};
    SplitForcing sf0 = split_forcing(f0);

    PairState p = to_pairs(s);

    // predictor: transported Euler
    PairState pred = p;
    if (nl) {
        pred.u.axpy(dt, sf0.g);
        pred.n.axpy(dt, sf0.fn);
        pred.e_curl.axpy(dt, sf0.h_curl);
        pred.e_zero.axpy(dt, f0.h);  // only the zero mode is read back
    }
    propagate_pairs(g, s.mu, dt, pred.u, pred.n);
    State s_pred = from_pairs(pred, s.t + dt, s.mu);
    s_pred.u = leray_project(s_pred.u);
    enforce_hermitian(s_pred.u);
    enforce_hermitian(s_pred.E);

    // corrector: trapezoidal Duhamel weights
    PairState corr = p;
    if (nl) {
        corr.u.axpy(0.5 * dt, sf0.g);
        corr.n.axpy(0.5 * dt, sf0.fn);
    }
    propagate_pairs(g, s.mu, dt, corr.u, corr.n);
    if (nl) {
        Nonlinearity f1 = compute_nonlinearities(s_pred);
        SplitForcing sf1 = split_forcing(f1);
        corr.u.axpy(0.5 * dt, sf1.g);
        corr.n.axpy(0.5 * dt, sf1.fn);
        corr.e_curl.axpy(0.5 * dt, sf0.h_curl);
        corr.e_curl.axpy(0.5 * dt, sf1.h_curl);
        corr.e_zero.axpy(0.5 * dt, f0.h);
        corr.e_zero.axpy(0.5 * dt, f1.h);
    }

    State out = from_pairs(corr, s.t + dt, s.mu);
    out.u = leray_project(out.u);
    enforce_hermitian(out.u);
    enforce_hermitian(out.E);
    if (!finite(out.u) || !finite(out.E))
        throw BlowupError(out.t);
    return out;
}

SpectralField recover_pressure(const State& s) {
    const Grid& g = s.u.grid();
    const int d = g.dim();
    const std::size_t np = g.num_points();

    SpectralField u_hat = s.u;
    SpectralField e_hat = s.E;
    dealias(u_hat);
    dealias(e_hat);
    PhysicalField u = to_physical(u_hat);
    PhysicalField gu = to_physical(tensor_grad(u_hat));
    PhysicalField e = to_physical(e_hat);

    PhysicalField conv{g, 1, std::vector<double>(static_cast<std::size_t>(d) * np, 0.0)};
    PhysicalField ee{g, 2, std::vector<double>(static_cast<std::size_t>(d) * d * np, 0.0)};
    for (std::size_t x = 0; x < np; ++x) {
        for (int i = 0; i < d; ++i) {
            double c = 0.0;
            for (int k = 0; k < d; ++k)
                c += u.at(k, x) * gu.at(i * d + k, x);
            conv.at(i, x) = c;
        }
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                double pe = 0.0;
                for (int k = 0; k < d; ++k)
                    pe += e.at(i * d + k, x) * e.at(j * d + k, x);
                ee.at(i * d + j, x) = pe;
            }
    }
    SpectralField rhs = div_tensor(to_spectral(ee));
    rhs += div_tensor(e_hat);
    rhs -= to_spectral(conv);
    dealias(rhs);
    SpectralField div_rhs = div_vector(rhs);
    SpectralField p(g, 0);
    for (std::size_t m = 1; m < p.num_modes(); ++m) {
        double x2 = g.xi_sq(m);
        if (x2 > 0.0)
            p.at(0, m) = div_rhs.at(0, m) / (-x2);
    }
    enforce_hermitian(p);
    return p;
}

Trajectory run(const State& s0, double T, double dt, const RunOptions& options) {
    if (T < 0.0)
        throw std::invalid_argument("run: T must be nonnegative");
    Trajectory traj;
    traj.dt = dt;
    traj.snapshots.push_back(s0);
    if (options.on_snapshot)
        options.on_snapshot(s0);
    if (T == 0.0)
        return traj;

    double scale0 = h2_norm(s0.u) + h2_norm(s0.E);
    double blow_threshold = std::max(options.blowup_factor * scale0, 1e-12);
    long long nsteps = std::llround(T / dt);
    if (nsteps < 1)
        nsteps = 1;

    State s = s0;
    for (long long k = 1; k <= nsteps; ++k) {
        s = step(s, dt, options.controls);
        double sc = h2_norm(s.u) + h2_norm(s.E);
        if (!std::isfinite(sc) || sc > blow_threshold)
            throw BlowupError(s.t);
        if (k % options.snapshot_every == 0 || k == nsteps) {
            traj.snapshots.push_back(s);
            if (options.on_snapshot)
                options.on_snapshot(s);
        }
    }
    return traj;
}

}  // namespace veflab

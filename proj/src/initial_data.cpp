#include "veflab/initial_data.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

#include "veflab/invariants.hpp"
#include "veflab/operators.hpp"
#include "veflab/parallel.hpp"
#include "veflab/rng.hpp"
#include "veflab/transform.hpp"

namespace veflab {

namespace {

SpectralField random_divfree(const Grid& g, int band, CounterRng& rng) {
    if (band > g.n() / 3)
        throw std::invalid_argument("initial data band exceeds the dealiased range");
    SpectralField f(g, 1);
    for (std::size_t m = 0; m < f.num_modes(); ++m) {
        auto idx = g.unravel(m);
        bool in_band = true, zero = true;
        for (int a = 0; a < g.dim(); ++a) {
            int k = g.freq(idx[a]);
            if (std::abs(k) > band)
                in_band = false;
            if (k != 0)
                zero = false;
        }
        if (!in_band || zero)
            continue;
        for (int c = 0; c < f.ncomp(); ++c)
            f.at(c, m) = Complex(rng.next_normal(), rng.next_normal());
    }
    enforce_hermitian(f);
    SpectralField out = leray_project(f);
    zero_mean(out);
    return out;
}

void scale_to_h2(SpectralField& f, double target) {
    double n = h2_norm(f);
    if (n > 0.0)
        f *= target / n;
}

// Band-limited velocity as an explicit mode list for exact off-grid
// evaluation: w(X) = sum over half-spectrum of 2 Re(c e^{i xi.X}) / N^d.
struct ModeSum {
    struct Mode {
        double xi[3];
        Complex c[3];
        double weight;  // 2 for paired modes, 1 for self-conjugate
    };
    std::vector<Mode> modes;
    int dim = 2;
    double inv_nd = 1.0;

    void eval(const double* x, double* out) const {
        for (int i = 0; i < dim; ++i)
            out[i] = 0.0;
        for (const Mode& mo : modes) {
            double phase = 0.0;
            for (int a = 0; a < dim; ++a)
                phase += mo.xi[a] * x[a];
            double cp = std::cos(phase), sp = std::sin(phase);
            for (int i = 0; i < dim; ++i)
                out[i] += mo.weight * (mo.c[i].real() * cp - mo.c[i].imag() * sp);
        }
        for (int i = 0; i < dim; ++i)
            out[i] *= inv_nd;
    }
};

ModeSum build_mode_sum(const SpectralField& w) {
    const Grid& g = w.grid();
    ModeSum ms;
    ms.dim = g.dim();
    ms.inv_nd = 1.0 / static_cast<double>(g.num_points());
    for (std::size_t m = 0; m < w.num_modes(); ++m) {
        std::size_t cj = g.conjugate_index(m);
        if (cj < m)
            continue;
        bool nonzero = false;
        for (int c = 0; c < ms.dim; ++c)
            if (w.at(c, m) != Complex(0.0, 0.0))
                nonzero = true;
        if (!nonzero)
            continue;
        ModeSum::Mode mo;
        auto xi = g.xi_vec(m);
        for (int a = 0; a < 3; ++a)
            mo.xi[a] = xi[a];
        for (int c = 0; c < ms.dim; ++c)
            mo.c[c] = w.at(c, m);
        mo.weight = cj == m ? 1.0 : 2.0;
        ms.modes.push_back(mo);
    }
    return ms;
}

// RK4 particle push X' = w(X) with nsteps fixed steps.
void advect(const ModeSum& w, double* x, double T, int nsteps) {
    const int d = w.dim;
    double k1[3], k2[3], k3[3], k4[3], tmp[3];
    double h = T / nsteps;
    for (int s = 0; s < nsteps; ++s) {
        w.eval(x, k1);
        for (int i = 0; i < d; ++i)
            tmp[i] = x[i] + 0.5 * h * k1[i];
        w.eval(tmp, k2);
        for (int i = 0; i < d; ++i)
            tmp[i] = x[i] + 0.5 * h * k2[i];
        w.eval(tmp, k3);
        for (int i = 0; i < d; ++i)
            tmp[i] = x[i] + h * k3[i];
        w.eval(tmp, k4);
        for (int i = 0; i < d; ++i)
            x[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
}

// Order-8 periodic Lagrange interpolation weights for offset u in [0,1)
// relative to node 0 of the stencil {-3,...,4}.
void lagrange8_weights(double u, double* wts) {
    static const double nodes[8] = {-3.0, -2.0, -1.0, 0.0, 1.0, 2.0, 3.0, 4.0};
    for (int i = 0; i < 8; ++i) {
        double w = 1.0;
        for (int j = 0; j < 8; ++j) {
            if (j == i)
                continue;
            w *= (u - nodes[j]) / (nodes[i] - nodes[j]);
        }
        wts[i] = w;
    }
}

// Tensor-product order-8 interpolation of a multi-component grid function.
struct Interpolator {
    const PhysicalField* field;
    void eval(const double* x, double* out) const {
        const Grid& g = field->grid;
        const int d = g.dim();
        const int n = g.n();
        const double dx = g.dx();
        int base[3];
        double wts[3][8];
        for (int a = 0; a < d; ++a) {
            double t = x[a] / dx;
            double fl = std::floor(t);
            base[a] = static_cast<int>(fl);
            lagrange8_weights(t - fl, wts[a]);
        }
        const int nc = field->ncomp();
        for (int c = 0; c < nc; ++c)
            out[c] = 0.0;
        if (d == 2) {
            for (int i = 0; i < 8; ++i) {
                int gi = ((base[0] + i - 3) % n + n) % n;
                for (int j = 0; j < 8; ++j) {
                    int gj = ((base[1] + j - 3) % n + n) % n;
                    double w = wts[0][i] * wts[1][j];
                    std::size_t p = static_cast<std::size_t>(gi) * n + gj;
                    for (int c = 0; c < nc; ++c)
                        out[c] += w * field->at(c, p);
                }
            }
        } else {
            for (int i = 0; i < 8; ++i) {
                int gi = ((base[0] + i - 3) % n + n) % n;
                for (int j = 0; j < 8; ++j) {
                    int gj = ((base[1] + j - 3) % n + n) % n;
                    double wij = wts[0][i] * wts[1][j];
                    for (int k = 0; k < 8; ++k) {
                        int gk = ((base[2] + k - 3) % n + n) % n;
                        double w = wij * wts[2][k];
                        std::size_t p =
                            (static_cast<std::size_t>(gi) * n + gj) * static_cast<std::size_t>(n) +
                            gk;
                        for (int c = 0; c < nc; ++c)
                            out[c] += w * field->at(c, p);
                    }
                }
            }
        }
    }
};

}  // namespace

ConstructedData make_zero_strain(double delta, std::uint64_t seed, const Grid& grid, int band) {
    if (!(delta > 0.0))
        throw std::invalid_argument("make_zero_strain: delta must be positive");
    CounterRng rng(seed);
    ConstructedData out{State{random_divfree(grid, band, rng), SpectralField(grid, 2), 0.0, 1.0},
                        DataReport{}};
    scale_to_h2(out.state.u, delta);
    out.report.u_h2 = h2_norm(out.state.u);
    return out;
}

ConstructedData make_lagrangian_strain(double delta, std::uint64_t seed, const Grid& grid,
                                       double flow_time, double ode_tol, int band) {
    if (!(delta > 0.0))
        throw std::invalid_argument("make_lagrangian_strain: delta must be positive");
    const int d = grid.dim();
    const std::size_t np = grid.num_points();
    CounterRng rng(seed);

    SpectralField w = random_divfree(grid, band, rng);
    scale_to_h2(w, 1.0);

    DataReport report;
    report.residual_floor = ode_tol;
    State st{SpectralField(grid, 1), SpectralField(grid, 2), 0.0, 1.0};

    if (flow_time == 0.0) {
        st.u = random_divfree(grid, band, rng);
        scale_to_h2(st.u, delta);
        report.u_h2 = h2_norm(st.u);
        return {st, report};
    }

    // One calibration pass: amplitude a gives ||E||_H2 ~ a * flow_time * |grad w|,
    // rescaled once to land near delta/2.
    double gw = derivative_norm(w, 1) + 1e-30;
    double amp = 0.5 * delta / (flow_time * gw);

    for (int attempt = 0; attempt < 2; ++attempt) {
        SpectralField wa = w;
        wa *= amp;
        ModeSum ms = build_mode_sum(wa);

        // trajectories from every grid node, with step-doubling error estimate
        int nsteps = 32;
        {
            double probe[3] = {0.1 * grid.dx(), 0.2 * grid.dx(), 0.0};
            double a1[3] = {probe[0], probe[1], probe[2]};
            double a2[3] = {probe[0], probe[1], probe[2]};
            advect(ms, a1, flow_time, nsteps);
            advect(ms, a2, flow_time, 2 * nsteps);
            double err = 0.0;
            for (int i = 0; i < d; ++i)
                err = std::max(err, std::abs(a1[i] - a2[i]));
            while (err > ode_tol && nsteps < 16384) {
                nsteps *= 2;
                for (int i = 0; i < d; ++i) {
                    a1[i] = probe[i];
                    a2[i] = probe[i];
                }
                advect(ms, a1, flow_time, nsteps);
                advect(ms, a2, flow_time, 2 * nsteps);
                err = 0.0;
                for (int i = 0; i < d; ++i)
                    err = std::max(err, std::abs(a1[i] - a2[i]));
            }
            report.ode_error = err;
        }

        // displacement on the Lagrangian grid (trajectories are independent)
        PhysicalField disp;
        disp.grid = grid;
        disp.rank = 1;
        disp.values.assign(static_cast<std::size_t>(d) * np, 0.0);
        parallel_for(np, default_threads(), [&](std::size_t lo, std::size_t hi) {
            for (std::size_t p = lo; p < hi; ++p) {
                auto idx = grid.unravel(p);
                double x[3] = {0.0, 0.0, 0.0};
                for (int a = 0; a < d; ++a)
                    x[a] = grid.dx() * idx[a];
                double x0[3] = {x[0], x[1], x[2]};
                advect(ms, x, flow_time, 2 * nsteps);
                for (int a = 0; a < d; ++a)
                    disp.at(a, p) = x[a] - x0[a];
            }
        });

        // F - I = grad_X(displacement) by spectral differentiation
        SpectralField disp_hat = to_spectral(disp);
        SpectralField fgrad_hat = tensor_grad(disp_hat);
        PhysicalField fgrad = to_physical(fgrad_hat);

        // diffeomorphism check on the Lagrangian grid
        double min_det = 1e300;
        for (std::size_t p = 0; p < np; ++p) {
            double det;
            if (d == 2) {
                det = (1.0 + fgrad.at(0, p)) * (1.0 + fgrad.at(3, p)) -
                      fgrad.at(1, p) * fgrad.at(2, p);
            } else {
                double m[3][3];
                for (int i = 0; i < 3; ++i)
                    for (int j = 0; j < 3; ++j)
                        m[i][j] = (i == j ? 1.0 : 0.0) + fgrad.at(i * 3 + j, p);
                det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
                      m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                      m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
            }
            min_det = std::min(min_det, det);
        }
        report.min_det_flow = min_det;
        if (min_det <= 0.5)
            throw std::runtime_error(
                "make_lagrangian_strain: flow map is not a diffeomorphism (min det = " +
                std::to_string(min_det) + "); reduce delta or flow_time");

        // push forward to Eulerian nodes: invert x = X + disp(X) by fixed
        // point, then interpolate F - I at the preimage
        Interpolator interp_disp{&disp};
        Interpolator interp_grad{&fgrad};
        PhysicalField e0;
        e0.grid = grid;
        e0.rank = 2;
        e0.values.assign(static_cast<std::size_t>(d) * d * np, 0.0);
        int nthreads = default_threads();
        std::vector<double> worst_res_by(nthreads > 1 ? nthreads : 1, 0.0);
        std::atomic<int> worker{0};
        parallel_for(np, nthreads, [&](std::size_t lo, std::size_t hi) {
            int me = worker++;
            double worst = 0.0;
            for (std::size_t p = lo; p < hi; ++p) {
                auto idx = grid.unravel(p);
                double x[3] = {0.0, 0.0, 0.0};
                for (int a = 0; a < d; ++a)
                    x[a] = grid.dx() * idx[a];
                double X[3] = {x[0], x[1], x[2]};
                double dval[3] = {0.0, 0.0, 0.0};
                for (int it = 0; it < 60; ++it) {
                    interp_disp.eval(X, dval);
                    double delta_max = 0.0;
                    for (int a = 0; a < d; ++a) {
                        double nx = x[a] - dval[a];
                        delta_max = std::max(delta_max, std::abs(nx - X[a]));
                        X[a] = nx;
                    }
                    if (delta_max < 1e-14)
                        break;
                }
                interp_disp.eval(X, dval);
                for (int a = 0; a < d; ++a)
                    worst = std::max(worst, std::abs(X[a] + dval[a] - x[a]));
                double gv[9];
                interp_grad.eval(X, gv);
                for (int c = 0; c < d * d; ++c)
                    e0.at(c, p) = gv[c];
            }
            worst_res_by[me] = std::max(worst_res_by[me], worst);
        });
        report.interp_residual = *std::max_element(worst_res_by.begin(), worst_res_by.end());

        st.E = to_spectral(e0);
        enforce_hermitian(st.E);
        dealias(st.E);

        double eh2 = h2_norm(st.E);
        if (attempt == 0 && (eh2 < 0.3 * delta || eh2 > 0.7 * delta)) {
            amp *= 0.5 * delta / std::max(eh2, 1e-30);
            continue;
        }
        break;
    }

    report.e_h2 = h2_norm(st.E);
    if (report.e_h2 >= delta)
        throw std::runtime_error("make_lagrangian_strain: strain exhausted the delta budget");

    st.u = random_divfree(grid, band, rng);
    scale_to_h2(st.u, delta - report.e_h2);
    report.u_h2 = h2_norm(st.u);

    report.det_dev = det_deviation(st.E);
    report.divFT_norm = div_FT_norm(st.E);
    report.piola_res = piola_residual(st.E);
    return {st, report};
}

ConstructedData make_state(const DataRecipe& recipe, const Grid& grid, double mu) {
    ConstructedData out;
    switch (recipe.kind) {
        case DataRecipe::Kind::kZeroStrain:
            out = make_zero_strain(recipe.delta, recipe.seed, grid, recipe.band);
            break;
        case DataRecipe::Kind::kLagrangianMap:
            out = make_lagrangian_strain(recipe.delta, recipe.seed, grid, recipe.flow_time,
                                         recipe.ode_tol, recipe.band);
            break;
        default:
            throw std::invalid_argument("make_state: recipe does not construct a State");
    }
    out.state.mu = mu;
    return out;
}

void add_perturbation(State& s, double eps, std::uint64_t seed, int band) {
    const Grid& g = s.u.grid();
    CounterRng rng(seed);
    SpectralField pu = random_divfree(g, band, rng);
    SpectralField pe(g, 2);
    for (std::size_t m = 0; m < pe.num_modes(); ++m) {
        auto idx = g.unravel(m);
        bool in_band = true, zero = true;
        for (int a = 0; a < g.dim(); ++a) {
            int k = g.freq(idx[a]);
            if (std::abs(k) > band)
                in_band = false;
            if (k != 0)
                zero = false;
        }
        if (!in_band || zero)
            continue;
        for (int c = 0; c < pe.ncomp(); ++c)
            pe.at(c, m) = Complex(rng.next_normal(), rng.next_normal());
    }
    enforce_hermitian(pe);
    double half = eps / std::sqrt(2.0);
    if (l2_norm(pu) > 0.0)
        pu *= half / l2_norm(pu);
    if (l2_norm(pe) > 0.0)
        pe *= half / l2_norm(pe);
    s.u += pu;
    s.E += pe;
}

SpectralProfile make_profile(double delta, double c0, double zeta, const std::string& shape) {
    if (!(delta > 0.0))
        throw std::invalid_argument("make_profile: delta must be positive");
    if (c0 > 0.0 && !(zeta > 0.0 && zeta < 1.0))
        throw std::invalid_argument("make_profile: zeta must lie in (0,1)");
    if (c0 > std::pow(delta, zeta) * (1.0 + 1e-9))
        throw std::invalid_argument("make_profile: floor c0 exceeds the delta^zeta budget");
    if (shape == "gaussian") {
        double amp = c0 > 0.0 ? c0 : delta;
        SpectralProfile p(SpectralProfile::Shape::kGaussian, amp, 1.0, 0.0);
        p.c0 = c0;
        p.xi_floor = 0.1;
        p.certified_floor = p.u_amp(p.xi_floor);  // Gaussian: min over [0, xi_floor]
        if (c0 > 0.0 && p.certified_floor < c0 * 0.95)
            throw std::invalid_argument("make_profile: floor droops below the 5% allowance");
        return p;
    }
    if (shape == "highpass") {
        if (c0 > 0.0)
            throw std::invalid_argument(
                "make_profile: a high-pass shape cannot carry a positive low-frequency floor");
        SpectralProfile p(SpectralProfile::Shape::kHighPass, delta, 1.0, 0.5);
        return p;
    }
    throw std::invalid_argument("make_profile: unknown shape '" + shape + "'");
}

}  // namespace veflab

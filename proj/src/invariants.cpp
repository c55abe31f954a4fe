#include "veflab/invariants.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <stdexcept>

#include "veflab/operators.hpp"
#include "veflab/rng.hpp"
#include "veflab/transform.hpp"

namespace veflab {

double det_deviation(const SpectralField& E) {
    if (E.rank() != 2)
        throw std::invalid_argument("det_deviation: rank-2 field required");
    SpectralField Ed = E;
    dealias(Ed);
    PhysicalField p = to_physical(Ed);
    const int d = p.grid.dim();
    const std::size_t np = p.grid.num_points();
    double worst = 0.0;
    for (std::size_t x = 0; x < np; ++x) {
        double det;
        if (d == 2) {
            double a = 1.0 + p.at(0, x), b = p.at(1, x);
            double c = p.at(2, x), e = 1.0 + p.at(3, x);
            det = a * e - b * c;
        } else {
            double m[3][3];
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j)
                    m[i][j] = (i == j ? 1.0 : 0.0) + p.at(i * 3 + j, x);
            det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
                  m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
                  m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
        }
        worst = std::max(worst, std::abs(det - 1.0));
    }
    return worst;
}

double div_FT_norm(const SpectralField& E) {
    return l2_norm(div_tensor(transpose(E)));
}

double piola_residual(const SpectralField& E) {
    if (E.rank() != 2)
        throw std::invalid_argument("piola_residual: rank-2 field required");
    SpectralField Ed = E;
    dealias(Ed);
    const Grid& g = Ed.grid();
    const int d = g.dim();
    PhysicalField ep = to_physical(Ed);
    // dE[l] holds d_l E as a physical tensor field
    std::vector<PhysicalField> dE;
    dE.reserve(d);
    for (int l = 0; l < d; ++l) {
        SpectralField dl(g, 2);
        for (std::size_t m = 0; m < Ed.num_modes(); ++m) {
            auto idx = g.unravel(m);
            int k = g.freq(idx[l]);
            Complex f = k == -g.n() / 2 ? Complex(0.0, 0.0) : Complex(0.0, g.xi(idx[l]));
            for (int c = 0; c < Ed.ncomp(); ++c)
                dl.at(c, m) = f * Ed.at(c, m);
        }
        dE.push_back(to_physical(dl));
    }
    const std::size_t np = g.num_points();
    double acc = 0.0;
    for (std::size_t x = 0; x < np; ++x) {
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
                for (int mth = 0; mth < d; ++mth) {
                    double r = dE[mth].at(i * d + j, x) - dE[j].at(i * d + mth, x);
                    for (int l = 0; l < d; ++l)
                        r -= ep.at(l * d + j, x) * dE[l].at(i * d + mth, x) -
                             ep.at(l * d + mth, x) * dE[l].at(i * d + j, x);
                    acc += r * r;
                }
    }
    return std::sqrt(acc * g.cell_volume());
}

double energy(const State& s) { return 0.5 * (l2_norm_sq(s.u) + l2_norm_sq(s.E)); }

double dissipation(const State& s) {
    double gn = derivative_norm(s.u, 1);
    return s.mu * gn * gn;
}

double cross_term(const State& s) {
    SpectralField gu = tensor_grad(s.u);
    SpectralField lam_omega = gu - transpose(gu);
    SpectralField ebb = transpose(s.E) - s.E;
    return l2_inner(lam_omega, laplacian(ebb));
}

double lyapunov_G(const State& s, double kappa) {
    double du = derivative_norm(s.u, 2), de = derivative_norm(s.E, 2);
    return energy(s) + 0.5 * (du * du + de * de) + kappa * cross_term(s);
}

double functional_H(const State& s, double kappa) {
    double du = derivative_norm(s.u, 2), de = derivative_norm(s.E, 2);
    return 0.5 * (du * du + de * de) + kappa * cross_term(s);
}

InvariantReport evaluate_invariants(const State& s, double kappa) {
    InvariantReport r;
    r.t = s.t;
    r.det_dev = det_deviation(s.E);
    r.divFT_norm = div_FT_norm(s.E);
    r.piola_res = piola_residual(s.E);
    r.energy = energy(s);
    r.dissipation = dissipation(s);
    double cross = cross_term(s);
    double du = derivative_norm(s.u, 2), de = derivative_norm(s.E, 2);
    r.G = r.energy + 0.5 * (du * du + de * de) + kappa * cross;
    r.H = 0.5 * (du * du + de * de) + kappa * cross;
    r.kappa = kappa;
    return r;
}

namespace {

SpectralField random_probe(const Grid& g, int rank, int band, CounterRng& rng) {
    SpectralField f(g, rank);
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
    return f;
}

}  // namespace

double select_kappa(const Grid& grid, double mu, double kappa_max, std::uint64_t seed) {
    CounterRng rng(seed);
    const int band = std::max(2, grid.n() / 4);
    struct Probe {
        double base_G;   // G at kappa=0
        double cross;    // (Lambda Omega, Delta Ebb)
        double h2_sum;   // ||u||_H2^2 + ||E||_H2^2
    };
    std::vector<Probe> probes;
    auto add_probe = [&](const State& s) {
        double du = derivative_norm(s.u, 2), de = derivative_norm(s.E, 2);
        double hu = h2_norm(s.u), he = h2_norm(s.E);
        probes.push_back({energy(s) + 0.5 * (du * du + de * de), cross_term(s),
                          hu * hu + he * he});
    };
    for (int p = 0; p < 12; ++p) {
        State s{leray_project(random_probe(grid, 1, band, rng)), random_probe(grid, 2, band, rng),
                0.0, mu};
        add_probe(s);
        // adversarial partner: E chosen so Delta(E^T - E) is anti-aligned
        // with Lambda Omega, the worst case for the cross term
        SpectralField gu = tensor_grad(s.u);
        SpectralField t = gu - transpose(gu);
        SpectralField e_adv = lambda_power(t, -2.0);
        e_adv *= -0.5;
        for (double scale : {0.25, 1.0, 4.0}) {
            State adv{s.u, scale * e_adv, 0.0, mu};
            add_probe(adv);
        }
    }
    auto ok = [&](double kappa) {
        for (const auto& p : probes) {
            double G = p.base_G + kappa * p.cross;
            if (G < 0.25 * p.h2_sum || G > p.h2_sum)
                return false;
        }
        return true;
    };
    if (ok(kappa_max))
        return kappa_max;
    double lo = 0.0, hi = kappa_max;
    for (int it = 0; it < 60; ++it) {
        double mid = 0.5 * (lo + hi);
        (ok(mid) ? lo : hi) = mid;
    }
    return lo;
}

std::vector<double> energy_law_residual(const std::vector<State>& segment) {
    if (segment.size() < 3)
        throw std::invalid_argument("energy_law_residual: need at least 3 snapshots");
    std::vector<double> out;
    for (std::size_t k = 1; k + 1 < segment.size(); ++k) {
        double dt = segment[k + 1].t - segment[k - 1].t;
        double dEdt = (energy(segment[k + 1]) - energy(segment[k - 1])) / dt;
        out.push_back(dEdt + dissipation(segment[k]));
    }
    return out;
}

HodgeEquivalenceReport hodge_equivalence_check(const State& s, double smallness) {
    HodgeEquivalenceReport rep;
    rep.e_h2 = h2_norm(s.E);
    if (rep.e_h2 > smallness) {
        rep.skipped = true;
        rep.reason = "state outside the smallness regime (||E||_H2 = " +
                     std::to_string(rep.e_h2) + " > " + std::to_string(smallness) + ")";
        return rep;
    }
    DecomposedState dec = decompose(s);
    double e = l2_norm(s.E), n = l2_norm(dec.n);
    double ge = derivative_norm(s.E, 1), gn = derivative_norm(dec.n, 1);
    double le = derivative_norm(s.E, 2), lb = derivative_norm(dec.Ebb, 2);
    auto ratio = [](double a, double b) { return (a == 0.0 && b == 0.0) ? 1.0 : a / b; };
    if (n <= 1e-14 * e && e > 0.0) {
        rep.degenerate = true;
        rep.reason = "divergence part vanishes; comparability needs the compatibility constraint";
        rep.ratio_l2 = std::numeric_limits<double>::infinity();
        return rep;
    }
    rep.ratio_l2 = ratio(e, n);
    rep.ratio_grad = ratio(ge, gn);
    rep.ratio_lap = ratio(le, lb);
    return rep;
}

}  // namespace veflab

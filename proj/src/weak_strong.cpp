#include "veflab/weak_strong.hpp"

#include <cmath>

#include "veflab/invariants.hpp"
#include "veflab/operators.hpp"
#include "veflab/transform.hpp"

namespace veflab {

namespace {

// physical samples of a field and its spectral gradient stack d_k f
struct PhysWithGrad {
    PhysicalField val;
    std::vector<PhysicalField> grad;  // grad[k] = d_k f (same rank as f)
};

PhysWithGrad sample(const SpectralField& f_in) {
    SpectralField f = f_in;
    dealias(f);
    const Grid& g = f.grid();
    PhysWithGrad out{to_physical(f), {}};
    out.grad.reserve(g.dim());
    for (int k = 0; k < g.dim(); ++k) {
        SpectralField dk(g, f.rank());
        for (std::size_t m = 0; m < f.num_modes(); ++m) {
            auto idx = g.unravel(m);
            int fr = g.freq(idx[k]);
            Complex w = fr == -g.n() / 2 ? Complex(0.0, 0.0) : Complex(0.0, g.xi(idx[k]));
            for (int c = 0; c < f.ncomp(); ++c)
                dk.at(c, m) = w * f.at(c, m);
        }
        out.grad.push_back(to_physical(dk));
    }
    return out;
}

PhysicalField sample_plain(const SpectralField& f_in) {
    SpectralField f = f_in;
    dealias(f);
    return to_physical(f);
}

}  // namespace

Remainders remainders(const State& strong, const State& weak) {
    if (!(strong.u.grid() == weak.u.grid()))
        throw std::invalid_argument("remainders: states live on different grids");
    if (std::abs(strong.t - weak.t) > 1e-12 * std::max(1.0, std::abs(strong.t)))
        throw std::invalid_argument("remainders: states are at different times");
    const Grid& g = strong.u.grid();
    const int d = g.dim();
    const std::size_t np = g.num_points();

    SpectralField U_hat = weak.u - strong.u;
    SpectralField Eb_hat = weak.E - strong.E;

    PhysWithGrad u = sample(strong.u);
    PhysWithGrad E = sample(strong.E);
    PhysWithGrad U = sample(U_hat);
    PhysicalField uh = sample_plain(weak.u);
    PhysicalField Eh = sample_plain(weak.E);
    PhysicalField Eb = sample_plain(Eb_hat);

    // transpose divergences for the violation term
    PhysicalField divET = sample_plain(div_tensor(transpose(strong.E)));
    PhysicalField divEbT = sample_plain(div_tensor(transpose(Eb_hat)));

    double r1 = 0.0, r2 = 0.0, viol = 0.0;
    double rawA = 0.0, rawB = 0.0, rawC = 0.0, rawD = 0.0;

    // div(E E^T) for the raw form, assembled spectrally from the product
    PhysicalField divEE;
    {
        PhysicalField ee{g, 2, std::vector<double>(static_cast<std::size_t>(d) * d * np, 0.0)};
        for (std::size_t x = 0; x < np; ++x)
            for (int a = 0; a < d; ++a)
                for (int b = 0; b < d; ++b) {
                    double s = 0.0;
                    for (int k = 0; k < d; ++k)
                        s += E.val.at(a * d + k, x) * E.val.at(b * d + k, x);
                    ee.at(a * d + b, x) = s;
                }
        divEE = sample_plain(div_tensor(to_spectral(ee)));
    }

    for (std::size_t x = 0; x < np; ++x) {
        // r1 integrand
        for (int a = 0; a < d; ++a) {
            double adv = 0.0;
            for (int k = 0; k < d; ++k)
                adv += U.val.at(k, x) * u.grad[k].at(a, x);
            r1 -= adv * U.val.at(a, x);
        }
        for (int j = 0; j < d; ++j) {
            double div_et = divET.at(j, x);
            double div_ebt = divEbT.at(j, x);
            double e_dot_uh = 0.0, u_dot_ehj = 0.0;
            for (int a = 0; a < d; ++a) {
                e_dot_uh += E.val.at(a * d + j, x) * uh.at(a, x);
                u_dot_ehj += u.val.at(a, x) * Eh.at(a * d + j, x);
            }
            viol -= div_et * e_dot_uh + div_et * u_dot_ehj + div_ebt * e_dot_uh;
            for (int a = 0; a < d; ++a) {
                // -(U.grad)E_j . Eb_j
                double advE = 0.0;
                for (int k = 0; k < d; ++k)
                    advE += U.val.at(k, x) * E.grad[k].at(a * d + j, x);
                r2 -= advE * Eb.at(a * d + j, x);
                // (Eb_j.grad u).Eb_j
                double adv_u = 0.0;
                for (int k = 0; k < d; ++k)
                    adv_u += Eb.at(k * d + j, x) * u.grad[k].at(a, x);
                r2 += adv_u * Eb.at(a * d + j, x);
                // -(E_j (x) Eb_j) : grad U
                for (int b = 0; b < d; ++b)
                    r2 -= E.val.at(a * d + j, x) * Eb.at(b * d + j, x) * U.grad[b].at(a, x);
            }
        }
        // raw pieces
        for (int a = 0; a < d; ++a)
            rawA -= divEE.at(a, x) * uh.at(a, x);
        for (int j = 0; j < d; ++j)
            for (int a = 0; a < d; ++a) {
                double tu = 0.0, te = 0.0;
                for (int k = 0; k < d; ++k) {
                    // [div(E_j (x) u - u (x) E_j)]_a = d_b(E_aj u_b - u_a E_bj)
                    tu += u.val.at(k, x) * E.grad[k].at(a * d + j, x) +
                          E.val.at(a * d + j, x) * u.grad[k].at(k, x) -
                          E.val.at(k * d + j, x) * u.grad[k].at(a, x) -
                          u.val.at(a, x) * E.grad[k].at(k * d + j, x);
                    // (Eh_j (x) uh - uh (x) Eh_j) : grad E_j
                    te += Eh.at(a * d + j, x) * uh.at(k, x) * E.grad[k].at(a * d + j, x) -
                          uh.at(a, x) * Eh.at(k * d + j, x) * E.grad[k].at(a * d + j, x);
                }
                rawB += tu * Eh.at(a * d + j, x);
                rawD -= te;
            }
        for (int a = 0; a < d; ++a)
            for (int b = 0; b < d; ++b) {
                double ee = 0.0;
                for (int k = 0; k < d; ++k)
                    ee += Eh.at(a * d + k, x) * Eh.at(b * d + k, x);
                rawC += ee * u.grad[b].at(a, x);
            }
    }

    double w = g.cell_volume();
    return {r1 * w, r2 * w, (rawA + rawB + rawC + rawD) * w, viol * w};
}

double h_coefficient(const State& strong) {
    SpectralField u = strong.u, E = strong.E;
    dealias(u);
    dealias(E);
    double gu = linf_norm(tensor_grad(u));
    // |grad E|_Linf: pointwise Frobenius norm over all (k,i,j) of d_k E_ij
    PhysWithGrad e = sample(E);
    const std::size_t np = E.grid().num_points();
    double ge_sq = 0.0;
    for (std::size_t x = 0; x < np; ++x) {
        double s = 0.0;
        for (const auto& gk : e.grad)
            for (int c = 0; c < E.ncomp(); ++c) {
                double v = gk.at(c, x);
                s += v * v;
            }
        ge_sq = std::max(ge_sq, s);
    }
    double el = linf_norm(E);
    return gu + std::sqrt(ge_sq) + el * el;
}

RelativeEnergyReport gronwall_certificate(const Trajectory& strong, const Trajectory& weak,
                                          const GronwallConfig& cfg) {
    const auto& ss = strong.snapshots;
    const auto& ws = weak.snapshots;
    if (ss.size() != ws.size() || ss.empty())
        throw std::invalid_argument("gronwall_certificate: trajectories have different lengths");
    for (std::size_t k = 0; k < ss.size(); ++k)
        if (std::abs(ss[k].t - ws[k].t) > 1e-12 * std::max(1.0, std::abs(ss[k].t)))
            throw std::invalid_argument("gronwall_certificate: snapshot times are misaligned");

    // admissibility gate: discrete energy inequality for both trajectories
    auto check_energy = [&](const std::vector<State>& traj, const char* name) {
        double e0 = energy(traj[0]);
        double acc = 0.0;
        for (std::size_t k = 1; k < traj.size(); ++k) {
            double dt = traj[k].t - traj[k - 1].t;
            acc += 0.5 * dt * (dissipation(traj[k - 1]) + dissipation(traj[k]));
            double lhs = energy(traj[k]) + acc;
            if (lhs > e0 * (1.0 + cfg.tol_energy) + 1e-300)
                throw AdmissibilityError(std::string(name) +
                                         " trajectory violates the energy inequality at t = " +
                                         std::to_string(traj[k].t));
        }
    };
    check_energy(ss, "strong");
    check_energy(ws, "weak");

    RelativeEnergyReport rep;
    const std::size_t n = ss.size();
    rep.times.resize(n);
    rep.rel_energy.resize(n);
    rep.grad_diff.resize(n);
    rep.r1.resize(n);
    rep.r2.resize(n);
    rep.h.resize(n);
    rep.envelope.resize(n);

    std::vector<double> grad_u_sq(n);
    for (std::size_t k = 0; k < n; ++k) {
        rep.times[k] = ss[k].t;
        SpectralField U = ws[k].u - ss[k].u;
        SpectralField Eb = ws[k].E - ss[k].E;
        rep.rel_energy[k] = 0.5 * (l2_norm_sq(U) + l2_norm_sq(Eb));
        double gU = derivative_norm(U, 1);
        grad_u_sq[k] = gU * gU;
        Remainders rm = remainders(ss[k], ws[k]);
        rep.r1[k] = rm.r1;
        rep.r2[k] = rm.r2;
        rep.h[k] = h_coefficient(ss[k]);
    }
    double mu = ss[0].mu;
    rep.grad_diff[0] = 0.0;
    for (std::size_t k = 1; k < n; ++k) {
        double dt = rep.times[k] - rep.times[k - 1];
        rep.grad_diff[k] =
            rep.grad_diff[k - 1] + 0.5 * dt * mu * (grad_u_sq[k - 1] + grad_u_sq[k]);
    }

    rep.rel0 = rep.rel_energy[0];
    double scale = std::max(energy(ss[0]), 1e-300);
    rep.same_data = rep.rel0 <= cfg.same_data_rel0 * scale;

    // smallest C closing rel(t) + grad(t) <= rel(0) + C int h rel
    double c_fit = 0.0;
    double hint = 0.0;  // int_0^{t_k} h * rel
    for (std::size_t k = 1; k < n; ++k) {
        double dt = rep.times[k] - rep.times[k - 1];
        hint += 0.5 * dt *
                (rep.h[k - 1] * rep.rel_energy[k - 1] + rep.h[k] * rep.rel_energy[k]);
        double need = rep.rel_energy[k] + rep.grad_diff[k] - rep.rel0;
        if (hint > 0.0 && need > 0.0)
            c_fit = std::max(c_fit, need / hint);
    }
    rep.c_fit = c_fit;

    double hcum = 0.0;
    rep.envelope[0] = rep.rel0;
    bool env_ok = true;
    for (std::size_t k = 1; k < n; ++k) {
        double dt = rep.times[k] - rep.times[k - 1];
        hcum += 0.5 * dt * (rep.h[k - 1] + rep.h[k]);
        rep.envelope[k] = rep.rel0 * std::exp(c_fit * hcum);
        if (rep.rel_energy[k] > rep.envelope[k] * (1.0 + cfg.envelope_slack) + 1e-300)
            env_ok = false;
    }

    if (rep.same_data) {
        double worst = 0.0;
        for (double r : rep.rel_energy)
            worst = std::max(worst, r);
        rep.pass = worst <= cfg.same_data_tol * scale;
        rep.note = "same-data pair: max relative energy " + std::to_string(worst) +
                   " against bound " + std::to_string(cfg.same_data_tol * scale);
    } else {
        rep.pass = env_ok;
        rep.note = env_ok ? "relative energy stays inside the fitted Gronwall envelope"
                          : "relative energy exceeds the fitted Gronwall envelope";
    }
    return rep;
}

}  // namespace veflab

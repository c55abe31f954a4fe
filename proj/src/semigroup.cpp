#include "veflab/semigroup.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace veflab {

namespace {

using Cplx = std::complex<double>;

double discriminant(const SemigroupParams& p) {
    double x2 = p.xi_mag * p.xi_mag;
    return p.mu * p.mu * x2 * x2 - 4.0 * x2;
}

bool near_double_eigenvalue(const SemigroupParams& p) {
    double x2 = p.xi_mag * p.xi_mag;
    double m4 = p.mu * p.mu * x2 * x2;
    return std::abs(discriminant(p)) < kEpsDisc * std::max(1.0, m4);
}

// sum_k w^k/(2k+1)!  ( = sinh(z)/z with w = z^2, either sign of w)
double sinhc_series(double w) {
    double term = 1.0, sum = 1.0;
    for (int k = 1; k < 40; ++k) {
        term *= w / (2.0 * k * (2.0 * k + 1.0));
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum))
            break;
    }
    return sum;
}

// sum_k w^k/(2k)!  ( = cosh(z) with w = z^2)
double cosh_series(double w) {
    double term = 1.0, sum = 1.0;
    for (int k = 1; k < 40; ++k) {
        term *= w / (2.0 * k * (2.0 * k - 1.0));
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum))
            break;
    }
    return sum;
}

}  // namespace

namespace {

// lambda_+ = -mu|xi|^2/2 + sqrt(mu^2|xi|^4 - 4|xi|^2)/2 rewritten as
// -2/(mu + sqrt(mu^2 - 4/|xi|^2)) to avoid the large-|xi| cancellation.
std::pair<double, double> real_branch_eigs(double mu, double x) {
    double lp = -2.0 / (mu + std::sqrt(std::max(0.0, mu * mu - 4.0 / (x * x))));
    double lm = -mu * x * x - lp;
    return {lp, lm};
}

}  // namespace

std::pair<Cplx, Cplx> eigenvalues(const SemigroupParams& p) {
    if (!(p.mu > 0.0))
        throw std::invalid_argument("eigenvalues: mu must be positive");
    double x2 = p.xi_mag * p.xi_mag;
    double re = -0.5 * p.mu * x2;
    double disc = discriminant(p);
    if (p.xi_mag < 2.0 / p.mu) {
        double b = 0.5 * std::sqrt(-disc);
        return {Cplx(re, b), Cplx(re, -b)};
    }
    auto [lp, lm] = real_branch_eigs(p.mu, p.xi_mag);
    return {Cplx(lp, 0.0), Cplx(lm, 0.0)};
}

SemigroupEval semigroup_eval(const SemigroupParams& p) {
    SemigroupEval ev;
    auto [lp, lm] = eigenvalues(p);
    ev.lambda_plus = lp;
    ev.lambda_minus = lm;
    ev.degenerate = near_double_eigenvalue(p);
    if (ev.degenerate) {
        ev.p_plus = {Cplx(0.5), Cplx(0.0), Cplx(0.0), Cplx(0.5)};
        ev.p_minus = ev.p_plus;
        return ev;
    }
    // A - lambda I has diagonal (-mu|xi|^2 - lambda, -lambda) and
    // -mu|xi|^2 = lambda_+ + lambda_-.
    Cplx den = lp - lm;
    double x = p.xi_mag;
    ev.p_plus = {lp / den, x / den, -x / den, -lm / den};
    ev.p_minus = {-lm / den, -x / den, x / den, lp / den};
    return ev;
}

GreensScalars greens_scalars(double t, const SemigroupParams& p) {
    if (!(p.mu > 0.0))
        throw std::invalid_argument("greens_scalars: mu must be positive");
    if (t < 0.0)
        throw std::invalid_argument("greens_scalars: t must be nonnegative");
    const double x2 = p.xi_mag * p.xi_mag;
    const double lbar = -0.5 * p.mu * x2;
    const double disc = discriminant(p);
    const double w = 0.25 * disc * t * t;  // (Delta t)^2, signed

    if (std::abs(w) < 0.25 || near_double_eigenvalue(p)) {
        // Confluent/series branch, uniformly valid across the double eigenvalue.
        double elb = std::exp(lbar * t);
        double sc = sinhc_series(w);
        double ch = cosh_series(w);
        return {t * elb * sc, elb * (lbar * t * sc - ch)};
    }
    if (disc < 0.0) {
        double b = 0.5 * std::sqrt(-disc);
        double elb = std::exp(lbar * t);
        double s = std::sin(b * t), c = std::cos(b * t);
        return {elb * s / b, elb * (lbar * s / b - c)};
    }
    auto [lp, lm] = real_branch_eigs(p.mu, p.xi_mag);
    double ep = std::exp(lp * t);
    double em_ = std::exp(lm * t);
    double den = lp - lm;
    double ed = (ep - em_) / den;
    double em = (lm * ep - lp * em_) / den;
    return {ed, em};
}

GreensMatrix greens_function(double t, const SemigroupParams& p) {
    GreensScalars s = greens_scalars(t, p);
    double x = p.xi_mag;
    double mu_x2 = p.mu * x * x;
    return {Cplx(-mu_x2 * s.ed - s.em), Cplx(x * s.ed), Cplx(-x * s.ed), Cplx(-s.em)};
}

std::array<Cplx, 2> propagate_pair(const std::array<Cplx, 2>& w0, double t,
                                   const SemigroupParams& p) {
    GreensMatrix g = greens_function(t, p);
    return {g.g11 * w0[0] + g.g12 * w0[1], g.g21 * w0[0] + g.g22 * w0[1]};
}

GreensScalars greens_scalar_integrals(double t, const SemigroupParams& p) {
    // d/dt em = |xi|^2 ed and d/dt ed = -mu|xi|^2 ed - em give
    //   int ed = (em(t)+1)/|xi|^2,  int em = -ed(t) - mu (em(t)+1).
    double x2 = p.xi_mag * p.xi_mag;
    if (x2 == 0.0)
        return {0.5 * t * t, -t};
    GreensScalars s = greens_scalars(t, p);
    double ied = (s.em + 1.0) / x2;
    return {ied, -s.ed - p.mu * (s.em + 1.0)};
}

AsymptoticConfig default_asymptotics(double mu) {
    return {1.0 / mu, 0.9 / mu, 2.5, 1.5};
}

GreensMatrix asymptotic_greens(double t, const SemigroupParams& p, const AsymptoticConfig& cfg) {
    const double x = p.xi_mag;
    const double x2 = x * x;
    if (x < cfg.eta) {
        double b = 0.5 * std::sqrt(std::max(0.0, 4.0 * x2 - p.mu * p.mu * x2 * x2));
        double elb = std::exp(-0.5 * p.mu * x2 * t);
        double sb = b * t < 1e-8 ? t * (1.0 - (b * t) * (b * t) / 6.0) : std::sin(b * t) / b;
        double cb = std::cos(b * t);
        double ed = elb * sb;
        double em = elb * (-cb - 0.5 * p.mu * x2 * sb);
        return {Cplx(-p.mu * x2 * ed - em), Cplx(x * ed), Cplx(-x * ed), Cplx(-em)};
    }
    double env = std::exp(-cfg.gamma * t);
    double ed_env = cfg.c_ed / x2 * env;
    double em_env = cfg.c_em * env;
    return {Cplx(p.mu * x2 * ed_env + em_env), Cplx(x * ed_env), Cplx(x * ed_env), Cplx(em_env)};
}

AsymptoticConfig fit_high_frequency_envelope(double mu, const std::vector<double>& xi_mags,
                                             const std::vector<double>& times) {
    double slowest = std::numeric_limits<double>::infinity();
    for (double x : xi_mags) {
        auto [lp, lm] = eigenvalues({mu, x});
        slowest = std::min(slowest, -lp.real());
    }
    AsymptoticConfig cfg = default_asymptotics(mu);
    cfg.gamma = 0.99 * slowest;
    double c_ed = 0.0, c_em = 0.0;
    for (double x : xi_mags) {
        for (double t : times) {
            GreensScalars s = greens_scalars(t, {mu, x});
            double grow = std::exp(cfg.gamma * t);
            c_ed = std::max(c_ed, std::abs(s.ed) * x * x * grow);
            c_em = std::max(c_em, std::abs(s.em) * grow);
        }
    }
    cfg.c_ed = c_ed * 1.0000001;
    cfg.c_em = c_em * 1.0000001;
    return cfg;
}

}  // namespace veflab

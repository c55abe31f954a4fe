#include "veflab/decay.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace veflab {

SpectralProfile::SpectralProfile(Shape shape, double amplitude, double width, double cutoff)
    : shape_(shape), amplitude_(amplitude), width_(width), cutoff_(cutoff) {
    if (!(amplitude_ >= 0.0) || !(width_ > 0.0))
        throw std::invalid_argument("SpectralProfile: bad amplitude/width");
}

double SpectralProfile::eval(double r) const {
    double g = amplitude_ * std::exp(-(r / width_) * (r / width_));
    if (shape_ == Shape::kGaussian)
        return g;
    // identically zero on [0, cutoff], smooth bump exp(-width/(r-cutoff)) beyond
    if (r <= cutoff_)
        return 0.0;
    return g * std::exp(-width_ / (r - cutoff_));
}

namespace {

double surface_measure(int dim, double r) {
    return dim == 3 ? 4.0 * M_PI * r * r : 2.0 * M_PI * r;
}

double integrand(const SpectralProfile& p, double t, int alpha, double mu, int dim, double r) {
    GreensScalars s = greens_scalars(t, {mu, r});
    double mu_x2 = mu * r * r;
    double g11 = -mu_x2 * s.ed - s.em;
    double g12 = r * s.ed;
    double g21 = -g12;
    double g22 = -s.em;
    double wu = p.u_amp(r), wn = p.n_amp(r);
    double u = g11 * wu + g12 * wn;
    double n = g21 * wu + g22 * wn;
    double weight = 1.0;
    for (int k = 0; k < alpha; ++k)
        weight *= r * r;
    return surface_measure(dim, r) * weight * (u * u + n * n);
}

}  // namespace

double linear_l2_norm(const SpectralProfile& profile, double t, int alpha_weight, double mu,
                      int dim, const RadialQuadratureParams& qp) {
    if (dim != 2 && dim != 3)
        throw std::invalid_argument("linear_l2_norm: dim must be 2 or 3");
    if (alpha_weight < 0)
        throw std::invalid_argument("linear_l2_norm: alpha_weight must be >= 0");
    auto f = [&](double r) { return integrand(profile, t, alpha_weight, mu, dim, r); };

    QuadratureConfig qc;
    qc.rel_tol = qp.rel_tol;
    qc.max_panels = qp.max_panels;

    // The oscillation cos(bt), b ~ r, has radial wavelength 2 pi / t; resolve
    // it where the heat factor e^{-mu r^2 t} is alive.
    double R = qp.radius;
    double r_fine = t > 1.0 ? std::min(R, std::sqrt(80.0 / (mu * t)) + 4.0 * M_PI / t) : R;
    double width = t > 1.0 ? M_PI / (4.0 * t) : R / 64.0;
    QuadratureResult total = integrate_adaptive(f, radial_breakpoints(R, r_fine, width), qc);

    // Tail control: extend R until [R, 2R] contributes less than the bound;
    // growing tail contributions signal a non-integrable profile.
    double tail_prev = -1.0;
    for (int rounds = 0; rounds < 12; ++rounds) {
        std::vector<double> pts{R, 1.25 * R, 1.5 * R, 2.0 * R};
        QuadratureResult tail = integrate_adaptive(f, pts, qc);
        if (std::abs(tail.value) <= qp.tail_rel_bound * std::max(std::abs(total.value), 1e-300))
            break;
        if (tail_prev >= 0.0 && std::abs(tail.value) >= tail_prev)
            throw std::domain_error(
                "linear_l2_norm: profile not integrable against the weight; tail over [R,2R] = " +
                std::to_string(tail.value) + " at R = " + std::to_string(R));
        tail_prev = std::abs(tail.value);
        total.value += tail.value;
        R *= 2.0;
    }
    return std::sqrt(std::max(0.0, total.value));
}

DecaySeries decay_series(const SpectralProfile& profile, const std::vector<double>& times,
                         int alpha_weight, double mu, int dim, const RadialQuadratureParams& qp,
                         int threads) {
    DecaySeries out;
    out.times = times;
    out.alpha = alpha_weight;
    out.norms.assign(times.size(), 0.0);
    int nthreads = std::max(1, threads);
    if (nthreads == 1) {
        for (std::size_t i = 0; i < times.size(); ++i)
            out.norms[i] = linear_l2_norm(profile, times[i], alpha_weight, mu, dim, qp);
        return out;
    }
    std::vector<std::thread> pool;
    std::size_t chunk = (times.size() + nthreads - 1) / nthreads;
    for (int w = 0; w < nthreads; ++w) {
        std::size_t lo = w * chunk, hi = std::min(times.size(), lo + chunk);
        if (lo >= hi)
            break;
        pool.emplace_back([&, lo, hi] {
            for (std::size_t i = lo; i < hi; ++i)
                out.norms[i] = linear_l2_norm(profile, times[i], alpha_weight, mu, dim, qp);
        });
    }
    for (auto& th : pool)
        th.join();
    return out;
}

SlopeFit fit_decay_exponent(const DecaySeries& series, double t_lo, double t_hi) {
    std::vector<double> x, y;
    for (std::size_t i = 0; i < series.times.size(); ++i) {
        double t = series.times[i];
        if (t < t_lo || t > t_hi)
            continue;
        if (!(series.norms[i] > 0.0))
            throw std::invalid_argument("fit_decay_exponent: nonpositive norm in window");
        x.push_back(std::log1p(t));
        y.push_back(std::log(series.norms[i]));
    }
    const std::size_t n = x.size();
    if (n < 8)
        throw std::invalid_argument("fit_decay_exponent: need at least 8 samples in window");
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0.0)
        throw std::invalid_argument("fit_decay_exponent: degenerate window");
    double slope = sxy / sxx;
    double ssr = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double e = y[i] - my - slope * (x[i] - mx);
        ssr += e * e;
    }
    double se = n > 2 ? std::sqrt(ssr / (static_cast<double>(n - 2) * sxx)) : 0.0;
    return {slope, se, n};
}

LowerBoundReport lower_bound_certificate(const SpectralProfile& profile,
                                         const std::vector<double>& times, double mu, int dim,
                                         double rho, const RadialQuadratureParams& qp) {
    if (times.empty())
        throw std::invalid_argument("lower_bound_certificate: empty time set");
    if (!(rho > 0.0) || !(rho <= 1.0))
        throw std::invalid_argument("lower_bound_certificate: rho must lie in (0,1]");
    const double rate = dim == 3 ? 0.75 : 0.5;
    LowerBoundReport rep;
    rep.rho = rho;
    rep.t0 = times.front();
    rep.t_end = times.back();
    rep.times = times;
    rep.m_values.reserve(times.size());
    for (double t : times) {
        double norm = linear_l2_norm(profile, t, 0, mu, dim, qp);
        rep.m_values.push_back(std::pow(1.0 + t, rate) * norm);
    }
    rep.min_m = *std::min_element(rep.m_values.begin(), rep.m_values.end());
    rep.max_m = *std::max_element(rep.m_values.begin(), rep.m_values.end());
    rep.margin = rep.max_m > 0.0 ? rep.min_m / rep.max_m : 0.0;
    rep.pass = rep.min_m >= rho * rep.max_m && rep.max_m > 0.0;
    if (!rep.pass) {
        for (std::size_t i = 0; i < rep.m_values.size(); ++i) {
            if (rep.m_values[i] < rho * rep.max_m) {
                rep.violating_time = rep.times[i];
                break;
            }
        }
    }
    // earliest suffix [t0', T] on which the certificate holds
    {
        double smin = rep.m_values.back(), smax = rep.m_values.back();
        std::optional<double> earliest;
        for (std::size_t i = rep.m_values.size(); i-- > 0;) {
            smin = std::min(smin, rep.m_values[i]);
            smax = std::max(smax, rep.m_values[i]);
            if (smax > 0.0 && smin >= rho * smax)
                earliest = rep.times[i];
        }
        rep.earliest_pass = earliest;
    }
    return rep;
}

std::vector<double> logspace(double lo, double hi, std::size_t n) {
    std::vector<double> out(n);
    if (n == 1) {
        out[0] = lo;
        return out;
    }
    double llo = std::log10(lo), lhi = std::log10(hi);
    for (std::size_t i = 0; i < n; ++i)
        out[i] = std::pow(10.0, llo + (lhi - llo) * static_cast<double>(i) / (n - 1));
    return out;
}

}  // namespace veflab

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "veflab/quadrature.hpp"
#include "veflab/semigroup.hpp"

namespace veflab {

/// Radial spectral data for the pair components (u_i, n_i): bounded radial
/// amplitudes r -> w(r) for each slot, plus the optional low-frequency floor
/// certificate (|w| >= certified_floor on [0, xi_floor]).
class SpectralProfile {
  public:
    enum class Shape { kGaussian, kHighPass };

    SpectralProfile() = default;
    SpectralProfile(Shape shape, double amplitude, double width, double cutoff);

    double u_amp(double r) const { return eval(r); }
    double n_amp(double r) const { return eval(r); }

    Shape shape() const { return shape_; }
    double amplitude() const { return amplitude_; }
    double linf_bound() const { return amplitude_; }

    double c0 = 0.0;              // asserted floor (0 disables)
    double xi_floor = 0.1;        // floor interval [0, xi_floor]
    double certified_floor = 0.0; // measured min over the floor interval

  private:
    double eval(double r) const;
    Shape shape_ = Shape::kGaussian;
    double amplitude_ = 1.0;
    double width_ = 1.0;   // Gaussian: exp(-(r/width)^2)
    double cutoff_ = 0.0;  // high-pass: identically zero on [0, cutoff]
};

struct DecaySeries {
    std::vector<double> times;
    std::vector<double> norms;
    int alpha = 0;
};

struct RadialQuadratureParams {
    double radius = 8.0;            // tail cutoff R
    double tail_rel_bound = 1e-12;  // required tail fraction before extending R
    double rel_tol = 1e-9;
    std::size_t max_panels = 200000;
};

/// ( int_{R^d} |xi|^{2 alpha} |G(t,|xi|) w0(|xi|)|^2 dxi )^{1/2} by adaptive
/// radial quadrature, with surface measure 4 pi r^2 (3D) or 2 pi r (2D) and
/// oscillation-resolving panels of width <= pi/(4t) near r = 0.
/// Throws std::domain_error with the measured tail growth when the profile
/// is not integrable against the weight.
double linear_l2_norm(const SpectralProfile& profile, double t, int alpha_weight, double mu,
                      int dim, const RadialQuadratureParams& qp = {});

DecaySeries decay_series(const SpectralProfile& profile, const std::vector<double>& times,
                         int alpha_weight, double mu, int dim,
                         const RadialQuadratureParams& qp = {}, int threads = 1);

struct SlopeFit {
    double slope = 0.0;
    double stderr_slope = 0.0;
    std::size_t samples = 0;
};

/// Ordinary least squares of log(norm) against log(1+t) over the window.
SlopeFit fit_decay_exponent(const DecaySeries& series, double t_lo, double t_hi);

struct LowerBoundReport {
    double rho = 0.0;
    double t0 = 0.0;
    double t_end = 0.0;
    double min_m = 0.0;
    double max_m = 0.0;
    bool pass = false;
    std::optional<double> violating_time;
    std::optional<double> earliest_pass;  // earliest t0' whose suffix certifies
    double margin = 0.0;                  // min_m/max_m
    std::vector<double> times;
    std::vector<double> m_values;  // (1+t)^rate * norm(t)
};

/// Certify min m(t) >= rho * max m(t) for m(t) = (1+t)^{d/4} ||(u,n)(t)||_L2
/// (exponent 3/4 in 3D, 1/2 in 2D) over the given times.
LowerBoundReport lower_bound_certificate(const SpectralProfile& profile,
                                         const std::vector<double>& times, double mu, int dim,
                                         double rho, const RadialQuadratureParams& qp = {});

std::vector<double> logspace(double lo, double hi, std::size_t n);

}  // namespace veflab

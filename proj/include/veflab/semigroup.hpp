#pragma once

#include <array>
#include <complex>
#include <utility>
#include <vector>

namespace veflab {

/// Parameters of the 2x2 per-mode block: symbol
///   A(xi) = [ -mu|xi|^2,  |xi| ]
///           [   -|xi|  ,   0   ]
/// acting on the pairs (u_i, n_i) and (Omega_ij, EE_ij).
struct SemigroupParams {
    double mu = 1.0;   // viscosity, > 0
    double xi_mag = 0.0;  // |xi| >= 0
};

struct SemigroupEval {
    std::complex<double> lambda_plus;
    std::complex<double> lambda_minus;
    // 2x2 spectral projections, row-major.
    std::array<std::complex<double>, 4> p_plus;
    std::array<std::complex<double>, 4> p_minus;
    bool degenerate = false;  // |xi| within eps_disc of the double eigenvalue 2/mu
};

/// Exact propagator entries of exp(t A(xi)); always real.
struct GreensMatrix {
    std::complex<double> g11, g12, g21, g22;
};

/// Relative discriminant threshold for the confluent (double-eigenvalue)
/// switch: |mu^2|xi|^4 - 4|xi|^2| < eps_disc * max(1, mu^2|xi|^4).
inline constexpr double kEpsDisc = 1e-8;

/// Eigenvalues lambda_{+/-} of A(xi): the roots of
/// lambda^2 + mu|xi|^2 lambda + |xi|^2 = 0, complex for |xi| < 2/mu and
/// real for |xi| >= 2/mu; lambda_plus carries the + branch.
std::pair<std::complex<double>, std::complex<double>> eigenvalues(const SemigroupParams& p);

/// Eigenvalues plus spectral projections P+- = (A - lambda_-+ I)/(lambda_+- - lambda_-+).
/// In the degenerate regime the projections are not defined; the flag is set
/// and both are filled with I/2 (callers must branch on `degenerate`).
SemigroupEval semigroup_eval(const SemigroupParams& p);

/// exp(t A(xi)) evaluated in closed form, with a series-switched confluent
/// branch near the double eigenvalue.
GreensMatrix greens_function(double t, const SemigroupParams& p);

/// G(t) w0.
std::array<std::complex<double>, 2> propagate_pair(const std::array<std::complex<double>, 2>& w0,
                                                   double t, const SemigroupParams& p);

/// Scalar building blocks of G(t):
///   ed = (e^{l+ t} - e^{l- t}) / (l+ - l-)
///   em = (l- e^{l+ t} - l+ e^{l- t}) / (l+ - l-)
/// so that g11 = -mu|xi|^2 ed - em, g12 = |xi| ed, g21 = -|xi| ed, g22 = -em.
/// Real for all (t, mu, |xi|); exposed for the quadrature hot path.
struct GreensScalars {
    double ed;
    double em;
};
GreensScalars greens_scalars(double t, const SemigroupParams& p);

/// Closed-form integrals int_0^t ed, int_0^t em (used by tests to check the
/// identity int_0^t g11 = -g21(t)/|xi|, int_0^t g12 = (1 - g22(t))/|xi|).
GreensScalars greens_scalar_integrals(double t, const SemigroupParams& p);

/// Validation-only approximants of G.
/// Low branch (|xi| < eta): the oscillatory closed form
///   ed ~ e^{-mu|xi|^2 t/2} sin(bt)/b,
///   em ~ e^{-mu|xi|^2 t/2} (-cos(bt) - (mu|xi|^2/(2b)) sin(bt)),
/// with b = sqrt(4|xi|^2 - mu^2|xi|^4)/2 and sin(bt)/b -> t as b -> 0.
/// High branch (|xi| >= eta): entrywise envelope magnitudes
///   |g11|,|g22| <= c_em e^{-gamma t}, |g12|,|g21| <= c_ed |xi|^{-1} e^{-gamma t}
/// with (gamma, c_ed, c_em) from fit_high_frequency_envelope.
struct AsymptoticConfig {
    double eta;       // low/high split, in (0, 2/mu); default 1/mu
    double gamma;     // fitted high-frequency decay rate
    double c_ed;      // fitted O(1) constant for the ed-type entries (times |xi|^{-2})
    double c_em;      // fitted O(1) constant for the em-type entries
};
AsymptoticConfig default_asymptotics(double mu);

GreensMatrix asymptotic_greens(double t, const SemigroupParams& p, const AsymptoticConfig& cfg);

/// Fit (gamma, c_ed, c_em) so that the high-branch envelopes bound the exact
/// entries on the sampled band xi_mags x times. gamma is 0.99 times the
/// slowest exact modal decay rate -Re(lambda_plus) on the band.
AsymptoticConfig fit_high_frequency_envelope(double mu, const std::vector<double>& xi_mags,
                                             const std::vector<double>& times);

}  // namespace veflab

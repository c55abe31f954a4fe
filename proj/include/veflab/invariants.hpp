#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "veflab/state.hpp"

namespace veflab {

/// One row of the structural-invariant monitor.
struct InvariantReport {
    double t = 0.0;
    double det_dev = 0.0;      // max |det(E+I) - 1|
    double divFT_norm = 0.0;   // || div E^T ||_L2
    double piola_res = 0.0;    // L2 norm of the compatibility-identity residual
    double energy = 0.0;       // (||u||^2 + ||E||^2)/2
    double dissipation = 0.0;  // mu ||grad u||^2
    double G = 0.0;
    double H = 0.0;
    double kappa = 0.0;
};

/// Pointwise physical-space determinant constraint, max |det(E+I) - 1|;
/// E is dealiased before the transform so the polynomial products stay
/// quadrature-clean.
double det_deviation(const SpectralField& E);

/// || d_i E_ij ||_L2 (divergence of the transpose under the fixed convention).
double div_FT_norm(const SpectralField& E);

/// L2 norm over all (i,j,m) of
///   d_m E_ij - d_j E_im - (E_lj d_l E_im - E_lm d_l E_ij),
/// derivatives spectral, inputs dealiased.
double piola_residual(const SpectralField& E);

double energy(const State& s);
double dissipation(const State& s);

/// Real L2 pairing (Lambda Omega, Delta Ebb) entering G and H.
double cross_term(const State& s);

/// G = (||u||^2 + ||E||^2 + ||Du||^2 + ||DE||^2)/2 + kappa (Lambda Omega, Delta Ebb)
double lyapunov_G(const State& s, double kappa);
/// H = (||Du||^2 + ||DE||^2)/2 + kappa (Lambda Omega, Delta Ebb)
double functional_H(const State& s, double kappa);

InvariantReport evaluate_invariants(const State& s, double kappa);

/// Largest kappa <= kappa_max for which
///   (||u||_H2^2 + ||E||_H2^2)/4 <= G <= ||u||_H2^2 + ||E||_H2^2
/// holds on a probe set of random states plus cross-term-aligned adversarial
/// states on the given grid.
double select_kappa(const Grid& grid, double mu, double kappa_max, std::uint64_t seed);

/// Centered-difference residual of d/dt energy + dissipation on >= 3 aligned
/// snapshots; entry k corresponds to snapshot k+1.
std::vector<double> energy_law_residual(const std::vector<State>& segment);

struct HodgeEquivalenceReport {
    bool skipped = false;
    std::string reason;
    bool degenerate = false;   // ||n|| vanishes while ||E|| does not
    double ratio_l2 = 1.0;     // ||E|| / ||n||
    double ratio_grad = 1.0;   // ||grad E|| / ||grad n||
    double ratio_lap = 1.0;    // ||Delta E|| / ||Delta Ebb||
    double e_h2 = 0.0;
};

/// Two-sided comparability of ||E|| with ||n|| (and gradients) on small-data
/// states; requires ||E||_H2 below the smallness threshold.
HodgeEquivalenceReport hodge_equivalence_check(const State& s, double smallness = 0.1);

}  // namespace veflab

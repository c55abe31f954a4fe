#pragma once

#include <algorithm>
#include <cstdint>
#include <string>

#include "veflab/decay.hpp"
#include "veflab/state.hpp"

namespace veflab {

struct DataRecipe {
    enum class Kind { kZeroStrain, kLagrangianMap, kSpectralProfile };
    Kind kind = Kind::kZeroStrain;
    double delta = 1e-2;
    std::uint64_t seed = 1;
    int band = 4;             // active low-frequency band |k| <= band
    double flow_time = 1.0;   // Lagrangian map only
    double ode_tol = 1e-12;   // Lagrangian map only
    double c0 = 0.0;          // profiles only
    double zeta = 0.5;        // profiles only: admissibility c0 <= delta^zeta
    std::string shape = "gaussian";
};

/// Construction report: achieved residuals and bookkeeping for the manifest.
/// Measured residuals below residual_floor are reported as-is but cannot be
/// trusted past the construction's own accuracy target; stability envelopes
/// should compare against max(measured, residual_floor).
struct DataReport {
    double det_dev = 0.0;
    double divFT_norm = 0.0;
    double piola_res = 0.0;
    double u_h2 = 0.0;
    double e_h2 = 0.0;
    double min_det_flow = 1.0;   // min det of the flow-map gradient
    double ode_error = 0.0;      // step-doubling estimate on trajectories
    double interp_residual = 0.0;  // max |phi(X*) - x| over Eulerian nodes
    double residual_floor = 0.0;   // the recipe's ode_tol (accuracy target)

    double baseline(double measured) const { return std::max(measured, residual_floor); }
};

struct ConstructedData {
    State state;
    DataReport report;
};

/// u0: delta-normalized random band-limited divergence-free field; E0 = 0.
ConstructedData make_zero_strain(double delta, std::uint64_t seed, const Grid& grid, int band = 4);

/// E0 = grad(flow map) - I for the time-flow_time map of a steady
/// band-limited divergence-free field, pushed forward to the Eulerian grid;
/// u0 an independent divergence-free field sized so that
/// ||u0||_H2 + ||E0||_H2 = delta.
ConstructedData make_lagrangian_strain(double delta, std::uint64_t seed, const Grid& grid,
                                       double flow_time, double ode_tol, int band = 4);

ConstructedData make_state(const DataRecipe& recipe, const Grid& grid, double mu);

/// Radial profile with |w(0)| = c0 and the floor certified on [0, xi_floor]
/// within a 5% droop allowance. Throws when c0 exceeds the delta^zeta budget
/// or the requested shape cannot carry a positive floor.
SpectralProfile make_profile(double delta, double c0, double zeta,
                             const std::string& shape = "gaussian");

/// Add band-limited noise of total L2 size eps to a state, split evenly
/// between a divergence-free velocity part and a strain part.
void add_perturbation(State& s, double eps, std::uint64_t seed, int band = 3);

}  // namespace veflab

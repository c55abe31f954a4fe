#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "veflab/solver.hpp"
#include "veflab/state.hpp"

namespace veflab {

struct AdmissibilityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Spatial integrals of the relative-energy remainder integrands at one
/// shared time, for U = u_weak - u_strong, Eb = E_weak - E_strong:
///   r1 = -int (U . grad u) . U
///   r2 = -sum_j int (U . grad) E_j . Eb_j
///        + sum_j int [(Eb_j . grad u) . Eb_j - (E_j (x) Eb_j) : grad U]
/// r2_raw re-evaluates the pre-reduction four-piece form; on data whose
/// transpose divergence does not vanish the two differ by exactly
///   violation = -sum_j int [ (div E^T)_j (E_j.u_weak + u_strong.E_weak_j)
///                            + (div Eb^T)_j (E_j.u_weak) ],
/// which is also returned.
struct Remainders {
    double r1 = 0.0;
    double r2 = 0.0;
    double r2_raw = 0.0;
    double violation = 0.0;
};

Remainders remainders(const State& strong, const State& weak);

/// h(t) = |grad u|_Linf + |grad E|_Linf + |E|_Linf^2 of the strong state.
double h_coefficient(const State& strong);

struct GronwallConfig {
    double tol_energy = 0.05;     // admissibility slack on the energy inequality;
                                  // the trapezoid dissipation integral carries an
                                  // O(dt^2 (diss/E)^2) relative error that this
                                  // must absorb on dissipation-dominated data
    double envelope_slack = 0.1;  // multiplicative slack on the Gronwall envelope
    double same_data_rel0 = 1e-14;  // below this (x energy scale) treat as same-data
    double same_data_tol = 1e-10;   // same-data pass bound (x energy scale)
};

struct RelativeEnergyReport {
    std::vector<double> times;
    std::vector<double> rel_energy;  // (||U||^2 + ||Eb||^2)/2
    std::vector<double> grad_diff;   // cumulative mu int ||grad U||^2
    std::vector<double> r1;
    std::vector<double> r2;
    std::vector<double> h;
    std::vector<double> envelope;    // rel0 * exp(C int h)
    double c_fit = 0.0;
    double rel0 = 0.0;
    bool same_data = false;
    bool pass = false;
    std::string note;
};

/// Relative-energy certificate over two snapshot-aligned trajectories.
/// Trajectories violating the energy inequality are rejected
/// (AdmissibilityError); misaligned snapshot times are an error.
RelativeEnergyReport gronwall_certificate(const Trajectory& strong, const Trajectory& weak,
                                          const GronwallConfig& cfg = {});

}  // namespace veflab

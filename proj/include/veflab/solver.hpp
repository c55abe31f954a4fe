#pragma once

#include <functional>
#include <stdexcept>
#include <vector>

#include "veflab/state.hpp"

namespace veflab {

struct CflError : std::runtime_error {
    CflError(double dt, double dt_max)
        : std::runtime_error("time step " + std::to_string(dt) +
                             " violates the CFL bound; use dt <= " + std::to_string(dt_max)),
          suggested_dt(dt_max) {}
    double suggested_dt;
};

struct BlowupError : std::runtime_error {
    explicit BlowupError(double when)
        : std::runtime_error("solution blew up at t = " + std::to_string(when)), t(when) {}
    double t;
};

struct StepControls {
    double c_cfl = 0.5;        // dt <= c_cfl * dx / max(|u|_inf, eps_u)
    double eps_u = 1e-6;
    bool linear_only = false;  // drop g and h (exact per-mode propagation)
};

/// g = P(-u.grad u + div(E E^T)), h = -u.grad E + (grad u) E, products formed
/// in physical space under the 2/3 rule (inputs and outputs dealiased).
struct Nonlinearity {
    SpectralField g;  // rank 1
    SpectralField h;  // rank 2
};
Nonlinearity compute_nonlinearities(const State& s);

/// One step of the two-stage exponential integrator: the pairs (u_i, n_i)
/// ride the exact propagator G(dt, xi), the row-curl part of E is constant
/// under the linear flow, and the nonlinearity enters through trapezoidal
/// Duhamel weights (predictor at the full step). Output is Leray-projected
/// and Hermitian-symmetrized.
State step(const State& s, double dt, const StepControls& controls = {});

/// Zero-mean pressure from Delta p = div(-u.grad u + div(E + E E^T)).
SpectralField recover_pressure(const State& s);

struct RunOptions {
    StepControls controls;
    int snapshot_every = 1;       // store every k-th step
    double blowup_factor = 10.0;  // abort when ||.||_H2 exceeds factor x initial
    std::function<void(const State&)> on_snapshot;  // read-only observer
};

struct Trajectory {
    std::vector<State> snapshots;
    double dt = 0.0;
};

/// March n = round(T/dt) steps from s0, persisting snapshots at the cadence
/// (t=0 and the final state always included).
Trajectory run(const State& s0, double T, double dt, const RunOptions& options = {});

}  // namespace veflab

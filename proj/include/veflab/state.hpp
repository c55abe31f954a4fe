#pragma once

#include "veflab/field.hpp"

namespace veflab {

/// Simulation state: divergence-free velocity u, strain E, time, viscosity.
struct State {
    SpectralField u;  // rank 1
    SpectralField E;  // rank 2
    double t = 0.0;
    double mu = 1.0;
};

/// Derived variables that block-diagonalize the linearized dynamics:
///   n     = Lambda^{-1} (div E)            (rank 1)
///   Omega = Lambda^{-1} (grad u - grad^T u) (rank 2, antisymmetric)
///   Ebb   = E^T - E                         (rank 2, antisymmetric)
struct DecomposedState {
    SpectralField n;
    SpectralField Omega;
    SpectralField Ebb;
};

DecomposedState decompose(const State& s);

}  // namespace veflab

#pragma once

#include <functional>
#include <vector>

namespace veflab {

/// Adaptive panel integrator on [a,b] built on the Gauss(7)/Kronrod(15) pair.
/// The caller seeds the panel list (e.g. to resolve an oscillation scale);
/// panels are then bisected worst-first until the summed Kronrod-Gauss error
/// estimate meets max(abs_tol, rel_tol*|I|) or the panel budget is exhausted.
/// Deterministic for a given configuration.
struct QuadratureConfig {
    double rel_tol = 1e-10;
    double abs_tol = 1e-14;
    std::size_t max_panels = 200000;
};

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
    std::size_t panels = 0;
    bool converged = false;
};

QuadratureResult integrate_adaptive(const std::function<double(double)>& f,
                                    const std::vector<double>& breakpoints,
                                    const QuadratureConfig& cfg = {});

/// Breakpoints for [0, R] with panel width <= max_width_osc on [0, r_fine]
/// (the oscillation-resolving zone) and geometric coarsening beyond.
std::vector<double> radial_breakpoints(double R, double r_fine, double max_width_osc);

}  // namespace veflab

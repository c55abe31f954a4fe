#include "veflab/state.hpp"

#include <cmath>

namespace veflab {

DecomposedState decompose(const State& s) {
    const Grid& g = s.u.grid();
    const int d = g.dim();
    DecomposedState out{SpectralField(g, 1), SpectralField(g, 2), SpectralField(g, 2)};
    for (std::size_t m = 0; m < s.u.num_modes(); ++m) {
        double x2 = g.xi_sq(m);
        if (x2 == 0.0)
            continue;  // n, Omega vanish at the zero mode by policy
        double x = std::sqrt(x2);
        auto xi = g.xi_vec(m);
        for (int i = 0; i < d; ++i) {
            Complex acc(0.0, 0.0);
            for (int j = 0; j < d; ++j)
                acc += Complex(0.0, xi[j]) * s.E.tensor_at(i, j, m);
            out.n.at(i, m) = acc / x;
            for (int j = 0; j < d; ++j)
                out.Omega.tensor_at(i, j, m) =
                    (Complex(0.0, xi[j]) * s.u.at(i, m) - Complex(0.0, xi[i]) * s.u.at(j, m)) / x;
        }
    }
    for (std::size_t m = 0; m < s.E.num_modes(); ++m)
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
                out.Ebb.tensor_at(i, j, m) = s.E.tensor_at(j, i, m) - s.E.tensor_at(i, j, m);
    return out;
}

}  // namespace veflab

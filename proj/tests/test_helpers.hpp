#pragma once

#include <cstdint>

#include "veflab/field.hpp"
#include "veflab/operators.hpp"
#include "veflab/rng.hpp"

namespace veflab::test {

/// Random Hermitian-symmetric band-limited field: complex Gaussian
/// coefficients on modes with max |k_a| <= band (zero mode included only if
/// with_mean), symmetrized, scaled to unit L2 norm.
inline SpectralField random_field(const Grid& g, int rank, int band, std::uint64_t seed,
                                  bool with_mean = false) {
    SpectralField f(g, rank);
    CounterRng rng(seed);
    for (std::size_t m = 0; m < f.num_modes(); ++m) {
        auto idx = g.unravel(m);
        bool in_band = true;
        bool zero = true;
        for (int a = 0; a < g.dim(); ++a) {
            int k = g.freq(idx[a]);
            if (k > band || k < -band)
                in_band = false;
            if (k != 0)
                zero = false;
        }
        if (!in_band || (zero && !with_mean))
            continue;
        for (int c = 0; c < f.ncomp(); ++c)
            f.at(c, m) = Complex(rng.next_normal(), rng.next_normal());
    }
    enforce_hermitian(f);
    double nrm = l2_norm(f);
    if (nrm > 0.0)
        f *= 1.0 / nrm;
    return f;
}

/// Single real mode a*cos(xi_k . x) placed Hermitianly at +-k.
inline SpectralField single_mode(const Grid& g, int rank, const std::array<int, 3>& k,
                                 double amplitude, int comp = 0) {
    SpectralField f(g, rank);
    std::size_t m = 0;
    for (int a = 0; a < g.dim(); ++a) {
        int idx = k[a] >= 0 ? k[a] : k[a] + g.n();
        m = m * g.n() + static_cast<std::size_t>(idx);
    }
    // cos: half the amplitude at +k and -k; unnormalized-forward convention
    // means physical amplitude a requires coefficient a*N^d/2.
    double scale = 0.5 * amplitude * static_cast<double>(g.num_points());
    f.at(comp, m) = Complex(scale, 0.0);
    f.at(comp, g.conjugate_index(m)) = Complex(scale, 0.0);
    return f;
}

}  // namespace veflab::test

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <stdexcept>

namespace veflab {

/// Uniform periodic grid on [0,L)^d with the standard DFT wavenumber lattice
/// xi = 2*pi*k/L, k in {-N/2, ..., N/2-1} per axis (FFTW frequency order:
/// index i maps to k = i for i <= N/2-1 and k = i-N otherwise).
class Grid {
  public:
    Grid() = default;
    Grid(int dim, int points_per_axis, double box_length);

    int dim() const { return dim_; }
    int n() const { return n_; }
    double length() const { return length_; }

    std::size_t num_points() const { return num_points_; }

    /// Axis index -> integer frequency k.
    int freq(int i) const { return i <= n_ / 2 - 1 ? i : i - n_; }
    /// Axis index -> wavenumber component 2*pi*k/L.
    double xi(int i) const { return dxi_ * freq(i); }
    /// Smallest nonzero |xi| on the lattice.
    double xi_min() const { return dxi_; }
    /// Grid spacing L/N.
    double dx() const { return length_ / n_; }

    /// Decompose a flat row-major mode index into per-axis indices.
    std::array<int, 3> unravel(std::size_t m) const;
    /// Flat index of the mode with negated frequencies (mod N per axis).
    std::size_t conjugate_index(std::size_t m) const;
    /// |xi|^2 of mode m.
    double xi_sq(std::size_t m) const;
    /// Wavenumber vector of mode m (unused axes zero).
    std::array<double, 3> xi_vec(std::size_t m) const;

    /// L^2(Parseval) scaling: ||f||_L2^2 = parseval_factor * sum_k |fhat_k|^2
    /// under the convention forward unnormalized, inverse 1/N^d.
    double parseval_factor() const;
    /// Physical quadrature weight (L/N)^d.
    double cell_volume() const;

    bool operator==(const Grid& o) const {
        return dim_ == o.dim_ && n_ == o.n_ && length_ == o.length_;
    }

  private:
    int dim_ = 0;
    int n_ = 0;
    double length_ = 0.0;
    double dxi_ = 0.0;
    std::size_t num_points_ = 0;
};

}  // namespace veflab

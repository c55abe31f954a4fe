#include "veflab/grid.hpp"

#include <cmath>

namespace veflab {

Grid::Grid(int dim, int points_per_axis, double box_length)
    : dim_(dim), n_(points_per_axis), length_(box_length) {
    if (dim != 2 && dim != 3)
        throw std::invalid_argument("Grid: dim must be 2 or 3");
    if (n_ <= 0 || n_ % 2 != 0)
        throw std::invalid_argument("Grid: points_per_axis must be positive and even");
    if (!(length_ > 0.0))
        throw std::invalid_argument("Grid: box_length must be positive");
    dxi_ = 2.0 * M_PI / length_;
    num_points_ = 1;
    for (int a = 0; a < dim_; ++a)
        num_points_ *= static_cast<std::size_t>(n_);
}

std::array<int, 3> Grid::unravel(std::size_t m) const {
    std::array<int, 3> idx{0, 0, 0};
    for (int a = dim_ - 1; a >= 0; --a) {
        idx[a] = static_cast<int>(m % n_);
        m /= n_;
    }
    return idx;
}

std::size_t Grid::conjugate_index(std::size_t m) const {
    auto idx = unravel(m);
    std::size_t c = 0;
    for (int a = 0; a < dim_; ++a) {
        int neg = idx[a] == 0 ? 0 : n_ - idx[a];
        c = c * n_ + static_cast<std::size_t>(neg);
    }
    return c;
}

double Grid::xi_sq(std::size_t m) const {
    auto idx = unravel(m);
    double s = 0.0;
    for (int a = 0; a < dim_; ++a) {
        double x = xi(idx[a]);
        s += x * x;
    }
    return s;
}

std::array<double, 3> Grid::xi_vec(std::size_t m) const {
    auto idx = unravel(m);
    std::array<double, 3> v{0.0, 0.0, 0.0};
    for (int a = 0; a < dim_; ++a)
        v[a] = xi(idx[a]);
    return v;
}

double Grid::parseval_factor() const {
    // ||f||^2 = int |f|^2 dx = (L/N)^d * sum_x |f(x)|^2 = L^d/N^(2d) * sum_k |fhat_k|^2.
    double f = 1.0;
    for (int a = 0; a < dim_; ++a)
        f *= length_ / (static_cast<double>(n_) * static_cast<double>(n_));
    return f;
}

double Grid::cell_volume() const {
    double f = 1.0;
    for (int a = 0; a < dim_; ++a)
        f *= length_ / n_;
    return f;
}

}  // namespace veflab

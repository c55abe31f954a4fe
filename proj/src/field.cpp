#include "veflab/field.hpp"

#include <cmath>
#include <stdexcept>

#include "veflab/transform.hpp"

namespace veflab {

namespace {
int ncomp_for(int dim, int rank) {
    switch (rank) {
        case 0: return 1;
        case 1: return dim;
        case 2: return dim * dim;
        default: throw std::invalid_argument("SpectralField: rank must be 0, 1 or 2");
    }
}
}  // namespace

int PhysicalField::ncomp() const { return ncomp_for(grid.dim(), rank); }

std::span<double> PhysicalField::comp(int c) {
    return {values.data() + c * grid.num_points(), grid.num_points()};
}
std::span<const double> PhysicalField::comp(int c) const {
    return {values.data() + c * grid.num_points(), grid.num_points()};
}

SpectralField::SpectralField(const Grid& grid, int rank)
    : grid_(grid), rank_(rank), ncomp_(ncomp_for(grid.dim(), rank)) {
    coeffs_.assign(static_cast<std::size_t>(ncomp_) * grid_.num_points(), Complex(0.0, 0.0));
}

std::span<Complex> SpectralField::comp(int c) {
    return {coeffs_.data() + c * num_modes(), num_modes()};
}
std::span<const Complex> SpectralField::comp(int c) const {
    return {coeffs_.data() + c * num_modes(), num_modes()};
}

void SpectralField::set_zero() { std::fill(coeffs_.begin(), coeffs_.end(), Complex(0.0)); }

SpectralField& SpectralField::operator+=(const SpectralField& o) {
    for (std::size_t i = 0; i < coeffs_.size(); ++i)
        coeffs_[i] += o.coeffs_[i];
    return *this;
}
SpectralField& SpectralField::operator-=(const SpectralField& o) {
    for (std::size_t i = 0; i < coeffs_.size(); ++i)
        coeffs_[i] -= o.coeffs_[i];
    return *this;
}
SpectralField& SpectralField::operator*=(double a) {
    for (auto& c : coeffs_)
        c *= a;
    return *this;
}
void SpectralField::axpy(double a, const SpectralField& o) {
    for (std::size_t i = 0; i < coeffs_.size(); ++i)
        coeffs_[i] += a * o.coeffs_[i];
}
void SpectralField::axpy(Complex a, const SpectralField& o) {
    for (std::size_t i = 0; i < coeffs_.size(); ++i)
        coeffs_[i] += a * o.coeffs_[i];
}

double l2_norm_sq(const SpectralField& f) {
    double s = 0.0;
    for (const auto& c : f.data())
        s += std::norm(c);
    return s * f.grid().parseval_factor();
}

double l2_norm(const SpectralField& f) { return std::sqrt(l2_norm_sq(f)); }

double l2_inner(const SpectralField& f, const SpectralField& g) {
    if (f.data().size() != g.data().size())
        throw std::invalid_argument("l2_inner: size mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < f.data().size(); ++i)
        s += std::real(f.data()[i] * std::conj(g.data()[i]));
    return s * f.grid().parseval_factor();
}

namespace {
double weighted_norm(const SpectralField& f, int max_order) {
    const Grid& g = f.grid();
    const std::size_t nm = f.num_modes();
    double s = 0.0;
    for (std::size_t m = 0; m < nm; ++m) {
        double x2 = g.xi_sq(m);
        double w = 1.0;
        if (max_order >= 1) w += x2;
        if (max_order >= 2) w += x2 * x2;
        double a = 0.0;
        for (int c = 0; c < f.ncomp(); ++c)
            a += std::norm(f.at(c, m));
        s += w * a;
    }
    return std::sqrt(s * g.parseval_factor());
}
}  // namespace

double h1_norm(const SpectralField& f) { return weighted_norm(f, 1); }
double h2_norm(const SpectralField& f) { return weighted_norm(f, 2); }

double derivative_norm(const SpectralField& f, int order) {
    const Grid& g = f.grid();
    double s = 0.0;
    for (std::size_t m = 0; m < f.num_modes(); ++m) {
        double w = std::pow(g.xi_sq(m), order);
        double a = 0.0;
        for (int c = 0; c < f.ncomp(); ++c)
            a += std::norm(f.at(c, m));
        s += w * a;
    }
    return std::sqrt(s * g.parseval_factor());
}

double linf_norm(const SpectralField& f) {
    PhysicalField p = to_physical(f);
    const std::size_t np = p.grid.num_points();
    double best = 0.0;
    for (std::size_t x = 0; x < np; ++x) {
        double s = 0.0;
        for (int c = 0; c < p.ncomp(); ++c) {
            double v = p.at(c, x);
            s += v * v;
        }
        best = std::max(best, s);
    }
    return std::sqrt(best);
}

double hermitian_defect(const SpectralField& f) {
    const Grid& g = f.grid();
    double worst = 0.0;
    for (std::size_t m = 0; m < f.num_modes(); ++m) {
        std::size_t c = g.conjugate_index(m);
        if (c < m)
            continue;
        for (int k = 0; k < f.ncomp(); ++k)
            worst = std::max(worst, std::abs(f.at(k, c) - std::conj(f.at(k, m))));
    }
    return worst;
}

}  // namespace veflab

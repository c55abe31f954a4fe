#pragma once

#include <complex>
#include <span>
#include <vector>

#include "veflab/grid.hpp"

namespace veflab {

using Complex = std::complex<double>;

/// Real-space samples of a scalar/vector/tensor field, component-major.
struct PhysicalField {
    Grid grid;
    int rank = 0;
    std::vector<double> values;  // ncomp blocks of grid.num_points()

    int ncomp() const;
    std::span<double> comp(int c);
    std::span<const double> comp(int c) const;
    double& at(int c, std::size_t p) { return values[c * grid.num_points() + p]; }
    double at(int c, std::size_t p) const { return values[c * grid.num_points() + p]; }
};

/// A field stored as complex Fourier coefficients on the truncated lattice.
/// rank 0: scalar (1 component), rank 1: vector (d), rank 2: tensor (d*d,
/// row-major: component i*d+j holds T_ij).
class SpectralField {
  public:
    SpectralField() = default;
    SpectralField(const Grid& grid, int rank);

    const Grid& grid() const { return grid_; }
    int rank() const { return rank_; }
    int ncomp() const { return ncomp_; }
    std::size_t num_modes() const { return grid_.num_points(); }

    std::span<Complex> comp(int c);
    std::span<const Complex> comp(int c) const;
    Complex& at(int c, std::size_t m) { return coeffs_[c * num_modes() + m]; }
    const Complex& at(int c, std::size_t m) const { return coeffs_[c * num_modes() + m]; }
    Complex& tensor_at(int i, int j, std::size_t m) { return at(i * grid_.dim() + j, m); }
    const Complex& tensor_at(int i, int j, std::size_t m) const {
        return at(i * grid_.dim() + j, m);
    }

    std::vector<Complex>& data() { return coeffs_; }
    const std::vector<Complex>& data() const { return coeffs_; }

    void set_zero();

    SpectralField& operator+=(const SpectralField& o);
    SpectralField& operator-=(const SpectralField& o);
    SpectralField& operator*=(double a);
    /// this += a*o
    void axpy(double a, const SpectralField& o);
    void axpy(Complex a, const SpectralField& o);

    friend SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
    friend SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
    friend SpectralField operator*(double s, SpectralField a) { return a *= s; }

  private:
    Grid grid_;
    int rank_ = 0;
    int ncomp_ = 0;
    std::vector<Complex> coeffs_;
};

/// L^2 norm over the box (all components), via Parseval.
double l2_norm(const SpectralField& f);
double l2_norm_sq(const SpectralField& f);
/// Real L^2 inner product (f, g) summed over components.
double l2_inner(const SpectralField& f, const SpectralField& g);
/// Sobolev norms with multipliers: ||f||_Hs^2 = sum over |alpha| in {0,1,2}
/// of the derivative L^2 norms, computed spectrally as (1+|xi|^2+|xi|^4).
double h1_norm(const SpectralField& f);
double h2_norm(const SpectralField& f);
/// Seminorm ||Lambda^s f|| restricted to nonzero modes times |xi|^(2s).
double derivative_norm(const SpectralField& f, int order);

/// Max over grid points of the pointwise Frobenius norm (via inverse FFT).
double linf_norm(const SpectralField& f);

/// Hermitian-symmetry defect: max_k |coeff(-k) - conj(coeff(k))|.
double hermitian_defect(const SpectralField& f);

}  // namespace veflab

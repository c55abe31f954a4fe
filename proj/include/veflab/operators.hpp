#pragma once

#include "veflab/field.hpp"

namespace veflab {

/// Fractional operator Lambda^s: multiply each coefficient by |xi|^s.
/// Zero mode: mapped to 0 for s != 0, unchanged for s == 0.
SpectralField lambda_power(const SpectralField& f, double s);

/// Leray projection, per mode vhat -> (I - xi xi^T/|xi|^2) vhat; zero mode
/// unchanged.
SpectralField leray_project(const SpectralField& v);

/// Row-wise Hodge split of a rank-2 field: first part carries the row
/// divergence (rows parallel to xi), second the row curl (rows orthogonal
/// to xi). Zero mode goes wholly to the divergence part.
struct HodgeParts {
    SpectralField div_part;
    SpectralField curl_part;
};
HodgeParts hodge_decompose(const SpectralField& E);

/// Spectral derivatives under the fixed index conventions:
///   (grad f)_i      = d_i f
///   (tensor_grad u)_ij = d_j u_i
///   (div E)_i       = d_j E_ij   (contraction on the second index)
///   div v           = d_i v_i
/// Nyquist modes (k = -N/2) are zeroed by odd-order derivative multipliers
/// to keep outputs real-representable.
SpectralField grad(const SpectralField& f);
SpectralField tensor_grad(const SpectralField& u);
SpectralField div_tensor(const SpectralField& E);
SpectralField div_vector(const SpectralField& v);
/// Row-wise curl. 3D: rank-2 output, row i = curl of row i. 2D: rank-1
/// output, component i = d_1 E_i2 - d_2 E_i1.
SpectralField curl_rows(const SpectralField& E);
/// Laplacian (multiplier -|xi|^2), any rank.
SpectralField laplacian(const SpectralField& f);

SpectralField transpose(const SpectralField& E);

/// 2/3-rule dealiasing: zero every mode with any |k_i| > N/3 (in place).
void dealias(SpectralField& f);
bool is_dealiased_mode(const Grid& g, std::size_t m);

/// Project onto Hermitian-symmetric coefficients (in place):
/// coeff(k) <- (coeff(k) + conj(coeff(-k)))/2.
void enforce_hermitian(SpectralField& f);

/// Zero the k = 0 coefficient of every component (in place).
void zero_mean(SpectralField& f);

/// max over modes of |xi . vhat(k)| in physical-amplitude units (coefficients
/// divided by N^d); the incompressibility monitor compares this against
/// tol * ||v||_L2.
double max_mode_divergence(const SpectralField& v);

}  // namespace veflab

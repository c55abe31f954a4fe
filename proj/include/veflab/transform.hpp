#pragma once

#include "veflab/field.hpp"

namespace veflab {

/// Forward DFT (unnormalized): fhat_k = sum_x f(x) e^{-i xi_k . x}.
SpectralField to_spectral(const PhysicalField& f);

/// Inverse DFT with 1/N^d: f(x) = N^{-d} sum_k fhat_k e^{+i xi_k . x}.
/// Imaginary parts are discarded; callers pass Hermitian-symmetric data.
PhysicalField to_physical(const SpectralField& f);

/// Round trip defect helper used by tests: max |f - S(P(f))|.
double transform_roundtrip_error(const SpectralField& f);

}  // namespace veflab

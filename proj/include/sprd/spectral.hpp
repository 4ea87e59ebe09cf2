#pragma once

// Real-to-complex transforms on the torus grid. Coefficients use the
// half-spectrum layout (last axis holds k = 0..n/2). Forward transforms are
// unnormalized; inverse transforms divide by the cell count.

#include <array>
#include <complex>
#include <vector>

#include "sprd/torus_field.hpp"

namespace sprd {

using Complex = std::complex<double>;

struct SpectralField {
  Grid grid{};
  std::vector<Complex> coeffs;
};

std::size_t spectral_size(const Grid& grid);

/// Integer wavevectors of every half-spectrum slot; physical wavenumber is
/// 2*pi*k. Cached per grid shape, shared read-only.
const std::vector<std::array<int, kMaxDim>>& wavevectors(const Grid& grid);

/// Multiplicity of each slot in the full spectrum (1 or 2), for Parseval sums.
const std::vector<double>& hermitian_weights(const Grid& grid);

/// 1 where every |k_j| satisfies 3|k_j| < n, else 0 (2/3 rule).
const std::vector<double>& dealias_mask(const Grid& grid);

SpectralField forward(const Field& u);
void forward(const Field& u, SpectralField& out);
Field inverse(const SpectralField& s);
void inverse(const SpectralField& s, Field& out);

/// i * 2*pi*k_axis applied to the coefficients; the Nyquist slot of that axis
/// is zeroed so derivatives of real fields stay real.
void differentiate(const SpectralField& in, int axis, SpectralField& out);

}  // namespace sprd

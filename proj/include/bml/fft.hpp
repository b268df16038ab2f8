/// \file fft.hpp
/// Radix-2 DFT used by the band projections.  Power-of-two sizes only,
/// which the Grid type already guarantees.
#pragma once

#include <complex>
#include <vector>

namespace bml::fft {

using complex = std::complex<double>;

/// In-place DFT of a power-of-two length vector.  The inverse carries the
/// 1/n normalization so that transform(transform(a), inverse) == a.
void transform(std::vector<complex>& a, bool inverse);

/// Row-column transform of an n*n array in lexicographic layout.
void transform2d(std::vector<complex>& a, int n, bool inverse);

} // namespace bml::fft

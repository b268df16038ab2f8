#include "bml/fft.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace bml::fft {

void transform(std::vector<complex>& a, bool inverse)
{
    const std::size_t n = a.size();
    if (n == 0 || (n & (n - 1)) != 0)
        throw std::invalid_argument("fft: length must be a power of two");
    // bit reversal
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = 2 * std::numbers::pi / double(len) * (inverse ? 1 : -1);
        const complex wlen(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            complex w(1);
            for (std::size_t j = 0; j < len / 2; ++j) {
                complex u = a[i + j];
                complex v = a[i + j + len / 2] * w;
                a[i + j] = u + v;
                a[i + j + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
    if (inverse) {
        const double inv = 1.0 / double(n);
        for (auto& z : a) z *= inv;
    }
}

void transform2d(std::vector<complex>& a, int n, bool inverse)
{
    if (a.size() != std::size_t(n) * std::size_t(n))
        throw std::invalid_argument("fft: array is not n*n");
    std::vector<complex> tmp(static_cast<std::size_t>(n));
    // rows
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) tmp[std::size_t(c)] = a[std::size_t(r) * n + c];
        transform(tmp, inverse);
        for (int c = 0; c < n; ++c) a[std::size_t(r) * n + c] = tmp[std::size_t(c)];
    }
    // columns
    for (int c = 0; c < n; ++c) {
        for (int r = 0; r < n; ++r) tmp[std::size_t(r)] = a[std::size_t(r) * n + c];
        transform(tmp, inverse);
        for (int r = 0; r < n; ++r) a[std::size_t(r) * n + c] = tmp[std::size_t(r)];
    }
}

} // namespace bml::fft

/** \file grid.hpp
    \brief Uniform sampling grids and compactly supported sampled functions.

    Everything downstream (Morrey estimators, band projections, difference
    norms) consumes the two types defined here.  Functions are complex-valued
    samples on a uniform lattice over the box [-R, R)^d with d in {1,2}; a
    declared support radius makes zero extension outside the grid legitimate.
*/
#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace bml {

using complex = std::complex<double>;

/// A point in R^d, d <= 2; unused trailing coordinates are zero.
using Point = std::array<double, 2>;

double norm2(const Point& x, int dim);

/// Uniform lattice over [-R, R)^d.  Points along each axis sit at
/// -R + i*dx, i = 0..n-1, dx = 2R/n; flat indices are lexicographic,
/// axis 0 slowest.
struct Grid {
    int dim = 1;      ///< 1 or 2
    double R = 1;     ///< half-width of the box
    int n = 16;       ///< samples per axis, power of two >= 16
    double dx = 0;    ///< 2R/n

    std::size_t size() const {
        return dim == 1 ? std::size_t(n) : std::size_t(n) * std::size_t(n);
    }
    double coord(std::int64_t i) const { return -R + double(i) * dx; }
    Point point(std::size_t flat) const;
    std::size_t flat(std::int64_t i0, std::int64_t i1 = 0) const {
        return dim == 1 ? std::size_t(i0) : std::size_t(i0) * n + std::size_t(i1);
    }
    bool same_layout(const Grid& o) const {
        return dim == o.dim && R == o.R && n == o.n;
    }
};

/// dim in {1,2}, n a power of two >= 16, R > 0; throws std::invalid_argument otherwise.
Grid make_grid(int dim, double R, int n);

/// Complex samples of a compactly supported function on a Grid.
///
/// Invariants checked on construction:
///  - exactly n^d samples,
///  - samples vanish at every grid point with |x| > support_radius,
///  - support_radius <= R/2 unless the margin is explicitly waived
///    (band projections destroy compact support and run with a waived
///    margin; difference operators then refuse shifts that could wrap).
class SampledFunction {
public:
    enum class Margin { required, waived };

    SampledFunction(Grid grid, std::vector<complex> values, double support_radius,
                    Margin margin = Margin::required);

    const Grid& grid() const { return grid_; }
    const std::vector<complex>& values() const { return values_; }
    double support_radius() const { return support_radius_; }
    bool margin_waived() const { return margin_ == Margin::waived; }

    complex value(std::size_t flat) const { return values_[flat]; }
    /// Sample at integer lattice position, zero outside the box (legitimate
    /// because the function vanishes beyond support_radius).
    complex at(std::int64_t i0, std::int64_t i1 = 0) const {
        if (i0 < 0 || i0 >= grid_.n) return {};
        if (grid_.dim == 2 && (i1 < 0 || i1 >= grid_.n)) return {};
        return values_[grid_.flat(i0, i1)];
    }

private:
    Grid grid_;
    std::vector<complex> values_;
    double support_radius_;
    Margin margin_;
};

/// Midpoint-rule L_p integral over the open ball: (sum_{|x_i - c| < r} |f|^p dx^d)^{1/p}.
/// Requires p > 0, r > 0.
double ball_lp_integral(const SampledFunction& f, const Point& center, double radius,
                        double p);

/// Exact sample relocation by a grid-aligned shift; zero fill, no interpolation.
/// Rejects shifts that are not integer multiples of dx per axis and shifts
/// that would push the support outside B(0, R/2).
SampledFunction translate(const SampledFunction& f, const Point& shift);

/// Round a length to the nearest integer multiple of dx; throws if the input
/// is further than tol*dx from the lattice.
std::int64_t aligned_steps(double length, double dx, double tol = 1e-9);

/// Flat binary serialization: header (d, R, n, support_radius as
/// little-endian 64-bit ints/floats) followed by interleaved re/im 64-bit
/// floats in lexicographic grid order.
void save_function(const SampledFunction& f, const std::string& path);
SampledFunction load_function(const std::string& path);

} // namespace bml

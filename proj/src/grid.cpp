#include "bml/grid.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace bml {

double norm2(const Point& x, int dim)
{
    return dim == 1 ? std::abs(x[0]) : std::hypot(x[0], x[1]);
}

Point Grid::point(std::size_t flat) const
{
    if (dim == 1)
        return {coord(std::int64_t(flat)), 0.0};
    return {coord(std::int64_t(flat) / n), coord(std::int64_t(flat) % n)};
}

static bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

Grid make_grid(int dim, double R, int n)
{
    if (dim != 1 && dim != 2)
        throw std::invalid_argument("make_grid: unsupported dimension " + std::to_string(dim));
    if (!(R > 0))
        throw std::invalid_argument("make_grid: half-width must be positive");
    if (n < 16 || !is_pow2(n))
        throw std::invalid_argument("make_grid: n must be a power of two >= 16");
    Grid g;
    g.dim = dim;
    g.R = R;
    g.n = n;
    g.dx = 2 * R / n;
    return g;
}

SampledFunction::SampledFunction(Grid grid, std::vector<complex> values,
                                 double support_radius, Margin margin)
    : grid_(grid), values_(std::move(values)), support_radius_(support_radius), margin_(margin)
{
    if (values_.size() != grid_.size())
        throw std::invalid_argument("SampledFunction: value count does not match the grid");
    if (!(support_radius > 0) || support_radius > grid_.R * std::sqrt(double(grid_.dim)) + grid_.dx)
        throw std::invalid_argument("SampledFunction: support radius outside (0, R*sqrt(d)]");
    if (margin_ == Margin::required && support_radius > grid_.R / 2)
        throw std::invalid_argument("SampledFunction: support radius exceeds the R/2 margin");
    // The declared bound is checked, not assumed.  A bound of R or more means
    // the function fills the box (band projections);
    // there is nothing to verify then.
    if (support_radius_ < grid_.R) {
        for (std::size_t i = 0; i < values_.size(); ++i) {
            if (values_[i] != complex{} && norm2(grid_.point(i), grid_.dim) > support_radius_)
                throw std::invalid_argument(
                    "SampledFunction: nonzero sample outside support radius");
        }
    }
}

double ball_lp_integral(const SampledFunction& f, const Point& center, double radius,
                        double p)
{
    if (!(p > 0)) throw std::invalid_argument("ball_lp_integral: p must be positive");
    if (!(radius > 0)) throw std::invalid_argument("ball_lp_integral: radius must be positive");
    const Grid& g = f.grid();
    const double cell = g.dim == 1 ? g.dx : g.dx * g.dx;
    double acc = 0;
    // Bounding box of the ball in index space, then the exact open-ball test.
    auto lo_idx = [&](double c) {
        return std::int64_t(std::max(0.0, std::floor((c - radius + g.R) / g.dx)));
    };
    auto hi_idx = [&](double c) {
        return std::min<std::int64_t>(g.n - 1, std::int64_t(std::ceil((c + radius + g.R) / g.dx)));
    };
    if (g.dim == 1) {
        for (std::int64_t i = lo_idx(center[0]); i <= hi_idx(center[0]); ++i) {
            double d0 = g.coord(i) - center[0];
            if (std::abs(d0) < radius)
                acc += std::pow(std::abs(f.at(i)), p) * cell;
        }
    } else {
        const double r2 = radius * radius;
        for (std::int64_t i0 = lo_idx(center[0]); i0 <= hi_idx(center[0]); ++i0) {
            double d0 = g.coord(i0) - center[0];
            for (std::int64_t i1 = lo_idx(center[1]); i1 <= hi_idx(center[1]); ++i1) {
                double d1 = g.coord(i1) - center[1];
                if (d0 * d0 + d1 * d1 < r2)
                    acc += std::pow(std::abs(f.at(i0, i1)), p) * cell;
            }
        }
    }
    return std::pow(acc, 1.0 / p);
}

std::int64_t aligned_steps(double length, double dx, double tol)
{
    double steps = length / dx;
    double rounded = std::round(steps);
    if (std::abs(steps - rounded) > tol)
        throw std::invalid_argument("offset is not grid-aligned");
    return std::int64_t(rounded);
}

SampledFunction translate(const SampledFunction& f, const Point& shift)
{
    const Grid& g = f.grid();
    std::array<std::int64_t, 2> k = {0, 0};
    for (int ax = 0; ax < g.dim; ++ax)
        k[ax] = aligned_steps(shift[ax], g.dx);
    const double new_sr = f.support_radius() + norm2(shift, g.dim);
    if (new_sr > g.R / 2)
        throw std::invalid_argument("translate: shifted support leaves B(0, R/2)");
    std::vector<complex> out(g.size());
    if (g.dim == 1) {
        for (std::int64_t i = 0; i < g.n; ++i)
            out[std::size_t(i)] = f.at(i - k[0]);
    } else {
        for (std::int64_t i0 = 0; i0 < g.n; ++i0)
            for (std::int64_t i1 = 0; i1 < g.n; ++i1)
                out[g.flat(i0, i1)] = f.at(i0 - k[0], i1 - k[1]);
    }
    return SampledFunction(g, std::move(out), new_sr);
}

namespace {

void put_u64(std::ostream& os, std::uint64_t v)
{
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = (v >> (8 * i)) & 0xff;
    os.write(reinterpret_cast<const char*>(b), 8);
}

void put_f64(std::ostream& os, double v)
{
    std::uint64_t u;
    std::memcpy(&u, &v, 8);
    put_u64(os, u);
}

std::uint64_t get_u64(std::istream& is)
{
    unsigned char b[8];
    is.read(reinterpret_cast<char*>(b), 8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= std::uint64_t(b[i]) << (8 * i);
    return v;
}

double get_f64(std::istream& is)
{
    std::uint64_t u = get_u64(is);
    double v;
    std::memcpy(&v, &u, 8);
    return v;
}

} // namespace

void save_function(const SampledFunction& f, const std::string& path)
{
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("save_function: cannot open " + path);
    const Grid& g = f.grid();
    put_u64(os, std::uint64_t(g.dim));
    put_f64(os, g.R);
    put_u64(os, std::uint64_t(g.n));
    put_f64(os, f.support_radius());
    for (const complex& z : f.values()) {
        put_f64(os, z.real());
        put_f64(os, z.imag());
    }
    if (!os) throw std::runtime_error("save_function: write failed on " + path);
}

SampledFunction load_function(const std::string& path)
{
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("load_function: cannot open " + path);
    int dim = int(get_u64(is));
    double R = get_f64(is);
    int n = int(get_u64(is));
    double sr = get_f64(is);
    Grid g = make_grid(dim, R, n);
    std::vector<complex> vals(g.size());
    for (auto& z : vals) {
        double re = get_f64(is);
        double im = get_f64(is);
        z = {re, im};
    }
    if (!is) throw std::runtime_error("load_function: truncated file " + path);
    // Projected functions may have been saved with a full-width support bound.
    auto margin = sr > R / 2 ? SampledFunction::Margin::waived : SampledFunction::Margin::required;
    return SampledFunction(g, std::move(vals), sr, margin);
}

} // namespace bml

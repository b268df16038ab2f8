#include "bml/morrey.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace bml {

namespace {

// Radii are kept on half-integer multiples of dx.  In d=1 the counted
// measure of the open interval (c-r, c+r) around a grid-aligned center is
// then exactly 2r, and no sample ever lands on the boundary.
double snap_radius(double r, double dx)
{
    double m = std::max(0.0, std::round(r / dx - 0.5));
    return (m + 0.5) * dx;
}

double ball_measure(int dim, double r)
{
    return dim == 1 ? 2 * r : std::numbers::pi * r * r;
}

// Per-row prefix sums of |f|^p; ball and cube sums in O(rows) per entry.
struct PrefixTable {
    const Grid& g;
    std::vector<double> pref;  // row-major, n+1 entries per row

    PrefixTable(const SampledFunction& f, double p) : g(f.grid())
    {
        const int n = g.n;
        const int rows = g.dim == 1 ? 1 : n;
        pref.assign(std::size_t(rows) * (n + 1), 0.0);
        for (int r = 0; r < rows; ++r) {
            double acc = 0;
            for (int c = 0; c < n; ++c) {
                double av = std::abs(f.value(g.dim == 1 ? std::size_t(c)
                                                        : g.flat(r, c)));
                acc += av > 0 ? std::pow(av, p) : 0.0;
                pref[std::size_t(r) * (n + 1) + c + 1] = acc;
            }
        }
    }

    double row_sum(int row, int lo, int hi) const  // columns lo..hi inclusive
    {
        if (lo > hi) return 0;
        const double* base = &pref[std::size_t(row) * (g.n + 1)];
        return base[hi + 1] - base[lo];
    }
};

// First index with coord > bound (exclusive lower bound) and last index with
// coord < bound (exclusive upper bound); boundary-adjusted with the exact
// comparison so snapped families behave deterministically.
int first_above(const Grid& g, double bound)
{
    int i = int(std::floor((bound + g.R) / g.dx));
    i = std::clamp(i - 1, 0, g.n);
    while (i < g.n && g.coord(i) <= bound) ++i;
    return i;
}

int last_below(const Grid& g, double bound)
{
    int i = int(std::ceil((bound + g.R) / g.dx));
    i = std::clamp(i + 1, -1, g.n - 1);
    while (i >= 0 && g.coord(i) >= bound) --i;
    return i;
}

// Half-open versions for dyadic cubes: first index with coord >= bound,
// last index with coord < bound.
int first_at_or_above(const Grid& g, double bound)
{
    int i = int(std::floor((bound + g.R) / g.dx));
    i = std::clamp(i - 1, 0, g.n);
    while (i < g.n && g.coord(i) < bound) ++i;
    return i;
}

double entry_sum(const PrefixTable& tab, BallShape shape, const Point& anchor,
                 double r)
{
    const Grid& g = tab.g;
    if (shape == BallShape::ball) {
        if (g.dim == 1)
            return tab.row_sum(0, first_above(g, anchor[0] - r),
                               last_below(g, anchor[0] + r));
        double acc = 0;
        const double r2 = r * r;
        int lo0 = first_above(g, anchor[0] - r);
        int hi0 = last_below(g, anchor[0] + r);
        for (int i0 = lo0; i0 <= hi0; ++i0) {
            double d0 = g.coord(i0) - anchor[0];
            double rem = r2 - d0 * d0;
            if (rem <= 0) continue;
            double w = std::sqrt(rem);
            int lo1 = first_above(g, anchor[1] - w);
            int hi1 = last_below(g, anchor[1] + w);
            // the sqrt can be off by one ulp at the edges; fix with the exact test
            while (lo1 <= hi1) {
                double d1 = g.coord(lo1) - anchor[1];
                if (d0 * d0 + d1 * d1 < r2) break;
                ++lo1;
            }
            while (lo1 <= hi1) {
                double d1 = g.coord(hi1) - anchor[1];
                if (d0 * d0 + d1 * d1 < r2) break;
                --hi1;
            }
            acc += tab.row_sum(i0, lo1, hi1);
        }
        return acc;
    }
    // dyadic cube [anchor, anchor + r)^d
    if (g.dim == 1)
        return tab.row_sum(0, first_at_or_above(g, anchor[0]),
                           last_below(g, anchor[0] + r));
    double acc = 0;
    int lo0 = first_at_or_above(g, anchor[0]);
    int hi0 = last_below(g, anchor[0] + r);
    int lo1 = first_at_or_above(g, anchor[1]);
    int hi1 = last_below(g, anchor[1] + r);
    for (int i0 = lo0; i0 <= hi0; ++i0) acc += tab.row_sum(i0, lo1, hi1);
    return acc;
}

} // namespace

BallFamily::BallFamily(const Grid& g, BallShape shape, std::vector<Point> anchors,
                       std::vector<double> radii)
    : grid_(g), shape_(shape), anchors_(std::move(anchors)), radii_(std::move(radii))
{
    for (double r : radii_)
        if (!(r > 0) || r > 2 * g.R)
            throw std::invalid_argument("BallFamily: radii must lie in (0, 2R]");
    for (const Point& a : anchors_)
        for (int ax = 0; ax < g.dim; ++ax)
            if (a[ax] < -g.R || a[ax] >= g.R)
                throw std::invalid_argument("BallFamily: anchor outside the grid box");
    std::sort(radii_.begin(), radii_.end());
    radii_.erase(std::unique(radii_.begin(), radii_.end()), radii_.end());
}

BallFamily BallFamily::standard(const Grid& g, int center_stride, double r_min,
                                double r_max)
{
    const double floor_r = (g.dim == 1 ? 0.5 : 2.5) * g.dx;
    if (r_min <= 0) r_min = (g.dim == 1 ? 1.5 : 3.5) * g.dx;
    r_min = std::max(r_min, floor_r);
    if (r_max <= 0) r_max = 2 * g.R;
    r_max = std::min(r_max, 2 * g.R);

    std::vector<double> radii;
    const double ratio = std::pow(2.0, 0.25);
    for (double r = r_min; r <= r_max * (1 + 1e-12); r *= ratio) {
        double s = snap_radius(r, g.dx);
        if (s <= 2 * g.R) radii.push_back(s);
    }
    std::vector<Point> anchors;
    if (g.dim == 1) {
        for (int i = 0; i < g.n; i += center_stride) anchors.push_back({g.coord(i), 0.0});
    } else {
        for (int i0 = 0; i0 < g.n; i0 += center_stride)
            for (int i1 = 0; i1 < g.n; i1 += center_stride)
                anchors.push_back({g.coord(i0), g.coord(i1)});
    }
    BallFamily f(g, BallShape::ball, std::move(anchors), std::move(radii));
    f.center_stride_ = center_stride;
    f.r_floor_ = floor_r;
    return f;
}

BallFamily BallFamily::dyadic_cubes(const Grid& g, int j_min, int j_max,
                                    int corner_stride)
{
    std::vector<Point> anchors;
    std::vector<double> radii;
    for (int j = j_min; j <= j_max; ++j) {
        double side = std::pow(2.0, -j);
        if (side < g.dx || side > 2 * g.R) continue;
        radii.push_back(side);
        // corners at multiples of the side, strided; morrey_norm pairs every
        // corner with every side, and any such cube is a valid lower bound
        // for the cube supremum, so cross-level pairs are harmless
        for (double c0 = std::ceil(-g.R / side) * side; c0 < g.R;
             c0 += side * corner_stride) {
            if (g.dim == 1) {
                anchors.push_back({c0, 0.0});
            } else {
                for (double c1 = std::ceil(-g.R / side) * side; c1 < g.R;
                     c1 += side * corner_stride)
                    anchors.push_back({c0, c1});
            }
        }
    }
    std::sort(anchors.begin(), anchors.end());
    anchors.erase(std::unique(anchors.begin(), anchors.end()), anchors.end());
    BallFamily f(g, BallShape::dyadic_cube, std::move(anchors), std::move(radii));
    f.cube_j_min_ = j_min;
    f.cube_j_max_ = j_max;
    f.cube_stride_ = corner_stride;
    return f;
}

BallFamily BallFamily::refine() const
{
    if (shape_ == BallShape::dyadic_cube) {
        if (cube_stride_ == 0) return *this;  // explicit families do not refine
        int j_max = cube_j_max_;
        if (std::pow(2.0, -(j_max + 1)) >= grid_.dx) ++j_max;
        return dyadic_cubes(grid_, cube_j_min_, j_max, std::max(1, cube_stride_ / 2));
    }
    if (center_stride_ == 0) return *this;  // explicit families do not refine
    double r_min = radii_.empty() ? 0 : radii_.front();
    double new_r_min = std::max(r_floor_, r_min / 2);
    BallFamily finer = standard(grid_, std::max(1, center_stride_ / 2), new_r_min,
                                radii_.empty() ? 0 : radii_.back());
    // Union in the old radii so the refined family is a superset by
    // construction, not merely up to rounding of the geometric ladder.
    std::vector<double> radii = finer.radii_;
    radii.insert(radii.end(), radii_.begin(), radii_.end());
    BallFamily out(grid_, BallShape::ball, std::move(finer.anchors_), std::move(radii));
    out.center_stride_ = std::max(1, center_stride_ / 2);
    out.r_floor_ = r_floor_;
    return out;
}

BallFamily BallFamily::translated(const Point& shift) const
{
    std::vector<Point> anchors = anchors_;
    for (Point& a : anchors)
        for (int ax = 0; ax < grid_.dim; ++ax) a[ax] += shift[ax];
    BallFamily f(grid_, shape_, std::move(anchors), radii_);
    f.center_stride_ = center_stride_;
    f.r_floor_ = r_floor_;
    return f;
}

NormEstimate morrey_norm(const SampledFunction& f, double u, double p,
                         const BallFamily& family)
{
    if (!(p > 0) || p > u)
        throw std::invalid_argument("morrey_norm: need 0 < p <= u");
    if (!family.grid().same_layout(f.grid()))
        throw std::invalid_argument("morrey_norm: family built for a different grid");
    const Grid& g = f.grid();
    const double cell = g.dim == 1 ? g.dx : g.dx * g.dx;
    const double wexp = 1.0 / u - 1.0 / p;  // <= 0

    PrefixTable tab(f, p);
    NormEstimate est;
    est.trunc.family_centers = int(family.anchors().size());
    est.trunc.family_radii = int(family.radii().size());
    if (!family.radii().empty()) {
        est.trunc.r_min = family.radii().front();
        est.trunc.r_max = family.radii().back();
    }
    double best = 0;
    for (double r : family.radii()) {
        const double measure = family.shape() == BallShape::ball
                                   ? ball_measure(g.dim, r)
                                   : std::pow(r, g.dim);
        const double weight = std::pow(measure, wexp);
        for (const Point& a : family.anchors()) {
            double s = entry_sum(tab, family.shape(), a, r);
            if (s <= 0) continue;
            best = std::max(best, weight * std::pow(s * cell, 1.0 / p));
        }
        est.partials.emplace_back(r, best);
    }
    est.value = best;
    return est;
}

NormEstimate refine_until_stable(const SampledFunction& f, double u, double p,
                                 BallFamily family, double tol,
                                 int max_refinements)
{
    if (!(tol > 0) || tol >= 0.5)
        throw std::invalid_argument("refine_until_stable: tol must lie in (0, 0.5)");
    NormEstimate est = morrey_norm(f, u, p, family);
    est.partials.clear();
    est.partials.emplace_back(0, est.value);
    double prev = est.value;
    bool converged = false;
    for (int i = 0; i < max_refinements; ++i) {
        BallFamily finer = family.refine();
        bool saturated = finer.anchors().size() == family.anchors().size() &&
                         finer.radii().size() == family.radii().size();
        family = std::move(finer);
        NormEstimate cur = morrey_norm(f, u, p, family);
        est.partials.emplace_back(i + 1, cur.value);
        est.value = cur.value;
        est.trunc = cur.trunc;
        double rel = (cur.value - prev) / std::max(cur.value, 1e-300);
        prev = cur.value;
        if (rel < tol || saturated) {
            converged = true;
            break;
        }
    }
    est.trunc.refinements = int(est.partials.size()) - 1;
    est.trunc.converged = converged;
    if (!converged) est.trunc.flags.push_back("refinement cap hit while still growing");
    return est;
}

} // namespace bml

/** \file morrey.hpp
    \brief Morrey quasi-norm estimation over finite, refinable ball families.

    The Morrey quasi-norm of a function f with exponents 0 < p <= u is the
    supremum over all balls B of |B|^{1/u-1/p} (int_B |f|^p)^{1/p}.  A finite
    family of balls (or dyadic cubes) can only under-estimate that supremum,
    so every estimate here is a lower bound; divergence statements are made
    from growing partial values, never from a single number.
*/
#pragma once

#include "bml/grid.hpp"

#include <string>
#include <utility>
#include <vector>

namespace bml {

/// Truncation metadata carried by every norm estimate: how the infinite
/// objects (sup over balls, sum over bands, integral over scales) were cut.
struct Truncation {
    int family_centers = 0;       ///< number of ball/cube anchors
    int family_radii = 0;         ///< number of radius ladder entries
    double r_min = 0, r_max = 0;  ///< radius ladder range
    int band_cutoff = -1;         ///< K_max for Littlewood-Paley sums, -1 if n/a
    double t_min = 0, t_max = 0;  ///< scale ladder range for difference norms
    int levels_per_octave = 0;    ///< t-ladder density, 0 if n/a
    double aux_param = 0;         ///< scenario parameter (l, epsilon, ...), 0 if n/a
    int refinements = 0;          ///< refinement passes performed
    bool converged = true;        ///< false when a refinement cap was hit while still growing
    std::vector<std::string> flags;  ///< e.g. excluded sub-resolution levels
};

/// A quasi-norm value plus its finite-approximation history.  `partials`
/// pairs a truncation parameter with the partial value; for suprema and
/// sums of nonnegative terms the trajectory is monotone nondecreasing.
struct NormEstimate {
    double value = 0;
    Truncation trunc;
    std::vector<std::pair<double, double>> partials;
    std::vector<double> blocks;  ///< per-band / per-level raw values where applicable
};

enum class BallShape { ball, dyadic_cube };

/// Finite set of balls (center, radius) or dyadic cubes (lower corner, side)
/// over which Morrey suprema are taken.  refine() yields a superset: denser
/// anchors, finer and smaller radii, so estimates never decrease.
class BallFamily {
public:
    /// Geometric radius ladder with ratio 2^{1/4}, snapped to half-integer
    /// multiples of dx (in d=1 this makes the counted ball measure match
    /// 2r exactly and removes boundary ties), anchors on every
    /// `center_stride`-th grid point.
    static BallFamily standard(const Grid& g, int center_stride = 4,
                               double r_min = 0, double r_max = 0);

    /// Dyadic cubes 2^{-j}([0,1)^d + k) for j in [j_min, j_max], lower
    /// corners on every `corner_stride`-th multiple of 2^{-j} inside the box.
    static BallFamily dyadic_cubes(const Grid& g, int j_min, int j_max,
                                   int corner_stride = 4);

    /// Explicit family (used by tests and by translated-family checks).
    BallFamily(const Grid& g, BallShape shape, std::vector<Point> anchors,
               std::vector<double> radii);

    BallFamily refine() const;

    const Grid& grid() const { return grid_; }
    BallShape shape() const { return shape_; }
    const std::vector<Point>& anchors() const { return anchors_; }
    const std::vector<double>& radii() const { return radii_; }

    /// Same anchors shifted by a grid-aligned offset (translation checks).
    BallFamily translated(const Point& shift) const;

private:
    Grid grid_;
    BallShape shape_ = BallShape::ball;
    std::vector<Point> anchors_;   ///< ball centers or cube lower corners
    std::vector<double> radii_;    ///< ball radii or cube sides, ascending
    int center_stride_ = 0;        ///< 0 for explicit families
    double r_floor_ = 0;           ///< refinement floor for radii
    int cube_j_min_ = 0, cube_j_max_ = 0, cube_stride_ = 0;
};

/// Lower-bound estimate of || f | M^u_p || over the family.
/// Requires 0 < p <= u.  partials: running maximum vs. radius ladder index.
NormEstimate morrey_norm(const SampledFunction& f, double u, double p,
                         const BallFamily& family);

/// Repeatedly refines the family until the relative increase per refinement
/// drops below tol, or `max_refinements` is hit, in which case
/// trunc.converged is false (the supremum is still being approached).
/// partials: value vs. refinement index.
NormEstimate refine_until_stable(const SampledFunction& f, double u, double p,
                                 BallFamily family, double tol,
                                 int max_refinements = 8);

} // namespace bml

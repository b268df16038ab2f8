/** \file diffnorm.hpp
    \brief Higher-order differences and the difference-based quasi-norms.

    Four functionals are provided on top of the Morrey estimator:

      va:      ||f|M^u_p|| + ( int_0^a t^{-sq-dq/v}
                 || (int_{B(0,t)} |D^N_h f|^v dh)^{1/v} | M^u_p ||^q dt/t )^{1/q}
      club:    ( || (int_{B(x,1)} |f|^v dy)^{1/v} | M^u_p ||^q
                 + sum_{j>=1} 2^{jq(s+d/v)} || ... ||^q )^{1/q}
      spade:   club with the first term replaced by ||f|M^u_p||
      modulus: ||f|M^u_p|| + ( int_0^inf t^{-sq}
                 [ sup_{|h|<t} ||D^N_h f | M^u_p|| ]^q dt/t )^{1/q}

    The t-integrals are discretized on a dyadic ladder with weight
    ln2 / levels_per_octave per level (exact for integrands constant on
    dyadic blocks); the h-integrals are midpoint sums over grid-aligned
    offsets inside the open ball B(0,t), stratified-subsampled above a cap.
    q = inf and v = inf take maxima over the respective sample sets.
*/
#pragma once

#include "bml/grid.hpp"
#include "bml/morrey.hpp"

#include <cmath>
#include <vector>

namespace bml {

/// Dyadic scale ladder t = 2^{-e}, e = j_min + i/per_octave, cut at t <= a.
/// j_min < 0 admits scales above 1 (needed when a = inf).
struct TLadder {
    int j_min = 0;
    int j_max = 7;
    int per_octave = 1;

    std::vector<double> levels(double a) const;  ///< descending t, capped at a
    TLadder refined() const { return {j_min, j_max, per_octave * 2}; }
    double level_weight() const;                 ///< ln2 / per_octave
};

struct DiffParams {
    int N = 1;                ///< difference order
    double v = 2;             ///< inner exponent, inf allowed
    double a = INFINITY;      ///< outer integration limit, 1 <= a <= inf
    TLadder ladder;
    int h_cap = 4096;         ///< max h samples per ball before subsampling

    void validate(const Grid& g) const;
};

/// Binomial-formula difference: sum_{k=0}^N (-1)^{N-k} C(N,k) f(x + k h).
/// h must be grid-aligned and N|h| <= R/2 so zero extension never wraps.
/// Reads outside the box are zero; exact for margin-respecting functions,
/// a documented surrogate for full-width (margin-waived) ones.
SampledFunction finite_difference(const SampledFunction& f, const Point& h, int N);

/// Grid-aligned offsets inside the open ball B(0,t), each with its midpoint
/// weight dx^d; above `cap` a deterministic stratified (dyadic shell)
/// subsample is taken and the kept offsets absorb their shell's weight.
struct HSet {
    std::vector<std::array<std::int64_t, 2>> offsets;  ///< lattice steps per axis
    std::vector<double> weights;                       ///< quadrature weights
    std::size_t full_count = 0;                        ///< before subsampling
    double total_weight() const;
};
HSet h_samples(const Grid& g, double t, int cap);

/// Per grid point x: ( sum_{h in B(0,t)} |D^N_h f(x)|^v dx^d )^{1/v},
/// or max over the h-set when v = inf.  Throws when t admits no nonzero
/// grid-aligned offset.
SampledFunction ball_avg_difference(const SampledFunction& f, double t,
                                    const DiffParams& par);

/// The (v,a) quasi-norm.  partials: cumulative value in descending-t order
/// (the small-t tail direction); blocks: per-level t^{-s-d/v} * Morrey value
/// so callers can re-aggregate the trajectory in either direction.
/// Levels with t < 2dx (below grid resolution) or t > R/(2N) (wrap risk)
/// are flagged and excluded rather than contributing spurious terms.
NormEstimate diff_norm_va(const SampledFunction& f, double s, double u, double p,
                          double q, const DiffParams& par, const BallFamily& family);

NormEstimate diff_norm_club(const SampledFunction& f, double s, double u, double p,
                            double q, const DiffParams& par, const BallFamily& family);

NormEstimate diff_norm_spade(const SampledFunction& f, double s, double u, double p,
                             double q, const DiffParams& par, const BallFamily& family);

/// Modulus-of-smoothness norm; the inner sup runs over the h-sample set of
/// B(0,t) (use a smaller h_cap here, every h costs a Morrey evaluation).
NormEstimate modulus_norm(const SampledFunction& f, double s, double u, double p,
                          double q, const DiffParams& par, const BallFamily& family);

} // namespace bml

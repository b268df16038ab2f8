/** \file bands.hpp
    \brief Smooth dyadic decomposition of unity on the frequency grid and the
           Littlewood-Paley quasi-norm built from Morrey norms of the blocks.

    The base profile phi_0 is radial: 1 for |xi| <= 1, 0 for |xi| >= 3/2,
    with the standard exp(-1/t) glue in between; band k >= 1 is
    phi_k(xi) = phi_0(2^{-k} xi) - phi_0(2^{-k+1} xi), supported in the
    annulus 2^{k-1} <= |xi| <= 3*2^{k-1}.  The profile is fixed once so runs
    reproduce bit for bit; the underlying space does not depend on the choice.
*/
#pragma once

#include "bml/grid.hpp"
#include "bml/morrey.hpp"

#include <vector>

namespace bml {

/// Smooth monotone step: 0 at t <= 0, 1 at t >= 1, C^inf in between.
double smooth_step(double t);

/// The system (phi_k) sampled on the DFT dual grid of a spatial Grid.
/// Frequencies per axis are pi*m/R for signed bin m in [-n/2, n/2).
class DyadicPartition {
public:
    DyadicPartition(const Grid& g, int K_max);

    static double phi0(double rho);          ///< radial base profile
    static double band(int k, double rho);   ///< phi_k as a radial function

    const Grid& grid() const { return grid_; }
    int K_max() const { return K_max_; }
    /// |xi| at a flat index of the frequency grid.
    double freq_radius(std::size_t flat) const;
    /// sampled multiplier of band k (flat layout matching the DFT output)
    const std::vector<double>& multiplier(int k) const { return bands_.at(k); }

private:
    Grid grid_;
    int K_max_;
    std::vector<std::vector<double>> bands_;
};

/// Requires the per-axis Nyquist radius pi/dx to exceed 3*2^{K_max-1}
/// (otherwise the top band would alias); throws std::invalid_argument.
DyadicPartition build_partition(const Grid& g, int K_max);

/// Discrete realization of the Fourier multiplier block: DFT, multiply by
/// phi_k on the frequency grid, inverse DFT.  The result is no longer
/// compactly supported, so it carries support_radius = R with the margin
/// invariant waived.
SampledFunction band_project(const SampledFunction& f, const DyadicPartition& P,
                             int k);

/// ( sum_k 2^{ksq} ||block_k | M^u_p||^q )^{1/q}; q = inf takes the sup.
/// blocks[k] holds the plain Morrey value of block k; partials the running
/// q-sum (or running max) against k.
NormEstimate besov_morrey_norm(const SampledFunction& f, const DyadicPartition& P,
                               double s, double u, double p, double q,
                               const BallFamily& family);

} // namespace bml

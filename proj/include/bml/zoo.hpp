/** \file zoo.hpp
    \brief Explicit test and counterexample functions, atoms, and the
           coefficient-sequence norm.

    The constructions:
      - singular power profile rho(x)|x|^alpha (-ln|x|)^{-delta} with a smooth
        cutoff, plus the exact membership rule for it;
      - plateau bump (1 on |x|<=1, 0 beyond 2) whose high differences stay
        of size one at large shifts;
      - exponential bump (e^{x_1+...+x_d} on a ball, smoothly cut off);
      - lacunary sum of dilated bumps with dyadically tuned amplitudes
        a_k = 2^{n_k(d/u - N)} at levels n_k = r(k-1)+2;
      - (K,L)-atom validation and the atomic synthesis comparison against
        the sequence-space norm.
*/
#pragma once

#include "bml/bands.hpp"
#include "bml/grid.hpp"
#include "bml/morrey.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace bml {

// ---------------------------------------------------------------------------
// singular power function
// ---------------------------------------------------------------------------

/// Configuration of f(x) = rho(x - c) |x - c|^alpha (-ln|x - c|)^{-delta}.
/// The cutoff rho is 1 on B(0,theta) and 0 outside B(0,2theta).  By default
/// the center c sits half a grid spacing off the lattice, so no sample ever
/// lands on the singularity and the value-at-center question disappears;
/// if a sample does land exactly on the center it is set to zero.
struct SingularFnConfig {
    double alpha;            ///< < 0
    double delta = 0;        ///< >= 0
    double theta = 0.125;    ///< cutoff scale; requires 2*theta <= R/4
    std::optional<Point> center;  ///< default: half-spacing offset from 0
};

Point singular_center(const Grid& g, const SingularFnConfig& cfg);
SampledFunction make_f_alpha_delta(const Grid& g, const SingularFnConfig& cfg);

/// True when |f|^p is integrable near the singularity (alpha > -d/p);
/// constructions with alpha <= -d/p are allowed but flagged by callers.
bool singular_energy_integrable(const SingularFnConfig& cfg, double p, int dim);

/// Exact membership rule for the singular profile in the smoothness-s scale:
///   delta = 0:  member iff s < d/u + alpha, or s = d/u + alpha with q = inf;
///   delta > 0:  member iff s < d/u + alpha, or s = d/u + alpha and delta*q > 1.
/// Requires s > 0, 1 <= p <= u < inf, alpha < 0, delta >= 0.
enum class Membership { member, not_member };
Membership membership_oracle(int dim, double s, double u, double p, double q,
                             double alpha, double delta);

// ---------------------------------------------------------------------------
// bumps
// ---------------------------------------------------------------------------

/// Radial plateau: exactly 1 for |x| <= 1, exactly 0 for |x| >= 2,
/// smooth glue in between.  Needs R >= 4.
SampledFunction make_plateau_bump(const Grid& g);

/// e^{x_1+...+x_d} on B(0, 2N+2), smoothly cut to vanish outside B(0, 3N+3).
/// Needs R >= 2(3N+3).
SampledFunction make_exp_bump(const Grid& g, int N);

// ---------------------------------------------------------------------------
// lacunary (Oswald-type) sum
// ---------------------------------------------------------------------------

/// f = sum_k a_k phi(2^{n_k} x - x_k) with n_k = r(k-1)+2,
/// x_k = 32^{r-2}(1,..,1)^T and a_k = 2^{n_k(d/u - N)}.  The profile phi is a
/// fixed smooth bump supported in B(0,1) inside [0,1)^d, with vanishing
/// moments up to `L` enforced polynomially when L >= 0.
struct OswaldConfig {
    int dim = 1;
    int r = 5;        ///< lacunarity, integer > 4 with 2^{r+1} >= N+4
    int N = 1;        ///< difference / smoothness order
    double u = 2;     ///< Morrey exponent
    int k_max = 1;    ///< number of summands
    int L = -1;       ///< vanishing-moment order of phi

    void validate() const;
    int level(int k) const { return r * (k - 1) + 2; }          ///< n_k
    double corner_index() const;                                ///< 32^{r-2}
    double amplitude(int k) const;                              ///< a_k
};

/// Reference profile phi evaluated at a point of [0,1)^d (tensor bump,
/// moment-corrected when cfg.L >= 0).
double oswald_profile(const OswaldConfig& cfg, const Point& y);

/// Exact support box of summand k: 2^{-n_k}(x_k + [0, w)^d) with the
/// profile's actual in-cube extent w < 1.
struct Box {
    Point lo{}, hi{};
    bool intersects(const Box& o, int dim) const;
};
Box oswald_term_box(const OswaldConfig& cfg, int k);

/// Value of summand k at a point (a_k * phi(2^{n_k} x - x_k)).
double oswald_term_value(const OswaldConfig& cfg, int k, const Point& x);

/// Dense sampling of the lacunary sum.  Preconditions: the grid resolves
/// level n_{k_max} (2^{-n_{k_max}} >= 4 dx) and the support fits the margin.
SampledFunction make_oswald(const Grid& g, const OswaldConfig& cfg);

/// Smallest C > 0 such that |D^gamma phi| > C for all |gamma| <= N on a
/// measured subset of the support of measure > |supp phi|/2; 0 when no such
/// constant exists at the grid's resolution.  Derivatives are centered
/// differences on a reference grid of the stated size.
double oswald_profile_lower_constant(const OswaldConfig& cfg, int samples = 4096);

// ---------------------------------------------------------------------------
// sequence space and atoms
// ---------------------------------------------------------------------------

/// Finitely supported coefficients lambda_{j,k}, j >= 0 a dyadic level and
/// k in Z^d a cube index for Q_{j,k} = 2^{-j}([0,1)^d + k).
struct CoefficientSequence {
    struct Entry {
        int j = 0;
        std::array<std::int64_t, 2> k{0, 0};
        complex value;
    };
    std::vector<Entry> entries;
};

/// ( sum_j 2^{jq(s - d/u)} || sum_k |lambda_{j,k}| 2^{jd/u} chi_{j,k} | M^u_p ||^q )^{1/q}
/// with the cube-mode Morrey estimate; q = inf takes the sup over levels.
/// Levels must be resolvable on the grid (2^{-j} >= dx).
NormEstimate sequence_norm(const CoefficientSequence& lambda, const Grid& g,
                           double s, double u, double p, double q,
                           const BallFamily& cube_family);

/// A family of candidate (K,L)-atoms: support in C1*Q_{j,k}, derivatives
/// up to order K bounded by C2*2^{j|alpha|}, moments vanishing up to L
/// (L = -1 means no moment condition).
struct AtomFamily {
    double C1 = 2.0;
    double C2 = 1.0;
    int K = 1;
    int L = -1;
    struct Atom {
        int j = 0;
        std::array<std::int64_t, 2> k{0, 0};
        SampledFunction samples;
    };
    std::vector<Atom> atoms;
};

struct AtomCheck {
    std::size_t index = 0;
    bool support_ok = false;
    bool derivative_ok = false;
    bool moments_ok = false;
    double worst_derivative_ratio = 0;  ///< max |D^a| / (C2 2^{j|a|}) over |a| <= K
    double worst_moment_residual = 0;   ///< relative to the atom's L1 mass scale
    bool pass() const { return support_ok && derivative_ok && moments_ok; }
};

struct AtomReport {
    std::vector<AtomCheck> checks;
    bool all_pass() const;
};

/// Grid-estimated validation: derivative bounds get 10% headroom, moments a
/// 1e-6 relative quadrature tolerance.
AtomReport validate_atoms(const AtomFamily& family);

/// Synthesize sum lambda_{j,k} a_{j,k}, measure it in the Littlewood-Paley
/// quasi-norm, and compare with the sequence norm of lambda.  Requires the
/// atom orders K >= max(0, s+1) and L >= max(-1, sigma_p - s).
struct SynthesisReport {
    double lhs = 0;        ///< quasi-norm of the synthesized function
    double rhs = 0;        ///< sequence norm of the coefficients
    double ratio = 0;      ///< lhs / rhs (0 when both vanish)
    double ratio_refined = 0;  ///< same with family and ladder refined once
    bool finite = false;
};
SynthesisReport atomic_synthesis_check(const AtomFamily& family,
                                       const CoefficientSequence& lambda,
                                       double s, double u, double p, double q);

} // namespace bml

/** \file classify.hpp
    \brief Total classifier of the parameter space: for which (d,s,u,p,q,v,a,N)
           do the Fourier-analytic and difference quasi-norms describe the
           same space?

    The decision procedure is an ordered table.  Known-failure rows come
    first (each names the mechanism that breaks the equivalence), then the
    sufficient region, then the documented open windows; anything left over
    is reported as open/unclassified.  Precedence: the first matching failure
    row decides the verdict; all matching rows are listed alongside.
*/
#pragma once

#include <cmath>
#include <string>
#include <vector>

namespace bml {

/// The full parameter tuple.  q, v, a admit infinity.
struct SpaceParams {
    int d = 1;
    double s = 1;
    double u = 2;
    double p = 2;
    double q = 2;
    double v = 2;
    double a = INFINITY;  ///< outer integration limit, 1 <= a <= inf
    int N = 1;

    double sigma_p() const;   ///< d * max(0, 1/p - 1)
    double sigma_pq() const;  ///< d * max(0, 1/p - 1, 1/q - 1)
    void validate() const;    ///< throws std::invalid_argument when out of range
};

enum class CaseTag {
    equivalent,                       ///< sufficient region: s above both thresholds, N > s
    s_negative,                       ///< s < 0: singular distributions at every a
    s_zero_unbounded_tail,            ///< s = 0 with a = inf: the far-scale integral diverges
    s_zero_large_q,                   ///< s = 0, p >= 2, q > 2: singular distributions
    s_zero_mid_p_large_q,             ///< s = 0, 1 <= p < 2, q > p: singular distributions
    subcritical_p,                    ///< p < 1, s < (dp/u)(1/p - 1)
    critical_p_large_q,               ///< p < 1, s = (dp/u)(1/p - 1), q > 1
    subcritical_v,                    ///< p < v < inf, s < (dp/u)(1/p - 1/v)
    order_below_s,                    ///< N < s
    order_equal_s_finite_q,           ///< N = s, q < inf
    order_equal_s_sup_q_lebesgue,     ///< N = s, q = inf, u = p, v >= 1
    open_s_zero_truncated_small_q,    ///< s = 0, a < inf, small q window
    open_p_window_small_v,            ///< p < 1, v < 1, s between the two thresholds
    open_v_window,                    ///< v > max(1,p), s between the two v-thresholds
    open_order_equal_s_sup_q_morrey,  ///< N = s, q = inf, p < u
    open_v_one_gap,                   ///< v = 1, p < 1, s between the thresholds
    open_unclassified,                ///< no tabulated result covers the tuple
};

const char* tag_name(CaseTag tag);
/// one-line statement of the condition the row encodes
const char* tag_condition(CaseTag tag);

struct RegionVerdict {
    enum class Kind { equivalent, not_equivalent, open };
    Kind kind = Kind::open;
    CaseTag tag = CaseTag::open_unclassified;  ///< first matching row
    std::vector<CaseTag> matches;              ///< every matching row, in table order
};

/// Total and deterministic on valid parameters.
RegionVerdict classify_parameters(const SpaceParams& params);

} // namespace bml

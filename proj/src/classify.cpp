#include "bml/classify.hpp"

#include <cmath>
#include <stdexcept>

namespace bml {

double SpaceParams::sigma_p() const
{
    return d * std::max(0.0, 1.0 / p - 1.0);
}

double SpaceParams::sigma_pq() const
{
    return d * std::max({0.0, 1.0 / p - 1.0, 1.0 / q - 1.0});
}

void SpaceParams::validate() const
{
    if (d != 1 && d != 2) throw std::invalid_argument("SpaceParams: d must be 1 or 2");
    if (!(p > 0) || !(p <= u) || std::isinf(u))
        throw std::invalid_argument("SpaceParams: need 0 < p <= u < inf");
    if (!(q > 0)) throw std::invalid_argument("SpaceParams: need 0 < q <= inf");
    if (!(v > 0)) throw std::invalid_argument("SpaceParams: need 0 < v <= inf");
    if (!(a >= 1)) throw std::invalid_argument("SpaceParams: need 1 <= a <= inf");
    if (N < 1) throw std::invalid_argument("SpaceParams: need integer N >= 1");
    if (!std::isfinite(s)) throw std::invalid_argument("SpaceParams: s must be finite");
}

const char* tag_name(CaseTag tag)
{
    switch (tag) {
        case CaseTag::equivalent: return "equivalent";
        case CaseTag::s_negative: return "s-negative";
        case CaseTag::s_zero_unbounded_tail: return "s-zero-unbounded-tail";
        case CaseTag::s_zero_large_q: return "s-zero-large-q";
        case CaseTag::s_zero_mid_p_large_q: return "s-zero-mid-p-large-q";
        case CaseTag::subcritical_p: return "subcritical-p";
        case CaseTag::critical_p_large_q: return "critical-p-large-q";
        case CaseTag::subcritical_v: return "subcritical-v";
        case CaseTag::order_below_s: return "order-below-s";
        case CaseTag::order_equal_s_finite_q: return "order-equal-s-finite-q";
        case CaseTag::order_equal_s_sup_q_lebesgue: return "order-equal-s-sup-q-lebesgue";
        case CaseTag::open_s_zero_truncated_small_q: return "open-s-zero-truncated-small-q";
        case CaseTag::open_p_window_small_v: return "open-p-window-small-v";
        case CaseTag::open_v_window: return "open-v-window";
        case CaseTag::open_order_equal_s_sup_q_morrey: return "open-order-equal-s-sup-q-morrey";
        case CaseTag::open_v_one_gap: return "open-v-one-gap";
        case CaseTag::open_unclassified: return "open-unclassified";
    }
    return "?";
}

const char* tag_condition(CaseTag tag)
{
    switch (tag) {
        case CaseTag::equivalent:
            return "s > d*max(0, 1/p-1, 1/p-1/v) and N > s";
        case CaseTag::s_negative:
            return "s < 0";
        case CaseTag::s_zero_unbounded_tail:
            return "s = 0 and a = inf";
        case CaseTag::s_zero_large_q:
            return "s = 0, p >= 2, q > 2";
        case CaseTag::s_zero_mid_p_large_q:
            return "s = 0, 1 <= p < 2, q > p";
        case CaseTag::subcritical_p:
            return "p < 1 and s < (d p/u)(1/p - 1)";
        case CaseTag::critical_p_large_q:
            return "p < 1, s = (d p/u)(1/p - 1), q > 1";
        case CaseTag::subcritical_v:
            return "p < v < inf and s < (d p/u)(1/p - 1/v)";
        case CaseTag::order_below_s:
            return "N < s";
        case CaseTag::order_equal_s_finite_q:
            return "N = s and q < inf";
        case CaseTag::order_equal_s_sup_q_lebesgue:
            return "N = s, q = inf, u = p, v >= 1";
        case CaseTag::open_s_zero_truncated_small_q:
            return "s = 0, a < inf, and (p >= 2, q <= 2) or (1 <= p < 2, q <= p)";
        case CaseTag::open_p_window_small_v:
            return "p < 1, v < 1, (d p/u)(1/p-1) < s <= d(1/p-1)";
        case CaseTag::open_v_window:
            return "v > max(1,p), (d p/u)(1/p-1/v) <= s <= d(1/p-1/v)";
        case CaseTag::open_order_equal_s_sup_q_morrey:
            return "N = s, q = inf, p < u";
        case CaseTag::open_v_one_gap:
            return "v = 1, p < 1, (d p/u)(1/p-1) < s <= d(1/p-1)";
        case CaseTag::open_unclassified:
            return "no tabulated result covers this tuple";
    }
    return "?";
}

RegionVerdict classify_parameters(const SpaceParams& par)
{
    par.validate();
    const double d = par.d;
    const double crit_p = d * (par.p / par.u) * (1.0 / par.p - 1.0);          // > 0 iff p < 1
    const double crit_v = std::isinf(par.v)
                              ? d * (par.p / par.u) / par.p
                              : d * (par.p / par.u) * (1.0 / par.p - 1.0 / par.v);
    const double upper_v = std::isinf(par.v) ? d / par.p
                                             : d * (1.0 / par.p - 1.0 / par.v);
    const bool q_inf = std::isinf(par.q);
    const bool a_inf = std::isinf(par.a);
    const bool N_eq_s = double(par.N) == par.s;

    std::vector<CaseTag> fails;
    // known-failure rows, in fixed order (first match wins)
    if (par.s < 0) fails.push_back(CaseTag::s_negative);
    if (par.s == 0 && a_inf) fails.push_back(CaseTag::s_zero_unbounded_tail);
    if (par.s == 0 && par.p >= 2 && par.q > 2) fails.push_back(CaseTag::s_zero_large_q);
    if (par.s == 0 && par.p >= 1 && par.p < 2 && par.q > par.p)
        fails.push_back(CaseTag::s_zero_mid_p_large_q);
    if (par.p < 1 && par.s >= 0 && par.s < crit_p) fails.push_back(CaseTag::subcritical_p);
    if (par.p < 1 && par.s == crit_p && par.q > 1)
        fails.push_back(CaseTag::critical_p_large_q);
    if (par.s >= 0 && par.p < par.v && !std::isinf(par.v) && par.s < crit_v)
        fails.push_back(CaseTag::subcritical_v);
    if (double(par.N) < par.s) fails.push_back(CaseTag::order_below_s);
    if (N_eq_s && !q_inf) fails.push_back(CaseTag::order_equal_s_finite_q);
    if (N_eq_s && q_inf && par.u == par.p && par.v >= 1)
        fails.push_back(CaseTag::order_equal_s_sup_q_lebesgue);

    RegionVerdict verdict;
    if (!fails.empty()) {
        verdict.kind = RegionVerdict::Kind::not_equivalent;
        verdict.tag = fails.front();
        verdict.matches = fails;
        return verdict;
    }

    // sufficient region
    const double threshold =
        d * std::max({0.0, 1.0 / par.p - 1.0,
                      std::isinf(par.v) ? 1.0 / par.p : 1.0 / par.p - 1.0 / par.v});
    if (par.s > threshold && double(par.N) > par.s) {
        verdict.kind = RegionVerdict::Kind::equivalent;
        verdict.tag = CaseTag::equivalent;
        verdict.matches = {CaseTag::equivalent};
        return verdict;
    }

    // documented open windows
    std::vector<CaseTag> open;
    if (par.s == 0 && !a_inf &&
        ((par.p >= 2 && par.q <= 2) || (par.p >= 1 && par.p < 2 && par.q <= par.p)))
        open.push_back(CaseTag::open_s_zero_truncated_small_q);
    if (par.p < 1 && par.v < 1 && par.s > crit_p && par.s <= par.sigma_p())
        open.push_back(CaseTag::open_p_window_small_v);
    if (par.v > std::max(1.0, par.p) && par.s >= crit_v && par.s <= upper_v)
        open.push_back(CaseTag::open_v_window);
    if (N_eq_s && q_inf && par.p < par.u)
        open.push_back(CaseTag::open_order_equal_s_sup_q_morrey);
    if (par.v == 1 && par.p < 1 && par.s > crit_p && par.s <= par.sigma_p())
        open.push_back(CaseTag::open_v_one_gap);

    verdict.kind = RegionVerdict::Kind::open;
    if (!open.empty()) {
        verdict.tag = open.front();
        verdict.matches = open;
    } else {
        verdict.tag = CaseTag::open_unclassified;
        verdict.matches = {CaseTag::open_unclassified};
    }
    return verdict;
}

} // namespace bml

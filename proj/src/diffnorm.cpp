#include "bml/diffnorm.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace bml {

std::vector<double> TLadder::levels(double a) const
{
    if (j_max < j_min) throw std::invalid_argument("TLadder: empty level range");
    if (per_octave < 1) throw std::invalid_argument("TLadder: per_octave must be >= 1");
    std::vector<double> out;
    for (int i = 0; i <= (j_max - j_min) * per_octave; ++i) {
        double e = j_min + double(i) / per_octave;
        double t = std::pow(2.0, -e);
        if (t <= a * (1 + 1e-12)) out.push_back(t);
    }
    return out;
}

double TLadder::level_weight() const { return std::numbers::ln2 / per_octave; }

void DiffParams::validate(const Grid&) const
{
    if (N < 1) throw std::invalid_argument("DiffParams: order N must be >= 1");
    if (!(v > 0)) throw std::invalid_argument("DiffParams: inner exponent v must be positive");
    if (!(a >= 1)) throw std::invalid_argument("DiffParams: outer limit a must be >= 1");
    if (h_cap < 1) throw std::invalid_argument("DiffParams: h_cap must be >= 1");
}

namespace {

double binom(int n, int k)
{
    double r = 1;
    for (int i = 1; i <= k; ++i) r = r * double(n - k + i) / double(i);
    return r;
}

std::vector<double> signed_binomials(int N)
{
    std::vector<double> c(std::size_t(N) + 1);
    for (int k = 0; k <= N; ++k)
        c[std::size_t(k)] = ((N - k) % 2 ? -1.0 : 1.0) * binom(N, k);
    return c;
}

} // namespace

SampledFunction finite_difference(const SampledFunction& f, const Point& h, int N)
{
    if (N < 1) throw std::invalid_argument("finite_difference: order must be >= 1");
    const Grid& g = f.grid();
    std::array<std::int64_t, 2> k = {0, 0};
    for (int ax = 0; ax < g.dim; ++ax) k[ax] = aligned_steps(h[ax], g.dx);
    const double hlen = norm2(h, g.dim);
    if (hlen * N > g.R / 2 + 1e-12)
        throw std::invalid_argument("finite_difference: N|h| exceeds the R/2 margin");
    const std::vector<double> c = signed_binomials(N);
    std::vector<complex> out(g.size());
    if (g.dim == 1) {
        for (std::int64_t i = 0; i < g.n; ++i) {
            complex acc = 0;
            for (int m = 0; m <= N; ++m) acc += c[std::size_t(m)] * f.at(i + m * k[0]);
            out[std::size_t(i)] = acc;
        }
    } else {
        for (std::int64_t i0 = 0; i0 < g.n; ++i0)
            for (std::int64_t i1 = 0; i1 < g.n; ++i1) {
                complex acc = 0;
                for (int m = 0; m <= N; ++m)
                    acc += c[std::size_t(m)] * f.at(i0 + m * k[0], i1 + m * k[1]);
                out[g.flat(i0, i1)] = acc;
            }
    }
    const double sr = std::min(f.support_radius() + N * hlen, double(g.R));
    auto margin = sr > g.R / 2 ? SampledFunction::Margin::waived
                               : SampledFunction::Margin::required;
    return SampledFunction(g, std::move(out), sr, margin);
}

HSet h_samples(const Grid& g, double t, int cap)
{
    HSet hs;
    const double cell = g.dim == 1 ? g.dx : g.dx * g.dx;
    const std::int64_t reach = std::int64_t(std::ceil(t / g.dx));
    std::vector<std::array<std::int64_t, 2>> all;
    if (g.dim == 1) {
        for (std::int64_t i = -reach; i <= reach; ++i)
            if (std::abs(double(i)) * g.dx < t) all.push_back({i, 0});
    } else {
        const double t2 = t * t;
        for (std::int64_t i0 = -reach; i0 <= reach; ++i0)
            for (std::int64_t i1 = -reach; i1 <= reach; ++i1) {
                double x0 = double(i0) * g.dx, x1 = double(i1) * g.dx;
                if (x0 * x0 + x1 * x1 < t2) all.push_back({i0, i1});
            }
    }
    hs.full_count = all.size();
    if (int(all.size()) <= cap) {
        hs.offsets = std::move(all);
        hs.weights.assign(hs.offsets.size(), cell);
        return hs;
    }
    // Stratify by dyadic shells of |h|; within a shell keep a deterministic
    // stride subsample and let the kept offsets absorb the shell's measure.
    auto shell_of = [&](const std::array<std::int64_t, 2>& o) {
        double len = norm2({double(o[0]) * g.dx, double(o[1]) * g.dx}, g.dim);
        if (len == 0) return 0;
        int s = 1;
        double bound = t / 2;
        while (len < bound && s < 48) {
            bound /= 2;
            ++s;
        }
        return s;
    };
    int max_shell = 0;
    for (const auto& o : all) max_shell = std::max(max_shell, shell_of(o));
    std::vector<std::vector<std::array<std::int64_t, 2>>> shells(std::size_t(max_shell) + 1);
    for (const auto& o : all) shells[std::size_t(shell_of(o))].push_back(o);
    for (const auto& shell : shells) {
        if (shell.empty()) continue;
        std::size_t quota = std::max<std::size_t>(
            1, std::size_t(double(cap) * double(shell.size()) / double(all.size())));
        std::size_t stride = std::max<std::size_t>(1, shell.size() / quota);
        std::size_t kept = 0;
        for (std::size_t i = 0; i < shell.size(); i += stride) ++kept;
        const double w = cell * double(shell.size()) / double(kept);
        for (std::size_t i = 0; i < shell.size(); i += stride) {
            hs.offsets.push_back(shell[i]);
            hs.weights.push_back(w);
        }
    }
    return hs;
}

double HSet::total_weight() const
{
    double s = 0;
    for (double w : weights) s += w;
    return s;
}

SampledFunction ball_avg_difference(const SampledFunction& f, double t,
                                    const DiffParams& par)
{
    par.validate(f.grid());
    const Grid& g = f.grid();
    if (!(t > g.dx))
        throw std::invalid_argument("ball_avg_difference: t below grid resolution");
    HSet hs = h_samples(g, t, par.h_cap);
    if (hs.offsets.size() <= 1)  // only h = 0 present
        throw std::invalid_argument("ball_avg_difference: empty h-sample set");
    const bool sup_mod = std::isinf(par.v);
    const std::vector<double> c = signed_binomials(par.N);
    const std::size_t total = g.size();
    std::vector<double> acc(total, 0.0);
    for (std::size_t hi = 0; hi < hs.offsets.size(); ++hi) {
        const auto& o = hs.offsets[hi];
        if (o[0] == 0 && o[1] == 0) continue;  // D^N_0 f = 0 contributes nothing
        const double w = hs.weights[hi];
        if (g.dim == 1) {
            for (std::int64_t i = 0; i < g.n; ++i) {
                complex d = 0;
                for (int m = 0; m <= par.N; ++m)
                    d += c[std::size_t(m)] * f.at(i + m * o[0]);
                double ad = std::abs(d);
                if (sup_mod)
                    acc[std::size_t(i)] = std::max(acc[std::size_t(i)], ad);
                else if (ad > 0)
                    acc[std::size_t(i)] += std::pow(ad, par.v) * w;
            }
        } else {
            for (std::int64_t i0 = 0; i0 < g.n; ++i0)
                for (std::int64_t i1 = 0; i1 < g.n; ++i1) {
                    complex d = 0;
                    for (int m = 0; m <= par.N; ++m)
                        d += c[std::size_t(m)] * f.at(i0 + m * o[0], i1 + m * o[1]);
                    double ad = std::abs(d);
                    std::size_t fl = g.flat(i0, i1);
                    if (sup_mod)
                        acc[fl] = std::max(acc[fl], ad);
                    else if (ad > 0)
                        acc[fl] += std::pow(ad, par.v) * w;
                }
        }
    }
    std::vector<complex> out(total);
    for (std::size_t i = 0; i < total; ++i)
        out[i] = sup_mod ? acc[i] : (acc[i] > 0 ? std::pow(acc[i], 1.0 / par.v) : 0.0);
    const double sr = std::min(f.support_radius() + par.N * t, double(g.R));
    auto margin = sr > g.R / 2 ? SampledFunction::Margin::waived
                               : SampledFunction::Margin::required;
    return SampledFunction(g, std::move(out), sr, margin);
}

namespace {

struct LevelSelection {
    std::vector<double> usable;       // descending t
    std::vector<std::string> flags;
};

LevelSelection select_levels(const Grid& g, const DiffParams& par)
{
    LevelSelection sel;
    const double t_lo = 2 * g.dx;
    const double t_hi = g.R / (2.0 * par.N);
    int dropped_lo = 0, dropped_hi = 0;
    for (double t : par.ladder.levels(par.a)) {
        if (t < t_lo) { ++dropped_lo; continue; }
        if (t > t_hi * (1 + 1e-12)) { ++dropped_hi; continue; }
        sel.usable.push_back(t);
    }
    if (dropped_lo)
        sel.flags.push_back(std::to_string(dropped_lo) +
                            " levels below grid resolution excluded");
    if (dropped_hi)
        sel.flags.push_back(std::to_string(dropped_hi) +
                            " levels above the wrap-safe range excluded");
    return sel;
}

void fill_ladder_metadata(NormEstimate& est, const DiffParams& par,
                          const LevelSelection& sel, const BallFamily& family)
{
    est.trunc.levels_per_octave = par.ladder.per_octave;
    if (!sel.usable.empty()) {
        est.trunc.t_max = sel.usable.front();
        est.trunc.t_min = sel.usable.back();
    }
    est.trunc.flags = sel.flags;
    est.trunc.family_centers = int(family.anchors().size());
    est.trunc.family_radii = int(family.radii().size());
    if (!family.radii().empty()) {
        est.trunc.r_min = family.radii().front();
        est.trunc.r_max = family.radii().back();
    }
}

} // namespace

NormEstimate diff_norm_va(const SampledFunction& f, double s, double u, double p,
                          double q, const DiffParams& par, const BallFamily& family)
{
    par.validate(f.grid());
    if (!(q > 0)) throw std::invalid_argument("diff_norm_va: q must be positive");
    const Grid& g = f.grid();
    const double first = morrey_norm(f, u, p, family).value;
    const bool sup_mod = std::isinf(q);
    const double dv = std::isinf(par.v) ? 0.0 : double(g.dim) / par.v;
    LevelSelection sel = select_levels(g, par);

    NormEstimate est;
    fill_ladder_metadata(est, par, sel, family);
    double acc = 0;
    const double w = par.ladder.level_weight();
    for (double t : sel.usable) {
        SampledFunction avg = ball_avg_difference(f, t, par);
        double m = morrey_norm(avg, u, p, family).value;
        double block = std::pow(t, -s - dv) * m;
        est.blocks.push_back(block);
        if (sup_mod)
            acc = std::max(acc, block);
        else
            acc += std::pow(block, q) * w;
        est.partials.emplace_back(t, first + (sup_mod ? acc : std::pow(acc, 1.0 / q)));
    }
    est.value = first + (sup_mod ? acc : std::pow(acc, 1.0 / q));
    return est;
}

namespace {

/// Moving local L_v mass: x -> ( int_{B(x,1)} |f|^v dy )^{1/v}, v=inf -> max.
SampledFunction local_lv_average(const SampledFunction& f, double v)
{
    const Grid& g = f.grid();
    const bool sup_mod = std::isinf(v);
    const double cell = g.dim == 1 ? g.dx : g.dx * g.dx;
    const std::int64_t reach = std::int64_t(std::ceil(1.0 / g.dx));
    const std::size_t total = g.size();
    std::vector<double> pv(total);
    for (std::size_t i = 0; i < total; ++i) {
        double av = std::abs(f.value(i));
        pv[i] = sup_mod ? av : (av > 0 ? std::pow(av, v) : 0.0);
    }
    std::vector<complex> out(total);
    if (g.dim == 1) {
        for (std::int64_t i = 0; i < g.n; ++i) {
            double acc = 0;
            for (std::int64_t j = std::max<std::int64_t>(0, i - reach);
                 j <= std::min<std::int64_t>(g.n - 1, i + reach); ++j) {
                if (std::abs(double(j - i)) * g.dx < 1.0)
                    acc = sup_mod ? std::max(acc, pv[std::size_t(j)])
                                  : acc + pv[std::size_t(j)] * cell;
            }
            out[std::size_t(i)] = sup_mod ? acc : (acc > 0 ? std::pow(acc, 1.0 / v) : 0.0);
        }
    } else {
        // row prefix sums make each window row O(1)
        std::vector<double> pref(std::size_t(g.n) * (g.n + 1), 0.0);
        for (std::int64_t r = 0; r < g.n; ++r)
            for (std::int64_t c0 = 0; c0 < g.n; ++c0)
                pref[std::size_t(r) * (g.n + 1) + c0 + 1] =
                    pref[std::size_t(r) * (g.n + 1) + c0] + pv[g.flat(r, c0)];
        for (std::int64_t i0 = 0; i0 < g.n; ++i0)
            for (std::int64_t i1 = 0; i1 < g.n; ++i1) {
                double acc = 0;
                for (std::int64_t r = std::max<std::int64_t>(0, i0 - reach);
                     r <= std::min<std::int64_t>(g.n - 1, i0 + reach); ++r) {
                    double dy = double(r - i0) * g.dx;
                    double rem = 1.0 - dy * dy;
                    if (rem <= 0) continue;
                    double hw = std::sqrt(rem);
                    std::int64_t lo = std::max<std::int64_t>(
                        0, i1 - std::int64_t(std::floor(hw / g.dx)) - 1);
                    std::int64_t hi = std::min<std::int64_t>(
                        g.n - 1, i1 + std::int64_t(std::floor(hw / g.dx)) + 1);
                    while (lo <= hi) {
                        double dxr = double(lo - i1) * g.dx;
                        if (dy * dy + dxr * dxr < 1.0) break;
                        ++lo;
                    }
                    while (lo <= hi) {
                        double dxr = double(hi - i1) * g.dx;
                        if (dy * dy + dxr * dxr < 1.0) break;
                        --hi;
                    }
                    if (lo > hi) continue;
                    if (sup_mod) {
                        for (std::int64_t c0 = lo; c0 <= hi; ++c0)
                            acc = std::max(acc, pv[g.flat(r, c0)]);
                    } else {
                        acc += (pref[std::size_t(r) * (g.n + 1) + hi + 1] -
                                pref[std::size_t(r) * (g.n + 1) + lo]) *
                               cell;
                    }
                }
                out[g.flat(i0, i1)] =
                    sup_mod ? acc : (acc > 0 ? std::pow(acc, 1.0 / v) : 0.0);
            }
    }
    const double sr = std::min(f.support_radius() + 1.0, double(g.R));
    auto margin = sr > g.R / 2 ? SampledFunction::Margin::waived
                               : SampledFunction::Margin::required;
    return SampledFunction(g, std::move(out), sr, margin);
}

NormEstimate dyadic_sum_norm(const SampledFunction& f, double first_term, double s,
                             double u, double p, double q, const DiffParams& par,
                             const BallFamily& family)
{
    const Grid& g = f.grid();
    const bool sup_mod = std::isinf(q);
    const double dv = std::isinf(par.v) ? 0.0 : double(g.dim) / par.v;
    // the dyadic sum runs over integer levels j >= 1 (t = 2^{-j} <= 1/2)
    LevelSelection sel = select_levels(g, par);
    NormEstimate est;
    fill_ladder_metadata(est, par, sel, family);
    double acc = sup_mod ? first_term : std::pow(first_term, q);
    est.partials.emplace_back(1.0, sup_mod ? acc : std::pow(acc, 1.0 / q));
    for (double t : sel.usable) {
        if (t > 0.5 * (1 + 1e-12)) continue;
        double j = -std::log2(t);
        if (std::abs(j - std::round(j)) > 1e-9) continue;  // integer levels only
        SampledFunction avg = ball_avg_difference(f, t, par);
        double m = morrey_norm(avg, u, p, family).value;
        double block = std::pow(2.0, j * (s + dv)) * m;
        est.blocks.push_back(block);
        if (sup_mod)
            acc = std::max(acc, block);
        else
            acc += std::pow(block, q);
        est.partials.emplace_back(t, sup_mod ? acc : std::pow(acc, 1.0 / q));
    }
    est.value = sup_mod ? acc : std::pow(acc, 1.0 / q);
    return est;
}

} // namespace

NormEstimate diff_norm_club(const SampledFunction& f, double s, double u, double p,
                            double q, const DiffParams& par, const BallFamily& family)
{
    par.validate(f.grid());
    if (!(q > 0)) throw std::invalid_argument("diff_norm_club: q must be positive");
    double first = morrey_norm(local_lv_average(f, par.v), u, p, family).value;
    return dyadic_sum_norm(f, first, s, u, p, q, par, family);
}

NormEstimate diff_norm_spade(const SampledFunction& f, double s, double u, double p,
                             double q, const DiffParams& par, const BallFamily& family)
{
    par.validate(f.grid());
    if (!(q > 0)) throw std::invalid_argument("diff_norm_spade: q must be positive");
    double first = morrey_norm(f, u, p, family).value;
    return dyadic_sum_norm(f, first, s, u, p, q, par, family);
}

NormEstimate modulus_norm(const SampledFunction& f, double s, double u, double p,
                          double q, const DiffParams& par, const BallFamily& family)
{
    par.validate(f.grid());
    if (!(q > 0)) throw std::invalid_argument("modulus_norm: q must be positive");
    const Grid& g = f.grid();
    const double first = morrey_norm(f, u, p, family).value;
    const bool sup_mod = std::isinf(q);
    LevelSelection sel = select_levels(g, par);

    NormEstimate est;
    fill_ladder_metadata(est, par, sel, family);
    double acc = 0;
    const double w = par.ladder.level_weight();
    double inner_sup = 0;  // nondecreasing in t: iterate ascending, carry the sup
    std::vector<std::pair<double, double>> blocks_by_t;
    std::vector<std::array<std::int64_t, 2>> seen;
    for (auto it = sel.usable.rbegin(); it != sel.usable.rend(); ++it) {
        double t = *it;
        HSet hs = h_samples(g, t, par.h_cap);
        for (const auto& o : hs.offsets) {
            if (o[0] == 0 && o[1] == 0) continue;
            if (std::find(seen.begin(), seen.end(), o) != seen.end()) continue;
            seen.push_back(o);
            Point h = {double(o[0]) * g.dx, double(o[1]) * g.dx};
            double m = morrey_norm(finite_difference(f, h, par.N), u, p, family).value;
            inner_sup = std::max(inner_sup, m);
        }
        blocks_by_t.emplace_back(t, inner_sup);
    }
    for (auto it = blocks_by_t.rbegin(); it != blocks_by_t.rend(); ++it) {
        double block = std::pow(it->first, -s) * it->second;
        est.blocks.push_back(block);
        if (sup_mod)
            acc = std::max(acc, block);
        else
            acc += std::pow(block, q) * w;
        est.partials.emplace_back(it->first,
                                  first + (sup_mod ? acc : std::pow(acc, 1.0 / q)));
    }
    est.value = first + (sup_mod ? acc : std::pow(acc, 1.0 / q));
    return est;
}

} // namespace bml

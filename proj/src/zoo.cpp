#include "bml/zoo.hpp"

#include "bml/diffnorm.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>

namespace bml {

// ---------------------------------------------------------------------------
// singular power function
// ---------------------------------------------------------------------------

Point singular_center(const Grid& g, const SingularFnConfig& cfg)
{
    if (cfg.center) return *cfg.center;
    Point c{0, 0};
    for (int ax = 0; ax < g.dim; ++ax) c[ax] = -g.dx / 2;
    return c;
}

static double cutoff_rho(double dist, double theta)
{
    if (dist <= theta) return 1;
    if (dist >= 2 * theta) return 0;
    return smooth_step((2 * theta - dist) / theta);
}

SampledFunction make_f_alpha_delta(const Grid& g, const SingularFnConfig& cfg)
{
    if (!(cfg.alpha < 0)) throw std::invalid_argument("singular profile: alpha must be negative");
    if (cfg.delta < 0) throw std::invalid_argument("singular profile: delta must be >= 0");
    if (!(cfg.theta > 0) || 2 * cfg.theta > g.R / 4)
        throw std::invalid_argument("singular profile: need 0 < 2*theta <= R/4");
    if (2 * cfg.theta >= 1)
        throw std::invalid_argument("singular profile: need 2*theta < 1 so -ln|x| stays positive");
    const Point c = singular_center(g, cfg);
    std::vector<complex> vals(g.size());
    for (std::size_t i = 0; i < vals.size(); ++i) {
        Point x = g.point(i);
        Point rel = {x[0] - c[0], g.dim == 2 ? x[1] - c[1] : 0.0};
        double dist = norm2(rel, g.dim);
        if (dist >= 2 * cfg.theta) continue;
        if (dist == 0) continue;  // regularization: the singular sample is zeroed
        double v = cutoff_rho(dist, cfg.theta) * std::pow(dist, cfg.alpha);
        if (cfg.delta > 0) v *= std::pow(-std::log(dist), -cfg.delta);
        vals[i] = v;
    }
    const double sr = 2 * cfg.theta + norm2(c, g.dim);
    return SampledFunction(g, std::move(vals), sr);
}

bool singular_energy_integrable(const SingularFnConfig& cfg, double p, int dim)
{
    return cfg.alpha > -double(dim) / p;
}

Membership membership_oracle(int dim, double s, double u, double p, double q,
                             double alpha, double delta)
{
    if (!(s > 0)) throw std::invalid_argument("membership_oracle: requires s > 0");
    if (!(p >= 1) || !(p <= u) || std::isinf(u))
        throw std::invalid_argument("membership_oracle: requires 1 <= p <= u < inf");
    if (!(q > 0)) throw std::invalid_argument("membership_oracle: requires q > 0");
    if (!(alpha < 0) || delta < 0)
        throw std::invalid_argument("membership_oracle: requires alpha < 0, delta >= 0");
    const double threshold = double(dim) / u + alpha;
    bool member;
    if (delta == 0)
        member = s < threshold || (s == threshold && std::isinf(q));
    else
        member = s < threshold || (s == threshold && delta * q > 1);
    return member ? Membership::member : Membership::not_member;
}

// ---------------------------------------------------------------------------
// bumps
// ---------------------------------------------------------------------------

SampledFunction make_plateau_bump(const Grid& g)
{
    std::vector<complex> vals(g.size());
    for (std::size_t i = 0; i < vals.size(); ++i) {
        double rho = norm2(g.point(i), g.dim);
        if (rho <= 1)
            vals[i] = 1;
        else if (rho < 2)
            vals[i] = smooth_step(2 - rho);
    }
    return SampledFunction(g, std::move(vals), 2.0);
}

SampledFunction make_exp_bump(const Grid& g, int N)
{
    if (N < 1) throw std::invalid_argument("make_exp_bump: N must be >= 1");
    const double plateau = 2.0 * N + 2.0;
    const double outer = 3.0 * N + 3.0;
    std::vector<complex> vals(g.size());
    for (std::size_t i = 0; i < vals.size(); ++i) {
        Point x = g.point(i);
        double rho = norm2(x, g.dim);
        if (rho >= outer) continue;
        double cut = rho <= plateau ? 1.0 : smooth_step((outer - rho) / (N + 1.0));
        double expo = x[0] + (g.dim == 2 ? x[1] : 0.0);
        vals[i] = cut * std::exp(expo);
    }
    return SampledFunction(g, std::move(vals), outer);
}

// ---------------------------------------------------------------------------
// lacunary sum
// ---------------------------------------------------------------------------

void OswaldConfig::validate() const
{
    if (dim != 1 && dim != 2) throw std::invalid_argument("lacunary config: dim must be 1 or 2");
    if (r <= 4) throw std::invalid_argument("lacunary config: r must be an integer > 4");
    if (N < 1) throw std::invalid_argument("lacunary config: N must be >= 1");
    if (std::ldexp(1.0, r + 1) < N + 4)
        throw std::invalid_argument("lacunary config: needs 2^{r+1} >= N + 4");
    if (!(u > 0) || std::isinf(u)) throw std::invalid_argument("lacunary config: bad u");
    if (k_max < 1) throw std::invalid_argument("lacunary config: k_max must be >= 1");
    if (L < -1) throw std::invalid_argument("lacunary config: L must be >= -1");
}

double OswaldConfig::corner_index() const { return std::pow(32.0, r - 2); }

double OswaldConfig::amplitude(int k) const
{
    return std::pow(2.0, level(k) * (double(dim) / u - N));
}

namespace {

// per-axis profile support inside [0,1): chosen so the tensor support also
// stays inside the unit ball for d <= 2 (corner norm sqrt(2)*0.65 < 1)
constexpr double kAxisLo = 0.05;
constexpr double kAxisHi = 0.65;

double axis_bump(double y)
{
    if (y <= kAxisLo || y >= kAxisHi) return 0;
    double tau = (y - kAxisLo) / (kAxisHi - kAxisLo);
    return std::exp(4.0 - 1.0 / (tau * (1 - tau)));  // peak value 1 at tau = 1/2
}

// 1D moments int y^t axis_bump(y) dy by midpoint quadrature, cached.
double axis_moment(int t)
{
    static std::map<int, double> cache;
    auto it = cache.find(t);
    if (it != cache.end()) return it->second;
    const int n = 1 << 15;
    const double w = (kAxisHi - kAxisLo) / n;
    double acc = 0;
    for (int i = 0; i < n; ++i) {
        double y = kAxisLo + (i + 0.5) * w;
        acc += std::pow(y, t) * axis_bump(y) * w;
    }
    cache[t] = acc;
    return acc;
}

// small dense solve with partial pivoting
std::vector<double> gauss_solve(std::vector<std::vector<double>> A, std::vector<double> b)
{
    const std::size_t n = A.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(A[r][col]) > std::abs(A[piv][col])) piv = r;
        std::swap(A[col], A[piv]);
        std::swap(b[col], b[piv]);
        if (A[col][col] == 0) throw std::runtime_error("moment system is singular");
        for (std::size_t r = col + 1; r < n; ++r) {
            double f = A[r][col] / A[col][col];
            for (std::size_t c = col; c < n; ++c) A[r][c] -= f * A[col][c];
            b[r] -= f * b[col];
        }
    }
    std::vector<double> x(n);
    for (std::size_t ri = n; ri-- > 0;) {
        double acc = b[ri];
        for (std::size_t c = ri + 1; c < n; ++c) acc -= A[ri][c] * x[c];
        x[ri] = acc / A[ri][ri];
    }
    return x;
}

std::vector<std::array<int, 2>> monomials_upto(int dim, int deg)
{
    std::vector<std::array<int, 2>> out;
    for (int total = 0; total <= deg; ++total)
        for (int a = total; a >= 0; --a) {
            if (dim == 1) {
                if (a == total) out.push_back({total, 0});
            } else {
                out.push_back({a, total - a});
            }
        }
    return out;
}

double multi_moment(int dim, const std::array<int, 2>& beta)
{
    double m = axis_moment(beta[0]);
    if (dim == 2) m *= axis_moment(beta[1]);
    return m;
}

// Polynomial factor making the profile's moments vanish up to order L:
// phi = bump * (sum_gamma c_gamma y^gamma + y_extra) with the extra monomial
// of degree L+1 pinned to coefficient one.
struct MomentCorrection {
    std::vector<std::array<int, 2>> basis;
    std::vector<double> coeff;
};

const MomentCorrection& moment_correction(int dim, int L)
{
    static std::map<std::pair<int, int>, MomentCorrection> cache;
    auto key = std::make_pair(dim, L);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;

    MomentCorrection mc;
    if (L >= 0) {
        auto constraints = monomials_upto(dim, L);
        auto basis = constraints;  // coefficients to solve for
        std::array<int, 2> extra = {L + 1, 0};
        std::vector<std::vector<double>> A(constraints.size(),
                                           std::vector<double>(basis.size()));
        std::vector<double> b(constraints.size());
        for (std::size_t bi = 0; bi < constraints.size(); ++bi) {
            for (std::size_t gi = 0; gi < basis.size(); ++gi)
                A[bi][gi] = multi_moment(
                    dim, {constraints[bi][0] + basis[gi][0],
                          constraints[bi][1] + basis[gi][1]});
            b[bi] = -multi_moment(dim, {constraints[bi][0] + extra[0],
                                        constraints[bi][1] + extra[1]});
        }
        mc.coeff = gauss_solve(std::move(A), std::move(b));
        mc.basis = basis;
        mc.basis.push_back(extra);
        mc.coeff.push_back(1.0);
    }
    return cache.emplace(key, std::move(mc)).first->second;
}

} // namespace

double oswald_profile(const OswaldConfig& cfg, const Point& y)
{
    double b = axis_bump(y[0]);
    if (cfg.dim == 2) b *= axis_bump(y[1]);
    if (b == 0) return 0;
    if (cfg.L < 0) return b;
    const MomentCorrection& mc = moment_correction(cfg.dim, cfg.L);
    double poly = 0;
    for (std::size_t i = 0; i < mc.basis.size(); ++i) {
        double mono = std::pow(y[0], mc.basis[i][0]);
        if (cfg.dim == 2) mono *= std::pow(y[1], mc.basis[i][1]);
        poly += mc.coeff[i] * mono;
    }
    return b * poly;
}

bool Box::intersects(const Box& o, int dim) const
{
    for (int ax = 0; ax < dim; ++ax)
        if (hi[ax] <= o.lo[ax] || o.hi[ax] <= lo[ax]) return false;
    return true;
}

Box oswald_term_box(const OswaldConfig& cfg, int k)
{
    const double scale = std::ldexp(1.0, -cfg.level(k));
    const double X = cfg.corner_index();
    Box box;
    for (int ax = 0; ax < cfg.dim; ++ax) {
        box.lo[ax] = scale * (X + kAxisLo);
        box.hi[ax] = scale * (X + kAxisHi);
    }
    return box;
}

double oswald_term_value(const OswaldConfig& cfg, int k, const Point& x)
{
    const double factor = std::ldexp(1.0, cfg.level(k));
    const double X = cfg.corner_index();
    Point y{};
    for (int ax = 0; ax < cfg.dim; ++ax) y[ax] = factor * x[ax] - X;
    return cfg.amplitude(k) * oswald_profile(cfg, y);
}

SampledFunction make_oswald(const Grid& g, const OswaldConfig& cfg)
{
    cfg.validate();
    if (cfg.dim != g.dim) throw std::invalid_argument("make_oswald: dimension mismatch");
    const double finest = std::ldexp(1.0, -cfg.level(cfg.k_max));
    if (finest < 4 * g.dx)
        throw std::invalid_argument("make_oswald: grid cannot resolve level n_k of the last summand");
    double sr = 0;
    for (int k = 1; k <= cfg.k_max; ++k) {
        Box box = oswald_term_box(cfg, k);
        Point corner{};
        for (int ax = 0; ax < g.dim; ++ax) corner[ax] = std::max(std::abs(box.lo[ax]), std::abs(box.hi[ax]));
        sr = std::max(sr, norm2(corner, g.dim));
    }
    std::vector<complex> vals(g.size());
    for (int k = 1; k <= cfg.k_max; ++k) {
        Box box = oswald_term_box(cfg, k);
        std::int64_t lo0 = std::int64_t(std::floor((box.lo[0] + g.R) / g.dx));
        std::int64_t hi0 = std::int64_t(std::ceil((box.hi[0] + g.R) / g.dx));
        lo0 = std::clamp<std::int64_t>(lo0, 0, g.n - 1);
        hi0 = std::clamp<std::int64_t>(hi0, 0, g.n - 1);
        if (g.dim == 1) {
            for (std::int64_t i = lo0; i <= hi0; ++i)
                vals[std::size_t(i)] += oswald_term_value(cfg, k, {g.coord(i), 0.0});
        } else {
            std::int64_t lo1 = std::clamp<std::int64_t>(
                std::int64_t(std::floor((box.lo[1] + g.R) / g.dx)), 0, g.n - 1);
            std::int64_t hi1 = std::clamp<std::int64_t>(
                std::int64_t(std::ceil((box.hi[1] + g.R) / g.dx)), 0, g.n - 1);
            for (std::int64_t i0 = lo0; i0 <= hi0; ++i0)
                for (std::int64_t i1 = lo1; i1 <= hi1; ++i1)
                    vals[g.flat(i0, i1)] +=
                        oswald_term_value(cfg, k, {g.coord(i0), g.coord(i1)});
        }
    }
    return SampledFunction(g, std::move(vals), sr);
}

namespace {

// centered-difference estimate of D^gamma phi at y, recursing over axes
double profile_derivative(const OswaldConfig& cfg, std::array<int, 2> gamma,
                          Point y, double eta)
{
    for (int ax = 0; ax < cfg.dim; ++ax) {
        if (gamma[ax] > 0) {
            auto lower = gamma;
            --lower[ax];
            Point yp = y, ym = y;
            yp[ax] += eta;
            ym[ax] -= eta;
            return (profile_derivative(cfg, lower, yp, eta) -
                    profile_derivative(cfg, lower, ym, eta)) /
                   (2 * eta);
        }
    }
    return oswald_profile(cfg, y);
}

} // namespace

double oswald_profile_lower_constant(const OswaldConfig& cfg, int samples)
{
    cfg.validate();
    const int per_axis = cfg.dim == 1 ? samples : std::max(16, int(std::sqrt(double(samples))));
    const double w = (kAxisHi - kAxisLo) / per_axis;
    const double eta = w;
    auto gammas = monomials_upto(cfg.dim, cfg.N);
    std::vector<double> floor_vals;
    auto visit = [&](const Point& y) {
        double m = INFINITY;
        for (const auto& gm : gammas)
            m = std::min(m, std::abs(profile_derivative(cfg, gm, y, eta)));
        floor_vals.push_back(m);
    };
    if (cfg.dim == 1) {
        for (int i = 0; i < per_axis; ++i)
            visit({kAxisLo + (i + 0.5) * w, 0.0});
    } else {
        for (int i0 = 0; i0 < per_axis; ++i0)
            for (int i1 = 0; i1 < per_axis; ++i1)
                visit({kAxisLo + (i0 + 0.5) * w, kAxisLo + (i1 + 0.5) * w});
    }
    // largest c with |{m > c}| > |supp|/2: the median of the sampled minima
    std::sort(floor_vals.begin(), floor_vals.end(), std::greater<>());
    return floor_vals[floor_vals.size() / 2];
}

// ---------------------------------------------------------------------------
// sequence space and atoms
// ---------------------------------------------------------------------------

NormEstimate sequence_norm(const CoefficientSequence& lambda, const Grid& g,
                           double s, double u, double p, double q,
                           const BallFamily& cube_family)
{
    if (!(q > 0)) throw std::invalid_argument("sequence_norm: q must be positive");
    std::map<int, std::vector<const CoefficientSequence::Entry*>> by_level;
    for (const auto& e : lambda.entries) {
        if (e.j < 0) throw std::invalid_argument("sequence_norm: level j must be >= 0");
        double side = std::ldexp(1.0, -e.j);
        if (side < g.dx)
            throw std::invalid_argument("sequence_norm: level finer than the grid resolution");
        by_level[e.j].push_back(&e);
    }
    const bool sup_mod = std::isinf(q);
    NormEstimate est;
    double acc = 0;
    for (const auto& [j, entries] : by_level) {
        const double side = std::ldexp(1.0, -j);
        const double height = std::pow(2.0, j * double(g.dim) / u);
        std::vector<complex> vals(g.size());
        double sr = 0;
        for (const auto* e : entries) {
            Point corner = {side * double(e->k[0]), side * double(e->k[1])};
            for (int ax = 0; ax < g.dim; ++ax)
                if (corner[ax] < -g.R || corner[ax] + side > g.R)
                    throw std::invalid_argument("sequence_norm: cube leaves the grid box");
            std::int64_t lo0 = std::int64_t(std::ceil((corner[0] + g.R) / g.dx - 1e-9));
            std::int64_t hi0 = std::int64_t(std::floor((corner[0] + side + g.R) / g.dx - 1e-9));
            hi0 = std::min<std::int64_t>(hi0, g.n - 1);
            double far = 0;
            for (int ax = 0; ax < g.dim; ++ax)
                far += std::pow(std::max(std::abs(corner[ax]), std::abs(corner[ax] + side)), 2);
            sr = std::max(sr, std::sqrt(far));
            const double add = std::abs(e->value) * height;
            if (g.dim == 1) {
                for (std::int64_t i = lo0; i <= hi0; ++i)
                    if (g.coord(i) >= corner[0] && g.coord(i) < corner[0] + side)
                        vals[std::size_t(i)] += add;
            } else {
                std::int64_t lo1 = std::int64_t(std::ceil((corner[1] + g.R) / g.dx - 1e-9));
                std::int64_t hi1 = std::min<std::int64_t>(
                    std::int64_t(std::floor((corner[1] + side + g.R) / g.dx - 1e-9)), g.n - 1);
                for (std::int64_t i0 = lo0; i0 <= hi0; ++i0)
                    for (std::int64_t i1 = lo1; i1 <= hi1; ++i1)
                        if (g.coord(i0) >= corner[0] && g.coord(i0) < corner[0] + side &&
                            g.coord(i1) >= corner[1] && g.coord(i1) < corner[1] + side)
                            vals[g.flat(i0, i1)] += add;
            }
        }
        SampledFunction level_fn(g, std::move(vals), std::max(sr, g.dx),
                                 SampledFunction::Margin::waived);
        double m = morrey_norm(level_fn, u, p, cube_family).value;
        double block = std::pow(2.0, j * (s - double(g.dim) / u)) * m;
        est.blocks.push_back(block);
        if (sup_mod)
            acc = std::max(acc, block);
        else
            acc += std::pow(block, q);
        est.partials.emplace_back(double(j), sup_mod ? acc : std::pow(acc, 1.0 / q));
    }
    est.value = sup_mod ? acc : std::pow(acc, 1.0 / q);
    est.trunc.family_centers = int(cube_family.anchors().size());
    est.trunc.family_radii = int(cube_family.radii().size());
    return est;
}

bool AtomReport::all_pass() const
{
    for (const auto& c : checks)
        if (!c.pass()) return false;
    return true;
}

namespace {

double atom_derivative(const SampledFunction& f, std::array<int, 2> gamma,
                       std::int64_t i0, std::int64_t i1)
{
    const Grid& g = f.grid();
    for (int ax = 0; ax < g.dim; ++ax) {
        if (gamma[ax] > 0) {
            auto lower = gamma;
            --lower[ax];
            std::int64_t p0 = i0 + (ax == 0), m0 = i0 - (ax == 0);
            std::int64_t p1 = i1 + (ax == 1), m1 = i1 - (ax == 1);
            return (atom_derivative(f, lower, p0, p1) -
                    atom_derivative(f, lower, m0, m1)) /
                   (2 * g.dx);
        }
    }
    return std::abs(f.at(i0, i1));
}

} // namespace

AtomReport validate_atoms(const AtomFamily& family)
{
    if (family.C1 <= 1 || family.C2 <= 0)
        throw std::invalid_argument("validate_atoms: need C1 > 1 and C2 > 0");
    AtomReport report;
    for (std::size_t ai = 0; ai < family.atoms.size(); ++ai) {
        const auto& atom = family.atoms[ai];
        const Grid& g = atom.samples.grid();
        const double side = std::ldexp(1.0, -atom.j);
        AtomCheck chk;
        chk.index = ai;

        // (i) support inside the concentric dilation C1 * Q_{j,k}
        chk.support_ok = true;
        for (std::size_t i = 0; i < g.size(); ++i) {
            if (atom.samples.value(i) == complex{}) continue;
            Point x = g.point(i);
            for (int ax = 0; ax < g.dim; ++ax) {
                double centre = side * (double(atom.k[ax]) + 0.5);
                if (std::abs(x[ax] - centre) > family.C1 * side / 2) chk.support_ok = false;
            }
        }

        // (ii) derivative bounds with 10% grid-estimation headroom
        chk.derivative_ok = true;
        for (const auto& gm : monomials_upto(g.dim, family.K)) {
            double worst = 0;
            if (g.dim == 1) {
                for (std::int64_t i = family.K; i < g.n - family.K; ++i)
                    worst = std::max(worst, std::abs(atom_derivative(atom.samples, gm, i, 0)));
            } else {
                for (std::int64_t i0 = family.K; i0 < g.n - family.K; ++i0)
                    for (std::int64_t i1 = family.K; i1 < g.n - family.K; ++i1)
                        worst = std::max(worst,
                                         std::abs(atom_derivative(atom.samples, gm, i0, i1)));
            }
            double bound = family.C2 * std::pow(2.0, atom.j * double(gm[0] + gm[1]));
            chk.worst_derivative_ratio = std::max(chk.worst_derivative_ratio, worst / bound);
            if (worst > bound * 1.10) chk.derivative_ok = false;
        }

        // (iii) vanishing moments, quadrature residual relative to the L1 mass
        chk.moments_ok = true;
        if (family.L >= 0) {
            const double cell = g.dim == 1 ? g.dx : g.dx * g.dx;
            double mass = 0;
            for (std::size_t i = 0; i < g.size(); ++i)
                mass += std::abs(atom.samples.value(i)) * cell;
            const double diam = std::max(1.0, family.C1 * side);
            for (const auto& beta : monomials_upto(g.dim, family.L)) {
                complex mom = 0;
                for (std::size_t i = 0; i < g.size(); ++i) {
                    if (atom.samples.value(i) == complex{}) continue;
                    Point x = g.point(i);
                    double mono = std::pow(x[0], beta[0]);
                    if (g.dim == 2) mono *= std::pow(x[1], beta[1]);
                    mom += atom.samples.value(i) * mono * cell;
                }
                double rel = std::abs(mom) /
                             std::max(1e-300, mass * std::pow(diam, beta[0] + beta[1]));
                chk.worst_moment_residual = std::max(chk.worst_moment_residual, rel);
                if (rel > 1e-6) chk.moments_ok = false;
            }
        } else {
            chk.moments_ok = true;  // L = -1: the condition is empty
        }
        report.checks.push_back(chk);
    }
    return report;
}

SynthesisReport atomic_synthesis_check(const AtomFamily& family,
                                       const CoefficientSequence& lambda,
                                       double s, double u, double p, double q)
{
    if (family.atoms.empty())
        throw std::invalid_argument("atomic_synthesis_check: no atoms");
    const Grid& g = family.atoms.front().samples.grid();
    for (const auto& a : family.atoms)
        if (!a.samples.grid().same_layout(g))
            throw std::invalid_argument("atomic_synthesis_check: atoms live on different grids");
    const double sp = double(g.dim) * std::max(0.0, 1.0 / p - 1.0);
    if (family.K < std::max(0.0, s + 1))
        throw std::invalid_argument("atomic_synthesis_check: K below max(0, s+1)");
    if (family.L < std::max(-1.0, sp - s))
        throw std::invalid_argument("atomic_synthesis_check: L below max(-1, sigma_p - s)");

    std::map<std::pair<int, std::array<std::int64_t, 2>>, std::size_t> index;
    for (std::size_t i = 0; i < family.atoms.size(); ++i)
        index[{family.atoms[i].j, family.atoms[i].k}] = i;

    std::vector<complex> vals(g.size());
    double sr = g.dx;
    int j_max = 0;
    for (const auto& e : lambda.entries) {
        auto it = index.find({e.j, e.k});
        if (it == index.end())
            throw std::invalid_argument("atomic_synthesis_check: coefficient without an atom");
        const auto& atom = family.atoms[it->second];
        sr = std::max(sr, atom.samples.support_radius());
        j_max = std::max(j_max, e.j);
        for (std::size_t i = 0; i < g.size(); ++i) vals[i] += e.value * atom.samples.value(i);
    }
    auto margin = sr > g.R / 2 ? SampledFunction::Margin::waived
                               : SampledFunction::Margin::required;
    SampledFunction synth(g, std::move(vals), sr, margin);

    // common measurement apparatus for both refinement stages
    const double nyquist = std::numbers::pi / g.dx;
    int K_max = 1;
    while (3 * std::ldexp(1.0, K_max) < nyquist && K_max < 12) ++K_max;
    DyadicPartition part(g, K_max);
    BallFamily fam = BallFamily::standard(g, 8);
    BallFamily cubes = BallFamily::dyadic_cubes(g, 0, j_max, 4);

    SynthesisReport rep;
    rep.lhs = besov_morrey_norm(synth, part, s, u, p, q, fam).value;
    rep.rhs = sequence_norm(lambda, g, s, u, p, q, cubes).value;
    rep.ratio = rep.rhs > 0 ? rep.lhs / rep.rhs : 0;
    double lhs2 = besov_morrey_norm(synth, part, s, u, p, q, fam.refine()).value;
    double rhs2 = sequence_norm(lambda, g, s, u, p, q, cubes.refine()).value;
    rep.ratio_refined = rhs2 > 0 ? lhs2 / rhs2 : 0;
    rep.finite = std::isfinite(rep.ratio) && std::isfinite(rep.ratio_refined);
    return rep;
}

} // namespace bml

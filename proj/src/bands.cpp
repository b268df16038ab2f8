#include "bml/bands.hpp"

#include "bml/fft.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace bml {

double smooth_step(double t)
{
    if (t <= 0) return 0;
    if (t >= 1) return 1;
    double a = std::exp(-1.0 / t);
    double b = std::exp(-1.0 / (1 - t));
    return a / (a + b);
}

double DyadicPartition::phi0(double rho)
{
    rho = std::abs(rho);
    if (rho <= 1) return 1;
    if (rho >= 1.5) return 0;
    return smooth_step(2 * (1.5 - rho));
}

double DyadicPartition::band(int k, double rho)
{
    if (k == 0) return phi0(rho);
    return phi0(std::ldexp(rho, -k)) - phi0(std::ldexp(rho, -k + 1));
}

double DyadicPartition::freq_radius(std::size_t flat) const
{
    const int n = grid_.n;
    auto axis_freq = [&](std::int64_t m) {
        std::int64_t signed_m = m < n / 2 ? m : m - n;
        return std::numbers::pi * double(signed_m) / grid_.R;
    };
    if (grid_.dim == 1) return std::abs(axis_freq(std::int64_t(flat)));
    double f0 = axis_freq(std::int64_t(flat) / n);
    double f1 = axis_freq(std::int64_t(flat) % n);
    return std::hypot(f0, f1);
}

DyadicPartition::DyadicPartition(const Grid& g, int K_max) : grid_(g), K_max_(K_max)
{
    if (K_max < 1) throw std::invalid_argument("DyadicPartition: K_max must be >= 1");
    const double nyquist = std::numbers::pi / g.dx;
    if (3 * std::ldexp(1.0, K_max - 1) >= nyquist)
        throw std::invalid_argument(
            "DyadicPartition: top band exceeds the Nyquist radius (aliasing)");
    bands_.resize(std::size_t(K_max) + 1);
    const std::size_t total = g.size();
    for (int k = 0; k <= K_max; ++k) {
        bands_[std::size_t(k)].resize(total);
        for (std::size_t i = 0; i < total; ++i)
            bands_[std::size_t(k)][i] = band(k, freq_radius(i));
    }
}

DyadicPartition build_partition(const Grid& g, int K_max)
{
    return DyadicPartition(g, K_max);
}

SampledFunction band_project(const SampledFunction& f, const DyadicPartition& P,
                             int k)
{
    if (!P.grid().same_layout(f.grid()))
        throw std::invalid_argument("band_project: partition built for a different grid");
    if (k < 0 || k > P.K_max())
        throw std::invalid_argument("band_project: band index out of range");
    const Grid& g = f.grid();
    std::vector<complex> a = f.values();
    if (g.dim == 1)
        fft::transform(a, false);
    else
        fft::transform2d(a, g.n, false);
    const std::vector<double>& m = P.multiplier(k);
    for (std::size_t i = 0; i < a.size(); ++i) a[i] *= m[i];
    if (g.dim == 1)
        fft::transform(a, true);
    else
        fft::transform2d(a, g.n, true);
    return SampledFunction(g, std::move(a), g.R, SampledFunction::Margin::waived);
}

NormEstimate besov_morrey_norm(const SampledFunction& f, const DyadicPartition& P,
                               double s, double u, double p, double q,
                               const BallFamily& family)
{
    if (!(q > 0)) throw std::invalid_argument("besov_morrey_norm: q must be positive");
    NormEstimate est;
    est.trunc.band_cutoff = P.K_max();
    const bool sup_mod = std::isinf(q);
    double acc = 0;
    for (int k = 0; k <= P.K_max(); ++k) {
        SampledFunction block = band_project(f, P, k);
        double m = morrey_norm(block, u, p, family).value;
        est.blocks.push_back(m);
        double weighted = std::pow(2.0, double(k) * s) * m;
        if (sup_mod)
            acc = std::max(acc, weighted);
        else
            acc += std::pow(weighted, q);
        est.partials.emplace_back(double(k), sup_mod ? acc : std::pow(acc, 1.0 / q));
    }
    est.value = sup_mod ? acc : std::pow(acc, 1.0 / q);
    est.trunc.family_centers = int(family.anchors().size());
    est.trunc.family_radii = int(family.radii().size());
    if (!family.radii().empty()) {
        est.trunc.r_min = family.radii().front();
        est.trunc.r_max = family.radii().back();
    }
    return est;
}

} // namespace bml

/// \file rng.hpp
/// Small deterministic generator (splitmix64).  Experiments must reproduce
/// byte-identical reports across runs and platforms, so no std distributions.
#pragma once

#include <cstdint>

namespace bml {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next()
    {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    /// uniform in [0, 1)
    double uniform() { return double(next() >> 11) * 0x1.0p-53; }

    /// uniform in [lo, hi)
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// integer in [0, m)
    std::uint64_t below(std::uint64_t m) { return next() % m; }

private:
    std::uint64_t state_;
};

} // namespace bml

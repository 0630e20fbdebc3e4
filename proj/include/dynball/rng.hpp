#pragma once

#include <cstdint>
#include <random>

#include "dynball/geometry.hpp"

namespace dynball {

// Substream derivation so independent parts of an experiment can share one
// user-facing seed without coupling their draws.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t stream = 0) {
    return std::mt19937_64(splitmix64(seed + 0x1000 * stream));
}

// Uniform in [0, 1). Written out explicitly (not distribution objects) so
// draws are identical across standard library implementations.
inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform_range(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * uniform01(rng);
}

// Uniform w.r.t. area over a bounded domain; for the plane, uniform over
// the [-1, 1]^2 reference square.
inline Point2 sample_point(const Domain& d, std::mt19937_64& rng) {
    switch (d.kind) {
        case Domain::Kind::FlatTorus:
            return {uniform_range(rng, 0.0, d.period), uniform_range(rng, 0.0, d.period)};
        case Domain::Kind::ClosedDisc: {
            const double r = d.radius * std::sqrt(uniform01(rng));
            const double phi = 2.0 * M_PI * uniform01(rng);
            return {d.center.x + r * std::cos(phi), d.center.y + r * std::sin(phi)};
        }
        case Domain::Kind::Plane:
            break;
    }
    return {uniform_range(rng, -1.0, 1.0), uniform_range(rng, -1.0, 1.0)};
}

}  // namespace dynball

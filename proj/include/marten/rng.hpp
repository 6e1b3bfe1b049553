#pragma once

// Deterministic sampling helpers. All draws go through explicit formulas on
// top of mt19937_64 so that output streams are reproducible bit-for-bit for a
// given seed, independent of standard-library distribution internals.

#include <cstdint>
#include <random>

#include "marten/linalg.hpp"

namespace marten {

using Rng = std::mt19937_64;

inline double uniform01(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform(Rng& rng, double lo, double hi) {
    return lo + (hi - lo) * uniform01(rng);
}

inline double normal01(Rng& rng) {
    // Box-Muller; one value per call keeps the stream position predictable.
    double u1 = uniform01(rng), u2 = uniform01(rng);
    if (u1 < 1e-300) u1 = 1e-300;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
}

// Shoemake's uniform random rotation from three uniforms.
inline Mat3 random_rotation(Rng& rng) {
    double u1 = uniform01(rng), u2 = uniform01(rng), u3 = uniform01(rng);
    const double two_pi = 6.283185307179586476925286766559;
    double a = std::sqrt(1.0 - u1), b = std::sqrt(u1);
    Eigen::Quaterniond q(a * std::sin(two_pi * u2), a * std::cos(two_pi * u2),
                         b * std::sin(two_pi * u3), b * std::cos(two_pi * u3));
    return q.toRotationMatrix();
}

} // namespace marten

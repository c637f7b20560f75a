// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <numbers>
#include <stdexcept>
#include <string>

namespace rgame {

using Complex = std::complex<double>;

inline constexpr double pi = std::numbers::pi;

// Raised when an argument lies outside an operation's domain
// (point outside the lattice extent, singular formula input, ...).
class domain_error : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Raised when a caller breaks an operation's sequencing contract.
class contract_violation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

// sin(pi * x), exact zero at every integer x.
inline double sin_pi(double x) {
    double r = x - 2.0 * std::round(0.5 * x);  // r in [-1, 1]
    if (r == 0.0 || r == 1.0 || r == -1.0) {
        return 0.0;
    }
    if (r > 0.5) {
        r = 1.0 - r;
    } else if (r < -0.5) {
        r = -1.0 - r;
    }
    return std::sin(pi * r);
}

// Normalized cardinal sine sin(pi x) / (pi x); 1 at the origin, 0 at nonzero integers.
inline double sinc_pi(double x) {
    if (x == 0.0) {
        return 1.0;
    }
    return sin_pi(x) / (pi * x);
}

// Uniform double in [0, 1) from the top 53 bits of a 64-bit engine draw.
template <class Engine>
double uniform01(Engine& engine) {
    return static_cast<double>(engine() >> 11) * 0x1.0p-53;
}

// splitmix64 finalizer; used to derive per-trial seeds from (master seed, index).
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Round-trip decimal for a double; keeps CSV/JSON output byte-stable.
inline std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace rgame

// SPDX-License-Identifier: Apache-2.0
// Grid comparisons between an interpreted wave and a reference function.
#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include "rgame/tapestry/wave.hpp"

namespace rgame::metrics {

inline std::vector<double> uniform_grid(double a, double b, int n) {
    std::vector<double> xs;
    for (int i = 0; i <= n; ++i) xs.push_back(a + (b - a) * i / n);
    return xs;
}

// ||f - g|| / ||g|| on a uniform 1-D grid.
inline double rel_l2_amplitude(const rgame::tapestry::InterpolatedWave& w, const std::function<std::complex<double>(double)>& g,
                               double a, double b, int n) {
    const auto xs = uniform_grid(a, b, n);
    const auto vals = w.evaluate_grid(xs);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const auto ref = g(xs[i]);
        num += std::norm(vals[i] - ref);
        den += std::norm(ref);
    }
    return std::sqrt(num / den);
}

// Same for the densities |f|^2 and |g|^2.
inline double rel_l2_density(const rgame::tapestry::InterpolatedWave& w, const std::function<std::complex<double>(double)>& g,
                             double a, double b, int n) {
    const auto xs = uniform_grid(a, b, n);
    const auto vals = w.evaluate_grid(xs);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double ref = std::norm(g(xs[i]));
        const double d = std::norm(vals[i]) - ref;
        num += d * d;
        den += ref * ref;
    }
    return std::sqrt(num / den);
}

// sum |Theta|^2 dx^d over a slice.
template <class Tap>
double slice_norm(const Tap& tap) {
    double s = 0.0;
    for (const auto& inf : tap.informons()) s += std::norm(inf.theta);
    return s * std::pow(tap.config().dx, tap.config().dims) * tap.layout().stride;
}

}  // namespace rgame::metrics

// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "rgame/common.hpp"

namespace rgame {

// n-point Gauss-Legendre rule on [-1, 1] (Newton iteration on P_n).
struct GaussLegendre {
    std::vector<double> nodes;
    std::vector<double> weights;

    explicit GaussLegendre(int n) : nodes(static_cast<std::size_t>(n)), weights(static_cast<std::size_t>(n)) {
        for (int i = 0; i < (n + 1) / 2; ++i) {
            double z = std::cos(pi * (i + 0.75) / (n + 0.5));
            double dp = 0.0;
            for (int it = 0; it < 100; ++it) {
                double p0 = 1.0, p1 = 0.0;
                for (int k = 1; k <= n; ++k) {
                    const double p2 = p1;
                    p1 = p0;
                    p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / k;
                }
                dp = n * (z * p0 - p1) / (z * z - 1.0);
                const double dz = p0 / dp;
                z -= dz;
                if (std::abs(dz) < 1e-16) break;
            }
            nodes[static_cast<std::size_t>(i)] = -z;
            nodes[static_cast<std::size_t>(n - 1 - i)] = z;
            const double w = 2.0 / ((1.0 - z * z) * dp * dp);
            weights[static_cast<std::size_t>(i)] = w;
            weights[static_cast<std::size_t>(n - 1 - i)] = w;
        }
    }

    // Nodes and weights of the composite rule with `panels` equal panels on [a, b].
    std::pair<std::vector<double>, std::vector<double>> composite(double a, double b, int panels) const {
        std::pair<std::vector<double>, std::vector<double>> out;
        const double h = (b - a) / panels;
        for (int p = 0; p < panels; ++p) {
            const double mid = a + (p + 0.5) * h;
            for (std::size_t i = 0; i < nodes.size(); ++i) {
                out.first.push_back(mid + 0.5 * h * nodes[i]);
                out.second.push_back(0.5 * h * weights[i]);
            }
        }
        return out;
    }
};

}  // namespace rgame

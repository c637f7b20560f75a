// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "rgame/common.hpp"
#include "rgame/quadrature.hpp"
#include "rgame/tapestry/wave.hpp"

namespace rgame::nkprob {

using Rational = boost::multiprecision::cpp_rational;

// The four arrangements of a 2x2 block.
enum class Block { a = 0, b = 1, c = 2, d = 3 };
enum class Transform { alpha, beta, gamma };

using RationalDist = std::array<Rational, 4>;

inline char name(Block s) { return "abcd"[static_cast<int>(s)]; }
inline const char* name(Transform t) {
    switch (t) {
        case Transform::alpha: return "alpha";
        case Transform::beta: return "beta";
        case Transform::gamma: return "gamma";
    }
    return "?";
}

// alpha: a<->b, c<->d. beta: a<->c, b<->d. gamma: a<->d, b<->c.
inline Block apply_transform(Transform t, Block s) {
    const int i = static_cast<int>(s);
    switch (t) {
        case Transform::alpha: return static_cast<Block>(i ^ 1);
        case Transform::beta: return static_cast<Block>(i ^ 2);
        case Transform::gamma: return static_cast<Block>(i ^ 3);
    }
    return s;
}

inline RationalDist point_mass(Block s) {
    RationalDist d{};
    d[static_cast<std::size_t>(s)] = 1;
    return d;
}

// Path-count distribution after `depth` plays. Every path is equally weighted
// unless `weights` assigns a probability to each generator choice.
inline RationalDist level_distribution(const std::vector<Transform>& generators, Block start, int depth,
                                       const std::optional<std::vector<Rational>>& weights = std::nullopt) {
    if (depth < 0) throw domain_error("level_distribution: depth must be non-negative");
    if (generators.empty()) throw domain_error("level_distribution: at least one generator required");
    std::vector<Rational> w(generators.size(), Rational(1, static_cast<long>(generators.size())));
    if (weights) {
        if (weights->size() != generators.size()) throw domain_error("level_distribution: one weight per generator");
        w = *weights;
    }
    RationalDist cur = point_mass(start);
    for (int k = 0; k < depth; ++k) {
        RationalDist next{};
        for (int s = 0; s < 4; ++s) {
            if (cur[static_cast<std::size_t>(s)] == 0) continue;
            for (std::size_t g = 0; g < generators.size(); ++g) {
                next[static_cast<std::size_t>(apply_transform(generators[g], static_cast<Block>(s)))] +=
                    cur[static_cast<std::size_t>(s)] * w[g];
            }
        }
        cur = next;
    }
    return cur;
}

inline std::string to_string(const RationalDist& d) {
    std::string s = "(";
    for (std::size_t i = 0; i < 4; ++i) s += (i ? "," : "") + d[i].str();
    return s + ")";
}

struct MixtureResult {
    RationalDist mixture;
    bool equal = false;
};

// w1 d1 + w2 d2, compared exactly with `actual`.
inline MixtureResult mixture_compare(const Rational& w1, const RationalDist& d1, const Rational& w2, const RationalDist& d2,
                                     const RationalDist& actual) {
    if (w1 + w2 != 1) throw domain_error("mixture_compare: weights must sum to 1");
    MixtureResult r;
    for (std::size_t i = 0; i < 4; ++i) r.mixture[i] = w1 * d1[i] + w2 * d2[i];
    r.equal = r.mixture == actual;
    return r;
}

struct LegoResult {
    Rational p0, p1, p2, total, interaction;
};

// Four equally likely plate arrangements: empty, 1x1, 2x2, 1x1 on 2x2.
// Dial 0 lights on an empty plate; dial 1 (2) whenever the 1x1 (2x2) block is present.
inline LegoResult lego_demo() {
    struct Config {
        bool small, large;
    };
    const std::array<Config, 4> configs{{{false, false}, {true, false}, {false, true}, {true, true}}};
    LegoResult r;
    const Rational each(1, 4);
    for (const auto& c : configs) {
        if (!c.small && !c.large) r.p0 += each;
        if (c.small) r.p1 += each;
        if (c.large) r.p2 += each;
    }
    r.total = r.p0 + r.p1 + r.p2;
    r.interaction = 1 - r.total;
    return r;
}

struct BellResult {
    Rational E_ab, E_ad, E_db;
    Rational lhs, rhs;
    bool violated = false;
};

inline Rational measurement_value(Block s) {
    static const std::array<Rational, 4> v{Rational(1), Rational(1, 2), Rational(-1, 2), Rational(-1)};
    return v[static_cast<std::size_t>(s)];
}

// Expectation of the product of the final measurements after two plays: the
// first game applies alpha twice from x, the second gamma twice from y.
inline Rational two_play_expectation(Block x, Block y) {
    const Block fx = apply_transform(Transform::alpha, apply_transform(Transform::alpha, x));
    const Block fy = apply_transform(Transform::gamma, apply_transform(Transform::gamma, y));
    return measurement_value(fx) * measurement_value(fy);  // the single path has probability 1
}

// Checks 1 + E(d,b) >= |E(a,d) - E(a,b)|.
inline BellResult bell_toy() {
    BellResult r;
    r.E_ab = two_play_expectation(Block::a, Block::b);
    r.E_ad = two_play_expectation(Block::a, Block::d);
    r.E_db = two_play_expectation(Block::d, Block::b);
    r.lhs = 1 + r.E_db;
    r.rhs = boost::multiprecision::abs(r.E_ad - r.E_ab);
    r.violated = !(r.lhs >= r.rhs);
    return r;
}

struct TotalProbability {
    double kolmogorov = 0.0;
    double quantum = 0.0;
};

// Classical total probability and its Born-rule counterpart with interference angle theta.
inline TotalProbability quantum_total_probability(double pa1, double pb_a1, double pa2, double pb_a2, double theta) {
    for (double p : {pa1, pb_a1, pa2, pb_a2}) {
        if (!(p >= 0.0 && p <= 1.0)) throw domain_error("quantum_total_probability: inputs must lie in [0, 1]");
    }
    TotalProbability r;
    r.kolmogorov = pa1 * pb_a1 + pa2 * pb_a2;
    const double c = std::abs(std::remainder(theta, 2 * pi)) == pi / 2 ? 0.0 : std::cos(theta);
    r.quantum = r.kolmogorov + 2.0 * c * std::sqrt(pa1 * pb_a1 * pa2 * pb_a2);
    return r;
}

struct RegionWeights {
    std::vector<double> p;
    double total = 0.0;
};

// p_j = sum_i conj(w_i) w_j int_R conj(psi_i) psi_j over the interval R = [a, b].
inline RegionWeights region_weights(const std::vector<tapestry::InterpolatedWave>& psi, const std::vector<Complex>& w,
                                    double a, double b, int panels = 200) {
    if (psi.size() != w.size()) throw domain_error("region_weights: one weight per eigenfunction");
    double norm = 0.0;
    for (const auto& x : w) norm += std::norm(x);
    if (std::abs(norm - 1.0) > 1e-12) throw domain_error("region_weights: weights must satisfy sum |w|^2 = 1");
    static const GaussLegendre gl(10);
    const auto [xs, ws] = gl.composite(a, b, panels);
    std::vector<std::vector<Complex>> vals;
    for (const auto& f : psi) vals.push_back(f.evaluate_grid(xs));
    RegionWeights r;
    for (std::size_t j = 0; j < psi.size(); ++j) {
        Complex pj{};
        for (std::size_t i = 0; i < psi.size(); ++i) {
            Complex overlap{};
            for (std::size_t q = 0; q < xs.size(); ++q) overlap += ws[q] * std::conj(vals[i][q]) * vals[j][q];
            pj += std::conj(w[i]) * w[j] * overlap;
        }
        r.p.push_back(pj.real());
        r.total += pj.real();
    }
    return r;
}

}  // namespace rgame::nkprob

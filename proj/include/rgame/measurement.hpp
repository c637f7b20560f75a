// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "rgame/common.hpp"
#include "rgame/propagation.hpp"
#include "rgame/quadrature.hpp"
#include "rgame/tapestry.hpp"

namespace rgame::measurement {

using propagation::Position;
using tapestry::InterpolatedWave;

struct Box {
    Position lo{};
    Position hi{};

    bool contains(const Position& p, int dims) const {
        for (int k = 0; k < dims; ++k) {
            if (p[k] < lo[k] || p[k] > hi[k]) return false;
        }
        return true;
    }
    double volume(int dims) const {
        double v = 1.0;
        for (int k = 0; k < dims; ++k) v *= hi[k] - lo[k];
        return v;
    }
};

struct Cell {
    int basin = 0;  // readout value y
    Box box;
};

// Detector surface: a region partitioned into basins, with a local real coupling
// weight v(z) (identity when unset).
struct Detector {
    int dims = 1;
    Box region;
    std::vector<Cell> cells;
    std::function<double(const Position&)> weight;
    bool allow_overlap = false;

    // `n` equal cells along `axis`, spanning the full region along the other axis.
    static Detector slab(int dims, Box region, int n, int axis) {
        Detector d;
        d.dims = dims;
        d.region = region;
        const double w = (region.hi[axis] - region.lo[axis]) / n;
        for (int i = 0; i < n; ++i) {
            Cell c{i, region};
            c.box.lo[axis] = region.lo[axis] + i * w;
            c.box.hi[axis] = i + 1 == n ? region.hi[axis] : region.lo[axis] + (i + 1) * w;
            d.cells.push_back(c);
        }
        return d;
    }

    double v(const Position& z) const { return weight ? weight(z) : 1.0; }
};

// Cells lie inside the region, are disjoint (unless allowed) and cover it.
inline std::vector<std::string> check_detector(const Detector& d) {
    std::vector<std::string> out;
    if (d.cells.empty()) out.push_back("detector has no cells");
    double covered = 0.0;
    for (std::size_t i = 0; i < d.cells.size(); ++i) {
        const auto& b = d.cells[i].box;
        for (int k = 0; k < d.dims; ++k) {
            if (b.lo[k] < d.region.lo[k] - 1e-12 || b.hi[k] > d.region.hi[k] + 1e-12 || !(b.lo[k] < b.hi[k])) {
                out.push_back("cell " + std::to_string(i) + " not a proper sub-box of the region");
            }
        }
        covered += b.volume(d.dims);
        if (d.allow_overlap) continue;
        for (std::size_t j = i + 1; j < d.cells.size(); ++j) {
            const auto& c = d.cells[j].box;
            double overlap = 1.0;
            for (int k = 0; k < d.dims; ++k) overlap *= std::max(0.0, std::min(b.hi[k], c.hi[k]) - std::max(b.lo[k], c.lo[k]));
            if (overlap > 1e-12) out.push_back("cells " + std::to_string(i) + " and " + std::to_string(j) + " overlap");
        }
    }
    if (!d.allow_overlap && std::abs(covered - d.region.volume(d.dims)) > 1e-9 * d.region.volume(d.dims)) {
        out.push_back("cells do not cover the region");
    }
    return out;
}

namespace detail {

// Integral of f over a box by a tensor Gauss-Legendre rule evaluated on the wave grid.
inline double box_integral(const InterpolatedWave& wave, const Detector& det, const Box& box,
                           const std::array<int, 2>& panels, bool weighted) {
    static const GaussLegendre gl(8);
    auto [xs, wx] = gl.composite(box.lo[0], box.hi[0], panels[0]);
    std::vector<double> ys{0.0}, wy{1.0};
    if (det.dims == 2) std::tie(ys, wy) = gl.composite(box.lo[1], box.hi[1], panels[1]);
    const auto vals = wave.evaluate_grid(xs, ys);
    double sum = 0.0;
    for (std::size_t p = 0; p < xs.size(); ++p) {
        for (std::size_t q = 0; q < ys.size(); ++q) {
            const double a2 = std::norm(vals[p * ys.size() + q]);
            const double v = weighted ? det.v({xs[p], ys[q]}) : 1.0;
            sum += wx[p] * wy[q] * v * a2;
        }
    }
    return sum;
}

}  // namespace detail

struct QuadratureOptions {
    int panels_per_axis = 8;
};

// Coupling probability of every cell: the integral of phi* v phi over the cell,
// scaled so the cells sum to the wave's mass inside the region.
inline std::vector<double> coupling_probabilities(const InterpolatedWave& wave, const Detector& det,
                                                  const QuadratureOptions& q = {}) {
    std::vector<double> raw;
    double total = 0.0;
    for (const auto& c : det.cells) {
        raw.push_back(detail::box_integral(wave, det, c.box, {q.panels_per_axis, q.panels_per_axis}, true));
        total += raw.back();
    }
    if (total <= 0.0) return std::vector<double>(raw.size(), 0.0);
    // Region mass with panels matched to the finest cell resolution.
    std::array<int, 2> panels{q.panels_per_axis, q.panels_per_axis};
    for (int k = 0; k < det.dims; ++k) {
        const double ratio = (det.region.hi[k] - det.region.lo[k]) / (det.cells[0].box.hi[k] - det.cells[0].box.lo[k]);
        panels[static_cast<std::size_t>(k)] = static_cast<int>(std::ceil(q.panels_per_axis * std::max(1.0, ratio)));
    }
    const double mass = std::min(1.0, detail::box_integral(wave, det, det.region, panels, false));
    for (double& r : raw) r *= mass / total;
    return raw;
}

// Probability that `inf` couples the particle to `cell`.
inline double coupling_probability(const tapestry::Informon& inf, std::size_t cell, const InterpolatedWave& wave,
                                   const Detector& det, const tapestry::LatticeConfig& cfg, const QuadratureOptions& q = {}) {
    const Position z = propagation::position_of(inf.point, cfg);
    if (!det.region.contains(z, det.dims)) throw domain_error("coupling_probability: informon outside the detector region");
    if (cell >= det.cells.size()) throw domain_error("coupling_probability: no such cell");
    return coupling_probabilities(wave, det, q)[cell];
}

// Probabilities over outcomes through an error-coupling matrix m[j][j'] (rows sum to 1).
inline std::vector<double> apply_error_matrix(const std::vector<double>& p, const std::vector<std::vector<double>>& m) {
    std::vector<double> out(p.size(), 0.0);
    for (std::size_t j = 0; j < p.size(); ++j) {
        for (std::size_t k = 0; k < p.size(); ++k) out[k] += p[j] * m.at(j).at(k);
    }
    return out;
}

// One coupling play: picks cell i with probability p_i, or none with the residual.
template <class Engine>
std::optional<std::size_t> attempt_coupling(const std::vector<double>& p, Engine& rng) {
    double total = 0.0;
    for (double v : p) {
        if (v < 0.0) throw domain_error("attempt_coupling: negative probability");
        total += v;
    }
    if (total > 1.0 + 1e-12) throw domain_error("attempt_coupling: probabilities sum above 1");
    const double u = uniform01(rng);
    double acc = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        acc += p[i];
        if (u < acc) return i;
    }
    return std::nullopt;
}

struct CouplingResult {
    std::optional<std::size_t> cell;
    int rounds = 0;
};

// Successive plays until coupling or `max_rounds`; no-coupling after k rounds has
// probability (1 - x)^k.
template <class Engine>
CouplingResult couple_with_retries(const std::vector<double>& p, Engine& rng, int max_rounds) {
    CouplingResult r;
    while (r.rounds < max_rounds) {
        ++r.rounds;
        if (auto c = attempt_coupling(p, rng)) {
            r.cell = c;
            return r;
        }
    }
    return r;
}

enum class Phase { free_product, informational_coupling, interactive };

struct ProcessState {
    Phase phase = Phase::free_product;
    std::optional<int> basin;          // set once interactive
    std::string basis_tag = "native";  // decomposition generating the particle process
};

// Stage two: the particle process is re-expressed in the detector basis.
inline ProcessState begin_informational(const ProcessState& s, std::string basis_tag) {
    if (s.phase != Phase::free_product) throw contract_violation("begin_informational: process already coupled");
    return {Phase::informational_coupling, std::nullopt, std::move(basis_tag)};
}

// Stage three: coupling to basin y turns the sum into an interactive product with it.
inline ProcessState transition(const ProcessState& s, int y) {
    if (s.phase == Phase::interactive) {
        if (s.basin == y) return s;
        throw contract_violation("transition: already interactive with another basin");
    }
    if (s.phase != Phase::informational_coupling) {
        throw contract_violation("transition: requires the informational coupling stage first");
    }
    return {Phase::interactive, y, s.basis_tag};
}

// Process after coupling to the subprocess tagged `tag`: that component alone
// carries on with weight 1; informons of every other tag become inert.
inline propagation::ProcessSpec collapse(const propagation::ProcessSpec& proc, tapestry::Tag tag) {
    propagation::ProcessSpec out = proc;
    bool found = false;
    for (auto& s : out.subprocesses) {
        const bool hit = s.tag == tag;
        found = found || hit;
        s.weight = hit ? Complex(1.0, 0.0) : Complex(0.0, 0.0);
    }
    if (!found) throw domain_error("collapse: no subprocess with that tag");
    out.restrict_to = tag;
    return out;
}

// Per-tag coupling weights of an exclusive-sum slice measured in its own
// eigenbasis: the partial norm of each tag's interpolated wave.
inline std::vector<double> eigenbasis_probabilities(const tapestry::CausalTapestry& tap, const std::vector<tapestry::Tag>& tags) {
    std::vector<double> p;
    for (auto tag : tags) p.push_back(tapestry::interpret_state(tap, tag).norm2());
    double total = 0.0;
    for (double v : p) total += v;
    if (total > 1.0) {
        for (double& v : p) v /= total;
    }
    return p;
}

struct Basis {
    std::vector<std::function<Complex(double, double)>> functions;
    std::vector<tapestry::Tag> tags;
    std::string name = "detector";
};

struct BasisDomain {
    double a = -20.0;
    double b = 20.0;
    int panels = 400;
};

// Re-expresses sum_i w_i psi_i in `basis` (orthonormal on the domain): w'_j = <e_j, Psi>.
// Throws when the basis leaves a residual above `tolerance` (relative L2).
inline propagation::ProcessSpec basis_change(const propagation::ProcessSpec& proc, const Basis& basis,
                                             const BasisDomain& dom = {}, double tolerance = 1e-6) {
    if (basis.functions.size() != basis.tags.size()) throw domain_error("basis_change: one tag per basis function");
    static const GaussLegendre gl(10);
    const auto [xs, ws] = gl.composite(dom.a, dom.b, dom.panels);
    std::vector<Complex> psi(xs.size(), Complex{});
    for (const auto& s : proc.subprocesses) {
        for (std::size_t i = 0; i < xs.size(); ++i) psi[i] += s.weight * s.psi(xs[i], 0.0);
    }
    std::vector<std::vector<Complex>> e(basis.functions.size());
    for (std::size_t j = 0; j < e.size(); ++j) {
        for (double x : xs) e[j].push_back(basis.functions[j](x, 0.0));
    }
    auto inner = [&](const std::vector<Complex>& f, const std::vector<Complex>& g) {
        Complex s{};
        for (std::size_t i = 0; i < xs.size(); ++i) s += ws[i] * std::conj(f[i]) * g[i];
        return s;
    };
    propagation::ProcessSpec out;
    out.combination = propagation::Combination::exclusive_sum;
    std::vector<Complex> residual = psi;
    for (std::size_t j = 0; j < e.size(); ++j) {
        const Complex w = inner(e[j], psi);
        out.subprocesses.push_back({w, basis.functions[j], basis.tags[j]});
        for (std::size_t i = 0; i < xs.size(); ++i) residual[i] -= w * e[j][i];
    }
    const double norm = inner(psi, psi).real();
    const double res = inner(residual, residual).real();
    if (norm > 0.0 && std::sqrt(res / norm) > tolerance) {
        throw domain_error("basis_change: basis does not span the wave (relative residual " + format_double(std::sqrt(res / norm)) + ")");
    }
    return out;
}

}  // namespace rgame::measurement

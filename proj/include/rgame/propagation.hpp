// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "rgame/common.hpp"
#include "rgame/tapestry.hpp"

namespace rgame::propagation {

using tapestry::CausalTapestry;
using tapestry::Content;
using tapestry::Informon;
using tapestry::InformonId;
using tapestry::LatticeConfig;
using tapestry::LatticePoint;
using tapestry::SiteIndex;
using tapestry::Tag;

using Position = std::array<double, tapestry::kMaxDims>;

struct LagrangianSpec {
    double mass = 1.0;
    std::function<double(const Position&)> potential;  // empty: free particle

    double V(const Position& x) const { return potential ? potential(x) : 0.0; }

    static LagrangianSpec free(double mass = 1.0) { return {mass, {}}; }
    static LagrangianSpec constant(double c, double mass = 1.0) {
        return {mass, [c](const Position&) { return c; }};
    }
};

inline Position position_of(const LatticePoint& p, const LatticeConfig& cfg) {
    const auto c = tapestry::embed(p, cfg);
    return c.x;
}

// S = m |dx|^2 / (2 dt) - dt (V(from) + V(to)) / 2 along the straight segment.
inline double straight_line_action(const LagrangianSpec& L, const LatticePoint& from, const LatticePoint& to,
                                   const LatticeConfig& cfg) {
    if (to.t != from.t + 1) throw domain_error("straight_line_action: points must lie on adjacent slices");
    const Position a = position_of(from, cfg);
    const Position b = position_of(to, cfg);
    double d2 = 0.0;
    for (int k = 0; k < cfg.dims; ++k) d2 += (b[k] - a[k]) * (b[k] - a[k]);
    return L.mass * d2 / (2.0 * cfg.dt) - cfg.dt * (L.V(a) + L.V(b)) / 2.0;
}

// A = (2 pi i hbar dt / m)^(1/2), principal branch.
inline Complex feynman_hibbs_A(double hbar, double dt, double mass) {
    return std::sqrt(Complex(0.0, 2.0 * pi * hbar * dt / mass));
}
inline Complex feynman_hibbs_A(const LatticeConfig& cfg) { return feynman_hibbs_A(cfg.hbar, cfg.dt, cfg.mass); }

// (dx^d / A^d) e^{iS/hbar} theta: one cell of the discretized kernel integral.
inline Complex step_amplitude(const LagrangianSpec& L, const LatticePoint& from, const LatticePoint& to, Complex theta,
                              const LatticeConfig& cfg) {
    const double S = straight_line_action(L, from, to, cfg);
    const Complex A = feynman_hibbs_A(cfg.hbar, cfg.dt, L.mass);
    const Complex pref = std::pow(cfg.dx / A, cfg.dims);
    return pref * std::exp(Complex(0.0, S / cfg.hbar)) * theta;
}

// de Broglie-type kernel length lambda = sqrt(2 pi hbar dt / m).
inline double kernel_length(const LatticeConfig& cfg, double mass) {
    return std::sqrt(2.0 * pi * cfg.hbar * cfg.dt / mass);
}

// Radius at which the sampled chirp exp(i m u^2 / 2 hbar dt) aliases back to zero
// frequency on a grid of spacing h.
inline double alias_radius(const LatticeConfig& cfg, double mass, double h) {
    return pi * cfg.hbar * cfg.dt / (mass * h);
}

// Per-axis weight applied to kernel contributions by displacement.
struct KernelWindow {
    enum class Kind { taper, hard, none };
    Kind kind = Kind::taper;
    // taper: W(u) = erfc((|u|/R - center) / (sqrt2 width)) / 2, cut at `cut` R.
    double center = 0.80;
    double width = 0.12;
    double cut = 1.52;
    // hard: W = 1 for |u| <= radius_lambdas * lambda, else 0.
    double radius_lambdas = 8.0;

    static KernelWindow taper() { return {}; }
    static KernelWindow hard(double radius_lambdas = 8.0) {
        KernelWindow w;
        w.kind = Kind::hard;
        w.radius_lambdas = radius_lambdas;
        return w;
    }
    static KernelWindow none() {
        KernelWindow w;
        w.kind = Kind::none;
        return w;
    }

    // Largest |u| with a nonzero weight (infinite for none).
    double support(const LatticeConfig& cfg, double mass, double h) const {
        switch (kind) {
            case Kind::taper: return cut * alias_radius(cfg, mass, h);
            case Kind::hard: return radius_lambdas * kernel_length(cfg, mass);
            case Kind::none: break;
        }
        return std::numeric_limits<double>::infinity();
    }

    double weight(double u, const LatticeConfig& cfg, double mass, double h) const {
        const double a = std::abs(u);
        if (a > support(cfg, mass, h)) return 0.0;
        if (kind != Kind::taper) return 1.0;
        const double r = a / alias_radius(cfg, mass, h);
        return 0.5 * std::erfc((r - center) / (std::sqrt(2.0) * width));
    }
};

struct Subprocess {
    Complex weight{1.0, 0.0};
    std::function<Complex(double, double)> psi;  // initial state sampler psi(x, y)
    Tag tag = 0;
};

enum class Combination { single, exclusive_sum };

struct ProcessSpec {
    std::vector<Subprocess> subprocesses;
    Combination combination = Combination::single;
    // Set after a measurement transition: informons of every other tag are inert.
    std::optional<Tag> restrict_to;

    static ProcessSpec single(std::function<Complex(double, double)> psi, std::optional<Tag> tag = std::nullopt) {
        ProcessSpec p;
        p.subprocesses.push_back({1.0, std::move(psi), tag.value_or(0)});
        p.single_untagged = !tag.has_value();
        return p;
    }
    static ProcessSpec exclusive_sum(std::vector<Subprocess> subs) {
        ProcessSpec p;
        p.subprocesses = std::move(subs);
        p.combination = Combination::exclusive_sum;
        return p;
    }

    bool single_untagged = false;

    tapestry::SiteLayout layout() const {
        if (combination == Combination::single) {
            return single_untagged ? tapestry::SiteLayout::single() : tapestry::SiteLayout::single(subprocesses.at(0).tag);
        }
        std::vector<Tag> tags;
        for (const auto& s : subprocesses) tags.push_back(s.tag);
        return tapestry::SiteLayout::interleaved(tags);
    }
};

// Checks the weights and tags of a process; throws domain_error on failure.
inline void check_process(const ProcessSpec& proc) {
    if (proc.subprocesses.empty()) throw domain_error("process: at least one subprocess required");
    if (proc.combination == Combination::single && proc.subprocesses.size() != 1) {
        throw domain_error("process: single combination takes exactly one subprocess");
    }
    if (proc.combination == Combination::exclusive_sum) {
        double total = 0.0;
        for (const auto& s : proc.subprocesses) total += std::norm(s.weight);
        if (std::abs(total - 1.0) > 1e-12) throw domain_error("process: exclusive-sum weights must satisfy sum |w|^2 = 1");
        for (std::size_t i = 0; i < proc.subprocesses.size(); ++i) {
            for (std::size_t j = i + 1; j < proc.subprocesses.size(); ++j) {
                if (proc.subprocesses[i].tag == proc.subprocesses[j].tag) throw domain_error("process: duplicate subprocess tag");
            }
        }
    }
}

// Discretization sanity: every sublattice spacing must resolve the kernel (h <= lambda/4),
// and when a band limit is declared, each sublattice must satisfy Nyquist.
inline std::vector<tapestry::ConstraintViolation> check_discretization(const LatticeConfig& cfg, double mass, int stride = 1) {
    auto out = tapestry::check_config(cfg);
    if (!out.empty() || !(mass > 0.0)) {
        if (!(mass > 0.0)) out.push_back({"mass", "mass > 0"});
        return out;
    }
    const double lambda = kernel_length(cfg, mass);
    if (stride * cfg.dx > lambda / 4.0) {
        out.push_back({"dx", "discretization: sublattice spacing <= lambda/4 with lambda = sqrt(2 pi hbar dt / m)"});
    }
    if (cfg.band_limit && stride > 1 && stride * cfg.dx > pi / *cfg.band_limit) {
        out.push_back({"dx", "Nyquist on sublattice: stride * dx <= pi / band_limit"});
    }
    return out;
}

struct AmplitudeToken {
    LatticePoint site;
    Complex value;
    InformonId source_id;
};

struct ContentToken {
    LatticePoint site;
    std::vector<InformonId> upset;  // up-set of the source's content carried along; empty here
    InformonId source_id;
};

struct Strategy {
    enum class Kind { exhaustive, stochastic };
    Kind kind = Kind::exhaustive;
    std::uint64_t n_plays = 0;
    std::uint64_t seed = 0;

    static Strategy exhaustive() { return {}; }
    static Strategy stochastic(std::uint64_t n_plays, std::uint64_t seed) { return {Kind::stochastic, n_plays, seed}; }
};

struct Dynamics {
    LagrangianSpec lagrangian;
    KernelWindow window;
    // Number of most recent slices kept in the prior union (unset: keep all).
    std::optional<std::size_t> retain_slices;
};

struct RoundDiagnostics {
    std::uint64_t plays = 0;           // tokens placed
    std::uint64_t rejected_plays = 0;  // tokens refused by the exclusive-sum tag rule
    std::uint64_t inert_sources = 0;   // informons skipped after a measurement transition
    std::uint64_t created = 0;
};

// Initial slice: Theta = w_i psi_i(x) at every site of subprocess i's sublattice.
inline CausalTapestry initial_tapestry(const LatticeConfig& cfg, const ProcessSpec& proc, std::int64_t t = 0,
                                       InformonId first_id = 0) {
    check_process(proc);
    const auto layout = proc.layout();
    std::vector<Informon> infs;
    infs.reserve(cfg.sites_per_slice());
    InformonId next = first_id;
    for (std::size_t off = 0; off < cfg.sites_per_slice(); ++off) {
        const SiteIndex x = tapestry::site_from_offset(static_cast<std::int64_t>(off), cfg);
        const int phase = layout.phase(x);
        const auto& sub = proc.subprocesses[static_cast<std::size_t>(phase)];
        Informon inf;
        inf.id = next++;
        inf.point = {t, x, cfg.dims};
        inf.theta = sub.weight * sub.psi(x[0] * cfg.dx, cfg.dims == 2 ? x[1] * cfg.dx : 0.0);
        inf.tag = layout.tags[static_cast<std::size_t>(phase)];
        infs.push_back(std::move(inf));
    }
    return CausalTapestry(cfg, t, std::move(infs), {}, layout);
}

namespace detail {

struct KernelTables {
    std::array<int, tapestry::kMaxDims> step{1, 1};   // site step between sources along each axis
    std::array<int, tapestry::kMaxDims> reach{0, 0};  // max |displacement| in sites
    std::array<std::vector<Complex>, tapestry::kMaxDims> k;  // indexed by (disp + reach) / step
    Complex prefactor{1.0, 0.0};
};

inline KernelTables kernel_tables(const LatticeConfig& cfg, const Dynamics& dyn, int stride) {
    KernelTables t;
    const double m = dyn.lagrangian.mass;
    const Complex A = feynman_hibbs_A(cfg.hbar, cfg.dt, m);
    double cell = 1.0;
    for (int k = 0; k < cfg.dims; ++k) {
        const int step = k == 0 ? stride : 1;
        const double h = step * cfg.dx;
        cell *= h;
        const double support = dyn.window.support(cfg, m, h);
        int reach = 2 * cfg.extent;
        if (std::isfinite(support)) reach = std::min(reach, static_cast<int>(std::floor(support / cfg.dx + 1e-9)));
        reach -= reach % step;
        t.step[k] = step;
        t.reach[k] = reach;
        for (int d = -reach; d <= reach; d += step) {
            const double u = d * cfg.dx;
            const double w = dyn.window.weight(u, cfg, m, h);
            t.k[k].push_back(w * std::exp(Complex(0.0, m * u * u / (2.0 * cfg.hbar * cfg.dt))));
        }
    }
    t.prefactor = cell / std::pow(A, cfg.dims);
    return t;
}

inline Complex potential_phase(const Dynamics& dyn, const LatticeConfig& cfg, const SiteIndex& x) {
    if (!dyn.lagrangian.potential) return {1.0, 0.0};
    Position p{};
    for (int k = 0; k < cfg.dims; ++k) p[k] = x[k] * cfg.dx;
    return std::exp(Complex(0.0, -cfg.dt * dyn.lagrangian.V(p) / (2.0 * cfg.hbar)));
}

}  // namespace detail

// Plays one round of the reality game on `current`, producing the next slice.
// Each source informon x places a token (cell/A^d) W e^{iS/hbar} Theta_x on every
// same-sublattice site y in its kernel window; tokens at y are exchanged for one
// informon whose Theta is their sum and whose content is the set of sources.
inline CausalTapestry play_round(const CausalTapestry& current, const ProcessSpec& proc, const Strategy& strategy,
                                 const Dynamics& dyn, RoundDiagnostics* diag = nullptr) {
    const LatticeConfig& cfg = current.config();
    const auto& layout = current.layout();
    const int stride = layout.stride;
    const std::int64_t t_next = current.slice_t() + 1;
    const std::size_t n_sites = cfg.sites_per_slice();
    const int side = cfg.sites_per_axis();
    RoundDiagnostics d;

    // Dense source field a(x) = P(x) Theta(x) over eligible sources.
    std::vector<Complex> field(n_sites, Complex{});
    std::vector<const Informon*> source(n_sites, nullptr);
    std::vector<char> mismatched(n_sites, 0);
    bool any_mismatch = false;
    for (const Informon& inf : current.informons()) {
        const auto off = tapestry::site_offset(inf.point.x, cfg);
        if (off < 0) continue;
        if (proc.restrict_to && inf.tag != proc.restrict_to) {
            ++d.inert_sources;
            continue;
        }
        if (inf.tag != layout.tag_at(inf.point.x)) {
            mismatched[static_cast<std::size_t>(off)] = 1;
            any_mismatch = true;
            continue;
        }
        if (source[static_cast<std::size_t>(off)] != nullptr) continue;
        source[static_cast<std::size_t>(off)] = &inf;
        field[static_cast<std::size_t>(off)] = detail::potential_phase(dyn, cfg, inf.point.x) * inf.theta;
    }

    const auto tables = detail::kernel_tables(cfg, dyn, stride);
    auto in_axis = [&](int v) { return v >= -cfg.extent && v <= cfg.extent; };
    auto offset_of = [&](int x0, int x1) {
        return cfg.dims == 1 ? static_cast<std::size_t>(x0 + cfg.extent)
                             : static_cast<std::size_t>(x0 + cfg.extent) * side + static_cast<std::size_t>(x1 + cfg.extent);
    };
    const int ny = cfg.dims == 2 ? side : 1;
    const int lo1 = cfg.dims == 2 ? -cfg.extent : 0;

    // Plays refused by the tag rule: one per target site in the source's window.
    for (std::size_t off = 0; off < n_sites; ++off) {
        if (!mismatched[off]) continue;
        const SiteIndex x = tapestry::site_from_offset(static_cast<std::int64_t>(off), cfg);
        std::uint64_t n0 = 0, n1 = 1;
        for (int j = -tables.reach[0]; j <= tables.reach[0]; j += tables.step[0]) n0 += in_axis(x[0] + j);
        if (cfg.dims == 2) {
            n1 = 0;
            for (int j = -tables.reach[1]; j <= tables.reach[1]; ++j) n1 += in_axis(x[1] + j);
        }
        d.rejected_plays += n0 * n1;
    }

    std::vector<Complex> theta(n_sites, Complex{});
    std::vector<char> landed(n_sites, 0);
    std::vector<std::vector<InformonId>> explicit_content;
    const bool stochastic = strategy.kind == Strategy::Kind::stochastic;

    if (!stochastic) {
        // Separable gather: contract along axis 1, then along axis 0.
        std::vector<Complex> tmp = field;
        std::vector<int> count(n_sites, 0);
        std::vector<int> tmp_count(n_sites, 0);
        for (std::size_t off = 0; off < n_sites; ++off) tmp_count[off] = source[off] != nullptr;
        if (cfg.dims == 2) {
            const int r = tables.reach[1];
            for (int x0 = -cfg.extent; x0 <= cfg.extent; ++x0) {
                for (int y1 = -cfg.extent; y1 <= cfg.extent; ++y1) {
                    Complex acc{};
                    int c = 0;
                    for (int j = -r; j <= r; ++j) {
                        const int x1 = y1 - j;
                        if (!in_axis(x1)) continue;
                        const auto o = offset_of(x0, x1);
                        if (source[o] == nullptr) continue;
                        acc += tables.k[1][static_cast<std::size_t>(j + r)] * field[o];
                        ++c;
                    }
                    tmp[offset_of(x0, y1)] = acc;
                    tmp_count[offset_of(x0, y1)] = c;
                }
            }
        }
        const int r0 = tables.reach[0];
        const int s0 = tables.step[0];
        for (int y0 = -cfg.extent; y0 <= cfg.extent; ++y0) {
            for (int y1 = lo1; y1 < lo1 + ny; ++y1) {
                Complex acc{};
                int c = 0;
                for (int j = -r0; j <= r0; j += s0) {
                    const int x0 = y0 - j;
                    if (!in_axis(x0)) continue;
                    const auto o = offset_of(x0, y1);
                    if (tmp_count[o] == 0) continue;
                    acc += tables.k[0][static_cast<std::size_t>((j + r0) / s0)] * tmp[o];
                    c += tmp_count[o];
                }
                const auto o = offset_of(y0, y1);
                theta[o] = acc;
                count[o] = c;
                landed[o] = c > 0;
            }
        }
        for (std::size_t off = 0; off < n_sites; ++off) d.plays += static_cast<std::uint64_t>(count[off]);
    } else {
        // Enumerate (source, target) pairs in a fixed order and keep n of them
        // uniformly without replacement (selection sampling); rescale by 1/coverage.
        explicit_content.assign(n_sites, {});
        std::uint64_t total = 0;
        auto for_each_pair = [&](auto&& fn) {
            for (std::size_t so = 0; so < n_sites; ++so) {
                if (source[so] == nullptr) continue;
                const SiteIndex x = tapestry::site_from_offset(static_cast<std::int64_t>(so), cfg);
                for (int j0 = -tables.reach[0]; j0 <= tables.reach[0]; j0 += tables.step[0]) {
                    if (!in_axis(x[0] + j0)) continue;
                    const int r1 = cfg.dims == 2 ? tables.reach[1] : 0;
                    for (int j1 = -r1; j1 <= r1; ++j1) {
                        if (cfg.dims == 2 && !in_axis(x[1] + j1)) continue;
                        fn(so, x, j0, j1);
                    }
                }
            }
        };
        for_each_pair([&](std::size_t, const SiteIndex&, int, int) { ++total; });
        const std::uint64_t want = std::min<std::uint64_t>(strategy.n_plays, total);
        const double rescale = want > 0 ? static_cast<double>(total) / static_cast<double>(want) : 0.0;
        std::mt19937_64 rng(strategy.seed);
        std::uint64_t seen = 0, taken = 0;
        for_each_pair([&](std::size_t so, const SiteIndex& x, int j0, int j1) {
            const std::uint64_t remaining = total - seen++;
            if (taken >= want) return;
            if (static_cast<double>(remaining) * uniform01(rng) >= static_cast<double>(want - taken)) return;
            ++taken;
            const auto to = offset_of(x[0] + j0, cfg.dims == 2 ? x[1] + j1 : 0);
            Complex k = tables.k[0][static_cast<std::size_t>((j0 + tables.reach[0]) / tables.step[0])];
            if (cfg.dims == 2) k *= tables.k[1][static_cast<std::size_t>(j1 + tables.reach[1])];
            theta[to] += rescale * k * field[so];
            landed[to] = 1;
            explicit_content[to].push_back(source[so]->id);
        });
        d.plays = taken;
    }

    // Exchange tokens for informons, ids in row-major site order.
    std::vector<Informon> next;
    InformonId id = current.next_id();
    for (std::size_t off = 0; off < n_sites; ++off) {
        if (!landed[off]) continue;
        const SiteIndex y = tapestry::site_from_offset(static_cast<std::int64_t>(off), cfg);
        Informon inf;
        inf.id = id++;
        inf.point = {t_next, y, cfg.dims};
        inf.theta = tables.prefactor * detail::potential_phase(dyn, cfg, y) * theta[off];
        inf.tag = layout.tag_at(y);
        if (stochastic) {
            inf.content = Content::of(std::move(explicit_content[off]));
        } else if (cfg.dims == 1 || any_mismatch) {
            // Explicit ids of every source in the window (refused sources never played).
            std::vector<InformonId> ids;
            const int r1 = cfg.dims == 2 ? tables.reach[1] : 0;
            for (int j = -tables.reach[0]; j <= tables.reach[0]; j += tables.step[0]) {
                for (int j1 = -r1; j1 <= r1; ++j1) {
                    const int x0 = y[0] - j;
                    const int x1 = y[1] - j1;
                    if (!in_axis(x0) || (cfg.dims == 2 && !in_axis(x1))) continue;
                    if (const Informon* src = source[offset_of(x0, x1)]) ids.push_back(src->id);
                }
            }
            inf.content = Content::of(std::move(ids));
        } else {
            tapestry::Neighborhood n;
            n.slice_t = current.slice_t();
            n.center = y;
            n.radius = {tables.reach[0], tables.reach[1]};
            n.tag = inf.tag;
            inf.content = Content::of(n);
        }
        next.push_back(std::move(inf));
    }
    d.created = next.size();
    if (diag) *diag = d;

    auto priors = current.priors().with(current.slice_ptr());
    if (dyn.retain_slices) priors = priors.retain_last(*dyn.retain_slices);
    return CausalTapestry(cfg, t_next, std::move(next), std::move(priors), layout);
}

// Iterates play_round; element k is the slice at t = k. Stochastic rounds use
// per-round seeds derived from the strategy seed.
inline std::vector<CausalTapestry> propagate(const CausalTapestry& initial, int steps, const ProcessSpec& proc,
                                             const Strategy& strategy, const Dynamics& dyn,
                                             std::vector<RoundDiagnostics>* diags = nullptr) {
    if (steps < 0) throw domain_error("propagate: steps must be non-negative");
    std::vector<CausalTapestry> out{initial};
    out.reserve(static_cast<std::size_t>(steps) + 1);
    for (int k = 0; k < steps; ++k) {
        Strategy s = strategy;
        if (s.kind == Strategy::Kind::stochastic) s.seed = mix_seed(strategy.seed, static_cast<std::uint64_t>(k));
        RoundDiagnostics d;
        out.push_back(play_round(out.back(), proc, s, dyn, &d));
        if (diags) diags->push_back(d);
    }
    return out;
}

inline std::vector<CausalTapestry> propagate(const LatticeConfig& cfg, const ProcessSpec& proc, int steps,
                                             const Strategy& strategy, const Dynamics& dyn,
                                             std::vector<RoundDiagnostics>* diags = nullptr) {
    return propagate(initial_tapestry(cfg, proc), steps, proc, strategy, dyn, diags);
}

// Total number of (source, target) plays an exhaustive round would make.
inline std::uint64_t exhaustive_play_count(const CausalTapestry& current, const ProcessSpec& proc, const Dynamics& dyn) {
    RoundDiagnostics d;
    play_round(current, proc, Strategy::exhaustive(), dyn, &d);
    return d.plays;
}

}  // namespace rgame::propagation

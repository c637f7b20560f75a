// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "rgame/measurement.hpp"
#include "rgame/metrics.hpp"
#include "rgame/oracle.hpp"
#include "rgame/scenarios/config.hpp"

namespace rgame::scenarios {

using propagation::ProcessSpec;
using tapestry::CausalTapestry;

// (2 pi sigma^2)^(-1/4) exp(-(x-x0)^2/(4 sigma^2) + i k0 x).
inline Complex gaussian_packet(double x, double sigma, double x0, double k0) {
    const double u = x - x0;
    return std::pow(2.0 * pi * sigma * sigma, -0.25) * std::exp(Complex(-u * u / (4.0 * sigma * sigma), k0 * x));
}

// n-th normalized eigenfunction of V = m omega^2 x^2 / 2, by the three-term recurrence.
inline double oscillator_state(double x, int n, double omega, double mass = 1.0, double hbar = 1.0) {
    const double alpha = mass * omega / hbar;
    const double xi = std::sqrt(alpha) * x;
    double prev = std::pow(alpha / pi, 0.25) * std::exp(-xi * xi / 2.0);
    if (n == 0) return prev;
    double cur = std::sqrt(2.0) * xi * prev;
    for (int k = 1; k < n; ++k) {
        const double next = std::sqrt(2.0 / (k + 1)) * xi * cur - std::sqrt(static_cast<double>(k) / (k + 1)) * prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

inline std::function<Complex(double, double)> state_sampler(const StateSpec& s, const LatticeConfig& lat) {
    if (s.kind == StateSpec::Kind::ho) {
        return [s, lat](double x, double) { return Complex(oscillator_state(x, s.n, s.omega, lat.mass, lat.hbar)); };
    }
    return [s](double x, double) { return gaussian_packet(x, s.sigma, s.x0, s.k0); };
}

inline propagation::LagrangianSpec lagrangian(const ScenarioConfig& cfg) {
    const double m = cfg.lattice.mass;
    switch (cfg.potential.kind) {
        case PotentialSpec::Kind::constant: return propagation::LagrangianSpec::constant(cfg.potential.value, m);
        case PotentialSpec::Kind::harmonic: {
            const double k = m * cfg.potential.omega * cfg.potential.omega;
            return {m, [k](const propagation::Position& p) { return 0.5 * k * (p[0] * p[0] + p[1] * p[1]); }};
        }
        case PotentialSpec::Kind::free: break;
    }
    return propagation::LagrangianSpec::free(m);
}

inline propagation::Dynamics dynamics(const ScenarioConfig& cfg) { return {lagrangian(cfg), cfg.window, cfg.retain_slices}; }

// The process of a config. Zero-weight subprocesses are dropped; a lone survivor
// runs as a single untagged process.
inline ProcessSpec build_process(const ScenarioConfig& cfg) {
    std::vector<propagation::Subprocess> subs;
    for (const auto& s : cfg.subprocesses) {
        if (s.weight == Complex{}) continue;
        subs.push_back({s.weight, state_sampler(s.state, cfg.lattice), s.tag.value_or(0)});
    }
    if (subs.empty()) throw domain_error("build_process: every subprocess has zero weight");
    if (cfg.combination == propagation::Combination::single || subs.size() == 1) {
        const bool keep_tag = cfg.combination == propagation::Combination::single && cfg.subprocesses.front().tag;
        auto p = ProcessSpec::single(subs.front().psi, keep_tag ? std::optional<Tag>(subs.front().tag) : std::nullopt);
        p.subprocesses.front().weight = subs.front().weight;
        return p;
    }
    return ProcessSpec::exclusive_sum(std::move(subs));
}

// Number of slices among `taps` with at least one validator finding.
inline std::size_t count_invalid(const std::vector<CausalTapestry>& taps) {
    std::size_t bad = 0;
    for (const auto& t : taps) bad += !tapestry::validate(t).empty();
    return bad;
}

namespace detail {

inline std::filesystem::path out_path(const OutputSpec& o, const std::string& name) {
    std::filesystem::create_directories(o.dir);
    return std::filesystem::path(o.dir) / name;
}

inline void write_text(const OutputSpec& o, const std::string& name, const std::string& text) {
    if (o.dir.empty()) return;
    std::ofstream f(out_path(o, name), std::ios::binary);
    f << text;
}

inline std::string fmt(double v) { return format_double(v); }

// One row per informon: step, position(s), tag, amplitude.
inline void append_slice(std::string& csv, json& rows, const CausalTapestry& tap, bool as_json) {
    const auto& c = tap.config();
    for (const auto& inf : tap.informons()) {
        const double x = inf.point.x[0] * c.dx;
        const double y = inf.point.x[1] * c.dx;
        if (as_json) {
            json r{{"step", tap.slice_t()}, {"x", x}, {"re", inf.theta.real()}, {"im", inf.theta.imag()},
                   {"abs2", std::norm(inf.theta)}};
            if (c.dims == 2) r["y"] = y;
            r["tag"] = inf.tag ? json(*inf.tag) : json(nullptr);
            rows.push_back(std::move(r));
            continue;
        }
        csv += std::to_string(tap.slice_t()) + "," + fmt(x) + ",";
        if (c.dims == 2) csv += fmt(y) + ",";
        csv += (inf.tag ? std::to_string(*inf.tag) : std::string()) + "," + fmt(inf.theta.real()) + "," + fmt(inf.theta.imag()) +
               "," + fmt(std::norm(inf.theta)) + "\n";
    }
}

inline void write_slices(const OutputSpec& o, const std::string& stem, const std::vector<CausalTapestry>& taps) {
    if (o.dir.empty()) return;
    const bool as_json = o.format == "json";
    std::string csv = taps.empty() || taps.front().config().dims == 1 ? "step,x,tag,re,im,abs2\n" : "step,x,y,tag,re,im,abs2\n";
    json rows = json::array();
    for (const auto& t : taps) append_slice(csv, rows, t, as_json);
    if (as_json) {
        write_text(o, stem + ".json", rows.dump() + "\n");
    } else {
        write_text(o, stem + ".csv", csv);
    }
}

}  // namespace detail

struct StepError {
    std::int64_t step = 0;
    double density_error = 0.0;    // relative L2 of |psi|^2
    double amplitude_error = 0.0;  // relative L2 of psi
    double norm = 0.0;
};

struct TagReport {
    Tag tag = 0;
    double amplitude_error = 0.0;  // final-step partial wave vs w_i Psi_i
    double max_fraction_deviation = 0.0;
    double design_fraction = 0.0;
};

struct WaveReport {
    std::string scenario;
    std::vector<StepError> steps;
    std::vector<TagReport> tags;
    double norm_drift = 0.0;
    bool single_tagged = true;
    std::size_t invalid_tapestries = 0;

    const StepError& final_step() const { return steps.back(); }

    json to_json() const {
        json j{{"scenario", scenario}, {"norm_drift", norm_drift}, {"single_tagged", single_tagged},
               {"invalid_tapestries", invalid_tapestries}};
        j["steps"] = json::array();
        for (const auto& s : steps) {
            j["steps"].push_back({{"step", s.step}, {"density_error", s.density_error}, {"amplitude_error", s.amplitude_error},
                                  {"norm", s.norm}});
        }
        j["tags"] = json::array();
        for (const auto& t : tags) {
            j["tags"].push_back({{"tag", t.tag}, {"amplitude_error", t.amplitude_error},
                                 {"max_fraction_deviation", t.max_fraction_deviation}, {"design_fraction", t.design_fraction}});
        }
        return j;
    }
};

namespace detail {

inline void refuse_if_coarse(const ScenarioConfig& cfg, int stride) {
    const auto v = propagation::check_discretization(cfg.lattice, cfg.lattice.mass, stride);
    if (!v.empty()) throw domain_error("discretization rule violated: " + v.front().field + ": " + v.front().constraint);
}

// Engine run of a 1-D gaussian process with errors against the spreading-Gaussian oracle.
inline WaveReport run_wave(const ScenarioConfig& cfg, const std::string& name) {
    const auto proc = build_process(cfg);
    const int stride = proc.layout().stride;
    refuse_if_coarse(cfg, stride);
    const auto& lat = cfg.lattice;
    auto taps = propagation::propagate(lat, proc, cfg.steps, cfg.strategy, dynamics(cfg));

    // Surviving subprocesses with their weights, for the oracle.
    struct Term {
        Complex w;
        StateSpec s;
        std::optional<Tag> tag;
    };
    std::vector<Term> terms;
    for (const auto& s : cfg.subprocesses) {
        if (s.weight != Complex{}) terms.push_back({s.weight, s.state, s.tag});
    }
    const bool tagged = proc.combination == propagation::Combination::exclusive_sum;
    auto exact = [&](double x, double t, const std::optional<Tag>& only) {
        Complex sum{};
        for (const auto& term : terms) {
            if (only && term.tag != only) continue;
            sum += term.w * oracle::free_gaussian(x, t, term.s.sigma, term.s.x0, term.s.k0, lat.hbar, lat.mass);
        }
        return sum;
    };

    WaveReport rep;
    rep.scenario = name;
    const double L = lat.extent * lat.dx;
    const int n = 4 * lat.extent;
    for (const auto& tap : taps) {
        const double t = tap.slice_t() * lat.dt;
        const auto wave = tapestry::interpret_state(tap);
        auto ref = [&](double x) { return exact(x, t, std::nullopt); };
        rep.steps.push_back({tap.slice_t(), metrics::rel_l2_density(wave, ref, -L, L, n), metrics::rel_l2_amplitude(wave, ref, -L, L, n),
                             metrics::slice_norm(tap)});
        for (const auto& inf : tap.informons()) {
            if (tagged && !inf.tag) rep.single_tagged = false;
        }
    }
    rep.norm_drift = std::abs(rep.steps.back().norm - rep.steps.front().norm);

    if (tagged) {
        const auto& last = taps.back();
        const double t = last.slice_t() * lat.dt;
        for (const auto& term : terms) {
            TagReport tr;
            tr.tag = *term.tag;
            tr.design_fraction = 1.0 / static_cast<double>(terms.size());
            const auto partial = tapestry::interpret_state(last, term.tag);
            tr.amplitude_error = metrics::rel_l2_amplitude(partial, [&](double x) { return exact(x, t, term.tag); }, -L, L, n);
            for (const auto& tap : taps) {
                std::size_t hits = 0;
                for (const auto& inf : tap.informons()) hits += inf.tag == term.tag;
                const double frac = static_cast<double>(hits) / static_cast<double>(tap.informons().size());
                tr.max_fraction_deviation = std::max(tr.max_fraction_deviation, std::abs(frac - tr.design_fraction));
            }
            rep.tags.push_back(tr);
        }
    }
    rep.invalid_tapestries = count_invalid(taps);

    write_slices(cfg.output, "wave", taps);
    write_text(cfg.output, "report.json", rep.to_json().dump(2) + "\n");
    return rep;
}

}  // namespace detail

inline WaveReport run_free_particle(const ScenarioConfig& cfg) {
    if (cfg.potential.kind != PotentialSpec::Kind::free) throw domain_error("run_free_particle: free Lagrangian required");
    return detail::run_wave(cfg, "free_particle");
}

inline WaveReport run_superposition(const ScenarioConfig& cfg) {
    if (cfg.combination != propagation::Combination::exclusive_sum || cfg.subprocesses.size() < 2) {
        throw domain_error("run_superposition: exclusive_sum with at least two subprocesses required");
    }
    return detail::run_wave(cfg, "superposition");
}

struct TwoSlitReport {
    int steps_to_slit = 0;
    int steps_to_detector = 0;
    std::vector<double> edges;
    std::vector<std::int64_t> counts;
    std::vector<double> frequency;
    std::vector<double> engine_p;  // coupling probabilities of the open configuration
    std::vector<double> oracle_p;  // normalized Fresnel-oracle cell masses
    std::vector<double> upper_p;   // per-slit partial runs (empty when that slit is closed)
    std::vector<double> lower_p;
    std::int64_t coupled = 0;
    std::int64_t uncoupled = 0;
    double detector_mass = 0.0;
    double tv_histogram_oracle = 0.0;
    double tv_engine_oracle = 0.0;
    double fringe_contrast = 0.0;
    double superposition_residual = 0.0;
    double fringe_spacing_histogram = 0.0;
    double fringe_spacing_oracle = 0.0;
    double fringe_spacing_far_field = 0.0;
    std::size_t invalid_tapestries = 0;

    json to_json() const {
        return {{"scenario", "two_slit"},
                {"steps_to_slit", steps_to_slit},
                {"steps_to_detector", steps_to_detector},
                {"coupled", coupled},
                {"uncoupled", uncoupled},
                {"detector_mass", detector_mass},
                {"tv_histogram_oracle", tv_histogram_oracle},
                {"tv_engine_oracle", tv_engine_oracle},
                {"fringe_contrast", fringe_contrast},
                {"superposition_residual", superposition_residual},
                {"fringe_spacing_histogram", fringe_spacing_histogram},
                {"fringe_spacing_oracle", fringe_spacing_oracle},
                {"fringe_spacing_far_field", fringe_spacing_far_field},
                {"invalid_tapestries", invalid_tapestries},
                {"edges", edges},
                {"counts", counts},
                {"frequency", frequency},
                {"engine_p", engine_p},
                {"oracle_p", oracle_p},
                {"upper_p", upper_p},
                {"lower_p", lower_p}};
    }
};

// Mean distance between successive local maxima of a binned profile, after a
// 3-bin moving average. Maxima below 10% of the peak are ignored.
inline double peak_spacing(const std::vector<double>& p, const std::vector<double>& edges) {
    const std::size_t n = p.size();
    if (n < 3) return 0.0;
    std::vector<double> s(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double l = i > 0 ? p[i - 1] : p[i];
        const double r = i + 1 < n ? p[i + 1] : p[i];
        s[i] = (l + p[i] + r) / 3.0;
    }
    const double top = *std::max_element(s.begin(), s.end());
    std::vector<double> peaks;
    for (std::size_t i = 0; i < n; ++i) {
        bool is_max = s[i] >= 0.1 * top;
        for (std::size_t j = i >= 2 ? i - 2 : 0; j <= std::min(n - 1, i + 2) && is_max; ++j) {
            if (j != i && (s[j] > s[i] || (s[j] == s[i] && j < i))) is_max = false;
        }
        if (is_max) peaks.push_back(0.5 * (edges[i] + edges[i + 1]));
    }
    if (peaks.size() < 2) return 0.0;
    return (peaks.back() - peaks.front()) / static_cast<double>(peaks.size() - 1);
}

inline std::vector<double> normalized(std::vector<double> v) {
    double s = 0.0;
    for (double x : v) s += x;
    if (s > 0.0) {
        for (double& x : v) x /= s;
    }
    return v;
}

// Slice with every amplitude outside the open slits set to zero.
inline CausalTapestry slit_mask(const CausalTapestry& tap, const SlitGeometry& g, bool lower, bool upper) {
    const double dx = tap.config().dx;
    std::vector<tapestry::Informon> infs = tap.informons();
    const double eps = 1e-12;
    for (auto& inf : infs) {
        const double y = inf.point.x[1] * dx;
        const bool in_upper = y >= g.c - eps && y <= g.d + eps;
        const bool in_lower = y >= -g.d - eps && y <= -g.c + eps;
        if (!((upper && in_upper) || (lower && in_lower))) inf.theta = Complex{};
    }
    return CausalTapestry(tap.config(), tap.slice_t(), std::move(infs), tap.priors(), tap.layout());
}

inline TwoSlitReport run_two_slit(const ScenarioConfig& cfg) {
    const auto& lat = cfg.lattice;
    const auto& g = cfg.geometry;
    if (lat.dims != 2) throw domain_error("run_two_slit: 2-D lattice required");
    if (!(0.0 < g.a && g.a < g.b && 0.0 < g.c && g.c < g.d)) throw domain_error("run_two_slit: requires 0 < a < b and 0 < c < d");
    if (!cfg.seed) throw domain_error("run_two_slit: seed required");
    detail::refuse_if_coarse(cfg, 1);
    const double v = lat.hbar * g.k0 / lat.mass;
    const auto na = detail::whole_steps((g.a - g.source_x) / v, lat.dt);
    const auto nb = detail::whole_steps((g.b - g.a) / v, lat.dt);
    if (!na || !nb) throw domain_error("run_two_slit: slit and detector times must be whole steps");

    TwoSlitReport rep;
    rep.steps_to_slit = *na;
    rep.steps_to_detector = *nb;
    const double t_a = *na * lat.dt;
    const double tau = *nb * lat.dt;

    const auto proc = ProcessSpec::single([g](double x, double y) {
        return gaussian_packet(x, g.source_sigma_x, g.source_x, g.k0) * gaussian_packet(y, g.source_sigma_y, 0.0, 0.0);
    });
    auto dyn = dynamics(cfg);
    if (!dyn.retain_slices) dyn.retain_slices = 2;
    const auto strategy = cfg.strategy;
    auto to_slit = propagation::propagate(lat, proc, *na, strategy, dyn);
    rep.invalid_tapestries += count_invalid(to_slit);

    const measurement::Detector det = measurement::Detector::slab(
        2, {{g.b - cfg.detector.depth, -cfg.detector.half_width}, {g.b + cfg.detector.depth, cfg.detector.half_width}},
        cfg.detector.cells, 1);
    for (const auto& c : det.cells) rep.edges.push_back(c.box.lo[1]);
    rep.edges.push_back(det.cells.back().box.hi[1]);

    auto run_open = [&](bool lower, bool upper, CausalTapestry* keep) {
        auto masked = slit_mask(to_slit.back(), g, lower, upper);
        auto after = propagation::propagate(masked, *nb, proc, strategy, dyn);
        rep.invalid_tapestries += count_invalid(after);
        const auto wave = tapestry::interpret_state(after.back());
        if (keep) *keep = after.back();
        return measurement::coupling_probabilities(wave, det);
    };

    CausalTapestry both_slice = to_slit.back();
    rep.engine_p = run_open(g.lower_open, g.upper_open, &both_slice);
    for (double p : rep.engine_p) rep.detector_mass += p;
    if (g.lower_open && g.upper_open) {
        CausalTapestry up = both_slice, lo = both_slice;
        rep.upper_p = run_open(false, true, &up);
        rep.lower_p = run_open(true, false, &lo);
        double worst = 0.0, scale = 0.0;
        for (std::size_t i = 0; i < both_slice.informons().size(); ++i) {
            const Complex sum = up.informons()[i].theta + lo.informons()[i].theta;
            worst = std::max(worst, std::abs(both_slice.informons()[i].theta - sum));
            scale = std::max(scale, std::abs(both_slice.informons()[i].theta));
        }
        rep.superposition_residual = scale > 0.0 ? worst / scale : 0.0;
    } else if (g.upper_open) {
        rep.upper_p = rep.engine_p;
    } else {
        rep.lower_p = rep.engine_p;
    }

    // Detection trials, one independent stream per trial.
    rep.counts.assign(det.cells.size(), 0);
    std::string lines;
    for (int i = 0; i < cfg.trials; ++i) {
        const std::uint64_t seed = mix_seed(*cfg.seed, static_cast<std::uint64_t>(i));
        std::mt19937_64 rng(seed);
        const auto res = measurement::couple_with_retries(rep.engine_p, rng, cfg.max_rounds);
        if (res.cell) {
            ++rep.counts[*res.cell];
            ++rep.coupled;
        } else {
            ++rep.uncoupled;
        }
        if (cfg.output.write_trials && !cfg.output.dir.empty()) {
            json line{{"trial", i}, {"seed", seed}, {"rounds", res.rounds}};
            if (res.cell) {
                line["basin"] = det.cells[*res.cell].basin;
                line["position"] = 0.5 * (rep.edges[*res.cell] + rep.edges[*res.cell + 1]);
            } else {
                line["basin"] = nullptr;
                line["position"] = nullptr;
            }
            lines += line.dump() + "\n";
        }
    }
    for (auto c : rep.counts) rep.frequency.push_back(rep.coupled > 0 ? static_cast<double>(c) / static_cast<double>(rep.coupled) : 0.0);

    // Fresnel oracle: the mask acts on y only, so the detector profile is the
    // y-factor of the separable solution.
    rep.oracle_p = normalized(oracle::cell_masses(
        [&](double y) {
            return std::norm(oracle::two_slit_amplitude(y, t_a, tau, g.source_sigma_y, 0.0, {g.c, g.d}, g.lower_open, g.upper_open,
                                                        lat.hbar, lat.mass));
        },
        rep.edges, 16));
    rep.tv_histogram_oracle = oracle::tv_distance(rep.frequency, rep.oracle_p);
    rep.tv_engine_oracle = oracle::tv_distance(rep.engine_p, rep.oracle_p);

    std::vector<double> incoherent(rep.engine_p.size(), 0.0);
    for (std::size_t i = 0; i < incoherent.size(); ++i) {
        if (!rep.upper_p.empty()) incoherent[i] += rep.upper_p[i];
        if (!rep.lower_p.empty()) incoherent[i] += rep.lower_p[i];
    }
    rep.fringe_contrast = oracle::tv_distance(rep.frequency, incoherent);
    rep.fringe_spacing_histogram = peak_spacing(rep.frequency, rep.edges);
    rep.fringe_spacing_oracle = peak_spacing(rep.oracle_p, rep.edges);
    rep.fringe_spacing_far_field = 2.0 * pi * lat.hbar * tau / (lat.mass * (g.c + g.d));

    if (!cfg.output.dir.empty()) {
        if (cfg.output.format == "json") {
            detail::write_text(cfg.output, "histogram.json", rep.to_json().dump() + "\n");
        } else {
            std::string csv = "cell,y_lo,y_hi,count,frequency,engine_p,oracle_p,upper_p,lower_p\n";
            for (std::size_t i = 0; i < rep.counts.size(); ++i) {
                csv += std::to_string(i) + "," + detail::fmt(rep.edges[i]) + "," + detail::fmt(rep.edges[i + 1]) + "," +
                       std::to_string(rep.counts[i]) + "," + detail::fmt(rep.frequency[i]) + "," + detail::fmt(rep.engine_p[i]) + "," +
                       detail::fmt(rep.oracle_p[i]) + "," + (rep.upper_p.empty() ? "" : detail::fmt(rep.upper_p[i])) + "," +
                       (rep.lower_p.empty() ? "" : detail::fmt(rep.lower_p[i])) + "\n";
            }
            detail::write_text(cfg.output, "histogram.csv", csv);
        }
        if (cfg.output.write_trials) detail::write_text(cfg.output, "trials.jsonl", lines);
        json r = rep.to_json();
        detail::write_text(cfg.output, "report.json", r.dump(2) + "\n");
    }
    return rep;
}

struct BornReport {
    std::vector<Tag> tags;
    std::vector<double> expected;  // |w_j|^2
    std::vector<double> engine_p;  // per-tag coupling weights of the measured slice
    std::vector<std::int64_t> counts;
    std::vector<double> frequency;
    std::int64_t uncoupled = 0;
    double tv = 0.0;
    std::int64_t repeat_trials = 0;
    std::int64_t repeat_same = 0;
    std::size_t invalid_tapestries = 0;

    json to_json() const {
        return {{"scenario", "born"},          {"tags", tags},           {"expected", expected},
                {"engine_p", engine_p},         {"counts", counts},       {"frequency", frequency},
                {"uncoupled", uncoupled},       {"tv", tv},               {"repeat_trials", repeat_trials},
                {"repeat_same", repeat_same},   {"invalid_tapestries", invalid_tapestries}};
    }
};

// Measures an exclusive-sum superposition in its own eigenbasis `trials` times.
// The first `repeat_trials` couplings are followed by a second identical
// measurement on the collapsed process, one round later.
inline BornReport run_born(const ScenarioConfig& cfg) {
    if (!cfg.seed) throw domain_error("run_born: seed required");
    if (cfg.combination != propagation::Combination::exclusive_sum) throw domain_error("run_born: exclusive_sum required");
    const auto proc = build_process(cfg);
    detail::refuse_if_coarse(cfg, proc.layout().stride);
    const auto dyn = dynamics(cfg);
    auto taps = propagation::propagate(cfg.lattice, proc, cfg.steps, cfg.strategy, dyn);

    BornReport rep;
    rep.invalid_tapestries = count_invalid(taps);
    for (const auto& s : proc.subprocesses) {
        rep.tags.push_back(s.tag);
        rep.expected.push_back(std::norm(s.weight));
    }
    const auto& measured = taps.back();
    rep.engine_p = measurement::eigenbasis_probabilities(measured, rep.tags);
    rep.counts.assign(rep.tags.size(), 0);

    // Post-collapse slice and its coupling weights, built once per basin.
    std::map<Tag, std::vector<double>> after;
    auto repeat_p = [&](Tag tag) -> const std::vector<double>& {
        auto it = after.find(tag);
        if (it != after.end()) return it->second;
        const auto collapsed = measurement::collapse(proc, tag);
        const auto next = propagation::play_round(measured, collapsed, cfg.strategy, dyn);
        rep.invalid_tapestries += !tapestry::validate(next).empty();
        return after.emplace(tag, measurement::eigenbasis_probabilities(next, rep.tags)).first->second;
    };

    std::string lines;
    for (int i = 0; i < cfg.trials; ++i) {
        const std::uint64_t seed = mix_seed(*cfg.seed, static_cast<std::uint64_t>(i));
        std::mt19937_64 rng(seed);
        measurement::ProcessState state = measurement::begin_informational({}, "eigenbasis");
        const auto first = measurement::couple_with_retries(rep.engine_p, rng, cfg.max_rounds);
        json line{{"trial", i}, {"seed", seed}, {"rounds", first.rounds}};
        if (!first.cell) {
            ++rep.uncoupled;
            line["basin"] = nullptr;
        } else {
            const Tag tag = rep.tags[*first.cell];
            ++rep.counts[*first.cell];
            state = measurement::transition(state, static_cast<int>(tag));
            line["basin"] = tag;
            if (rep.repeat_trials < cfg.repeat_trials) {
                ++rep.repeat_trials;
                const auto second = measurement::couple_with_retries(repeat_p(tag), rng, cfg.max_rounds);
                bool same = false;
                if (second.cell) {
                    const Tag again = rep.tags[*second.cell];
                    try {
                        state = measurement::transition(state, static_cast<int>(again));
                        same = true;
                    } catch (const contract_violation&) {
                        same = false;
                    }
                    line["repeat_basin"] = again;
                } else {
                    line["repeat_basin"] = nullptr;
                }
                rep.repeat_same += same;
            }
        }
        if (cfg.output.write_trials && !cfg.output.dir.empty()) lines += line.dump() + "\n";
    }
    const std::int64_t coupled = cfg.trials - rep.uncoupled;
    for (auto c : rep.counts) rep.frequency.push_back(coupled > 0 ? static_cast<double>(c) / static_cast<double>(coupled) : 0.0);
    rep.tv = oracle::tv_distance(rep.frequency, rep.expected);

    if (!cfg.output.dir.empty()) {
        if (cfg.output.write_trials) detail::write_text(cfg.output, "trials.jsonl", lines);
        detail::write_text(cfg.output, "report.json", rep.to_json().dump(2) + "\n");
    }
    return rep;
}

// Runs the scenario a config names; returns its report.
inline json run(const ScenarioConfig& cfg) {
    switch (cfg.scenario) {
        case ScenarioKind::free_particle: return run_free_particle(cfg).to_json();
        case ScenarioKind::superposition: return run_superposition(cfg).to_json();
        case ScenarioKind::two_slit: return run_two_slit(cfg).to_json();
        case ScenarioKind::born: return run_born(cfg).to_json();
    }
    throw domain_error("run: unknown scenario");
}

}  // namespace rgame::scenarios

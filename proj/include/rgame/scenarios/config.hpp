// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "rgame/common.hpp"
#include "rgame/propagation.hpp"
#include "rgame/tapestry.hpp"

namespace rgame::scenarios {

using json = nlohmann::json;
using tapestry::ConstraintViolation;
using tapestry::LatticeConfig;
using tapestry::Tag;

enum class ScenarioKind { free_particle, superposition, two_slit, born };

inline const char* to_string(ScenarioKind k) {
    switch (k) {
        case ScenarioKind::free_particle: return "free_particle";
        case ScenarioKind::superposition: return "superposition";
        case ScenarioKind::two_slit: return "two_slit";
        case ScenarioKind::born: return "born";
    }
    return "?";
}

// Initial one-particle state. Gaussians use psi(x, 0) proportional to
// exp(-(x-x0)^2/(4 sigma^2) + i k0 x); "ho" is the n-th oscillator eigenfunction.
struct StateSpec {
    enum class Kind { gaussian, ho };
    Kind kind = Kind::gaussian;
    double sigma = 1.0;
    double x0 = 0.0;
    double k0 = 0.0;
    int n = 0;
    double omega = 1.0;
};

struct SubprocessConfig {
    Complex weight{1.0, 0.0};
    StateSpec state;
    std::optional<Tag> tag;
};

struct PotentialSpec {
    enum class Kind { free, constant, harmonic };
    Kind kind = Kind::free;
    double value = 0.0;
    double omega = 1.0;
};

// Source at (source_x, 0) moving along +x with wave number k0; slits [c, d] and
// [-d, -c] in the plane x = a; detector plane x = b.
struct SlitGeometry {
    double source_x = -4.0;
    double source_sigma_x = 2.0;
    double source_sigma_y = 2.0;
    double k0 = 2.0;
    double a = 4.0;
    double c = 1.875;
    double d = 4.125;
    double b = 20.0;
    bool lower_open = true;
    bool upper_open = true;
};

struct DetectorSpec {
    int cells = 64;
    double half_width = 24.0;  // y span [-half_width, half_width]
    double depth = 15.0;       // x span [b - depth, b + depth]
};

struct OutputSpec {
    std::string dir;
    std::string format = "csv";
    bool write_trials = true;
};

struct ScenarioConfig {
    ScenarioKind scenario = ScenarioKind::free_particle;
    LatticeConfig lattice;
    PotentialSpec potential;
    propagation::Combination combination = propagation::Combination::single;
    std::vector<SubprocessConfig> subprocesses{SubprocessConfig{}};
    propagation::Strategy strategy = propagation::Strategy::exhaustive();
    propagation::KernelWindow window = propagation::KernelWindow::taper();
    std::optional<std::size_t> retain_slices;
    int steps = 20;
    std::optional<std::uint64_t> seed;
    int trials = 0;
    int repeat_trials = 10000;
    int max_rounds = 100;
    SlitGeometry geometry;
    DetectorSpec detector;
    OutputSpec output;

    int stride() const {
        return combination == propagation::Combination::exclusive_sum ? static_cast<int>(subprocesses.size()) : 1;
    }
    bool stochastic() const {
        return scenario == ScenarioKind::two_slit || scenario == ScenarioKind::born ||
               strategy.kind == propagation::Strategy::Kind::stochastic;
    }
};

struct ParseResult {
    std::optional<ScenarioConfig> config;
    std::vector<ConstraintViolation> violations;

    bool ok() const { return config.has_value(); }
};

namespace detail {

// Strict reader: every key of every object must be consumed or is reported unknown.
class Reader {
public:
    std::vector<ConstraintViolation> violations;

    void fail(const std::string& field, const std::string& constraint) { violations.push_back({field, constraint}); }

    // Reports keys of `obj` outside `allowed`. Returns false if `obj` is not an object.
    bool object(const json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
        if (!obj.is_object()) {
            fail(path.empty() ? "<root>" : path, "must be an object");
            return false;
        }
        std::set<std::string> ok(allowed.begin(), allowed.end());
        for (const auto& [key, value] : obj.items()) {
            if (!ok.count(key)) fail(join(path, key), "unknown field");
        }
        return true;
    }

    void number(const json& obj, const std::string& path, const char* key, double& out) {
        if (!obj.contains(key)) return;
        const auto& v = obj.at(key);
        if (!v.is_number()) return fail(join(path, key), "must be a number");
        out = v.get<double>();
    }
    template <class Int>
    void integer(const json& obj, const std::string& path, const char* key, Int& out) {
        if (!obj.contains(key)) return;
        const auto& v = obj.at(key);
        if (!v.is_number_integer()) return fail(join(path, key), "must be an integer");
        if constexpr (std::is_unsigned_v<Int>) {
            if (v.is_number_unsigned() || v.get<long long>() >= 0) {
                out = v.get<Int>();
            } else {
                fail(join(path, key), "must be non-negative");
            }
        } else {
            out = v.get<Int>();
        }
    }
    void string(const json& obj, const std::string& path, const char* key, std::string& out) {
        if (!obj.contains(key)) return;
        const auto& v = obj.at(key);
        if (!v.is_string()) return fail(join(path, key), "must be a string");
        out = v.get<std::string>();
    }
    void boolean(const json& obj, const std::string& path, const char* key, bool& out) {
        if (!obj.contains(key)) return;
        const auto& v = obj.at(key);
        if (!v.is_boolean()) return fail(join(path, key), "must be a boolean");
        out = v.get<bool>();
    }

    static std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }
};

inline void read_lattice(Reader& r, const json& j, LatticeConfig& c) {
    if (!r.object(j, "lattice", {"dt", "dx", "dims", "extent", "hbar", "mass", "band_limit"})) return;
    r.number(j, "lattice", "dt", c.dt);
    r.number(j, "lattice", "dx", c.dx);
    r.integer(j, "lattice", "dims", c.dims);
    r.integer(j, "lattice", "extent", c.extent);
    r.number(j, "lattice", "hbar", c.hbar);
    r.number(j, "lattice", "mass", c.mass);
    if (j.contains("band_limit")) {
        double b = 0.0;
        r.number(j, "lattice", "band_limit", b);
        c.band_limit = b;
    }
}

inline void read_state(Reader& r, const json& j, const std::string& path, StateSpec& s) {
    if (!r.object(j, path, {"kind", "sigma", "x0", "k0", "n", "omega"})) return;
    std::string kind = "gaussian";
    r.string(j, path, "kind", kind);
    if (kind == "gaussian") {
        s.kind = StateSpec::Kind::gaussian;
        for (const char* k : {"n", "omega"}) {
            if (j.contains(k)) r.fail(Reader::join(path, k), "not used by a gaussian state");
        }
    } else if (kind == "ho") {
        s.kind = StateSpec::Kind::ho;
        for (const char* k : {"sigma", "x0", "k0"}) {
            if (j.contains(k)) r.fail(Reader::join(path, k), "not used by an oscillator state");
        }
    } else {
        r.fail(Reader::join(path, "kind"), "one of gaussian, ho");
    }
    r.number(j, path, "sigma", s.sigma);
    r.number(j, path, "x0", s.x0);
    r.number(j, path, "k0", s.k0);
    r.integer(j, path, "n", s.n);
    r.number(j, path, "omega", s.omega);
    if (!(s.sigma > 0.0)) r.fail(Reader::join(path, "sigma"), "sigma > 0");
    if (s.n < 0 || s.n > 40) r.fail(Reader::join(path, "n"), "0 <= n <= 40");
    if (!(s.omega > 0.0)) r.fail(Reader::join(path, "omega"), "omega > 0");
}

inline void read_process(Reader& r, const json& j, ScenarioConfig& cfg) {
    if (!r.object(j, "process", {"combination", "subprocesses"})) return;
    std::string comb = "single";
    r.string(j, "process", "combination", comb);
    if (comb == "single") {
        cfg.combination = propagation::Combination::single;
    } else if (comb == "exclusive_sum") {
        cfg.combination = propagation::Combination::exclusive_sum;
    } else {
        r.fail("process.combination", "one of single, exclusive_sum");
    }
    if (!j.contains("subprocesses") || !j.at("subprocesses").is_array() || j.at("subprocesses").empty()) {
        r.fail("process.subprocesses", "non-empty array required");
        return;
    }
    cfg.subprocesses.clear();
    const auto& subs = j.at("subprocesses");
    for (std::size_t i = 0; i < subs.size(); ++i) {
        const std::string path = "process.subprocesses[" + std::to_string(i) + "]";
        SubprocessConfig s;
        const auto& e = subs[i];
        if (!r.object(e, path, {"weight", "state", "tag"})) continue;
        if (e.contains("weight")) {
            const auto& w = e.at("weight");
            if (w.is_number()) {
                s.weight = {w.get<double>(), 0.0};
            } else if (w.is_array() && w.size() == 2 && w[0].is_number() && w[1].is_number()) {
                s.weight = {w[0].get<double>(), w[1].get<double>()};
            } else {
                r.fail(path + ".weight", "a number or [re, im]");
            }
        }
        if (e.contains("state")) {
            read_state(r, e.at("state"), path + ".state", s.state);
        } else {
            r.fail(path + ".state", "required");
        }
        if (e.contains("tag")) {
            Tag t = 0;
            r.integer(e, path, "tag", t);
            s.tag = t;
        }
        cfg.subprocesses.push_back(s);
    }
}

inline void read_strategy(Reader& r, const json& j, ScenarioConfig& cfg) {
    if (!r.object(j, "strategy", {"kind", "n_plays"})) return;
    std::string kind = "exhaustive";
    r.string(j, "strategy", "kind", kind);
    if (kind == "exhaustive") {
        cfg.strategy = propagation::Strategy::exhaustive();
        if (j.contains("n_plays")) r.fail("strategy.n_plays", "only used by the stochastic strategy");
    } else if (kind == "stochastic") {
        std::uint64_t n = 0;
        r.integer(j, "strategy", "n_plays", n);
        if (n == 0) r.fail("strategy.n_plays", "n_plays >= 1 required for the stochastic strategy");
        cfg.strategy = propagation::Strategy::stochastic(n, 0);
    } else {
        r.fail("strategy.kind", "one of exhaustive, stochastic");
    }
}

inline void read_potential(Reader& r, const json& j, PotentialSpec& p) {
    if (!r.object(j, "potential", {"kind", "value", "omega"})) return;
    std::string kind = "free";
    r.string(j, "potential", "kind", kind);
    if (kind == "free") {
        p.kind = PotentialSpec::Kind::free;
    } else if (kind == "constant") {
        p.kind = PotentialSpec::Kind::constant;
    } else if (kind == "harmonic") {
        p.kind = PotentialSpec::Kind::harmonic;
    } else {
        r.fail("potential.kind", "one of free, constant, harmonic");
    }
    r.number(j, "potential", "value", p.value);
    r.number(j, "potential", "omega", p.omega);
    if (!(p.omega > 0.0)) r.fail("potential.omega", "omega > 0");
}

inline void read_geometry(Reader& r, const json& j, SlitGeometry& g) {
    if (!r.object(j, "geometry", {"source_x", "source_sigma_x", "source_sigma_y", "k0", "a", "c", "d", "b", "open"})) return;
    r.number(j, "geometry", "source_x", g.source_x);
    r.number(j, "geometry", "source_sigma_x", g.source_sigma_x);
    r.number(j, "geometry", "source_sigma_y", g.source_sigma_y);
    r.number(j, "geometry", "k0", g.k0);
    r.number(j, "geometry", "a", g.a);
    r.number(j, "geometry", "c", g.c);
    r.number(j, "geometry", "d", g.d);
    r.number(j, "geometry", "b", g.b);
    std::string open = "both";
    r.string(j, "geometry", "open", open);
    if (open == "both") {
        g.lower_open = g.upper_open = true;
    } else if (open == "upper") {
        g.lower_open = false;
        g.upper_open = true;
    } else if (open == "lower") {
        g.lower_open = true;
        g.upper_open = false;
    } else {
        r.fail("geometry.open", "one of both, upper, lower");
    }
}

inline void read_detector(Reader& r, const json& j, DetectorSpec& d) {
    if (!r.object(j, "detector", {"cells", "half_width", "depth"})) return;
    r.integer(j, "detector", "cells", d.cells);
    r.number(j, "detector", "half_width", d.half_width);
    r.number(j, "detector", "depth", d.depth);
}

inline void read_output(Reader& r, const json& j, OutputSpec& o) {
    if (!r.object(j, "output", {"dir", "format", "write_trials"})) return;
    r.string(j, "output", "dir", o.dir);
    r.string(j, "output", "format", o.format);
    r.boolean(j, "output", "write_trials", o.write_trials);
    if (o.format != "csv" && o.format != "json") r.fail("output.format", "one of csv, json");
}

// Integer number of lattice steps covering `duration`, or nullopt.
inline std::optional<int> whole_steps(double duration, double dt) {
    const double n = duration / dt;
    const double r = std::round(n);
    if (std::abs(n - r) > 1e-9 * std::max(1.0, r)) return std::nullopt;
    return static_cast<int>(r);
}

inline void check_semantics(Reader& r, const json& j, ScenarioConfig& cfg) {
    for (const auto& v : tapestry::check_config(cfg.lattice)) r.fail("lattice." + v.field, v.constraint);

    if (cfg.steps < 0) r.fail("steps", "steps >= 0");
    if (cfg.trials < 0) r.fail("trials", "trials >= 0");
    if (cfg.repeat_trials < 0) r.fail("repeat_trials", "repeat_trials >= 0");
    if (cfg.max_rounds < 1) r.fail("max_rounds", "max_rounds >= 1");
    if (cfg.stochastic() && !cfg.seed) r.fail("seed", "required for stochastic runs");

    // Process weights and tags.
    const bool exclusive = cfg.combination == propagation::Combination::exclusive_sum;
    if (!exclusive && cfg.subprocesses.size() != 1) r.fail("process.subprocesses", "a single process has one subprocess");
    double norm = 0.0;
    std::set<Tag> tags;
    for (std::size_t i = 0; i < cfg.subprocesses.size(); ++i) {
        const auto& s = cfg.subprocesses[i];
        norm += std::norm(s.weight);
        if (exclusive && !s.tag) r.fail("process.subprocesses[" + std::to_string(i) + "].tag", "required in an exclusive sum");
        if (s.tag && !tags.insert(*s.tag).second) {
            r.fail("process.subprocesses[" + std::to_string(i) + "].tag", "tags must be distinct");
        }
    }
    if (std::abs(norm - 1.0) > 1e-9) r.fail("process.subprocesses", "sum of |weight|^2 = 1");

    switch (cfg.scenario) {
        case ScenarioKind::free_particle:
            if (cfg.potential.kind != PotentialSpec::Kind::free) r.fail("potential.kind", "free_particle requires a free Lagrangian");
            if (exclusive) r.fail("process.combination", "free_particle uses a single process");
            if (cfg.subprocesses.front().state.kind != StateSpec::Kind::gaussian) {
                r.fail("process.subprocesses[0].state.kind", "free_particle starts from a gaussian");
            }
            if (cfg.lattice.dims != 1) r.fail("lattice.dims", "dims = 1 for free_particle");
            break;
        case ScenarioKind::superposition:
            if (cfg.potential.kind != PotentialSpec::Kind::free) r.fail("potential.kind", "superposition requires a free Lagrangian");
            if (!exclusive || cfg.subprocesses.size() < 2) r.fail("process.combination", "exclusive_sum with at least 2 subprocesses");
            for (std::size_t i = 0; i < cfg.subprocesses.size(); ++i) {
                if (cfg.subprocesses[i].state.kind != StateSpec::Kind::gaussian) {
                    r.fail("process.subprocesses[" + std::to_string(i) + "].state.kind", "superposition uses gaussian packets");
                }
            }
            if (cfg.lattice.dims != 1) r.fail("lattice.dims", "dims = 1 for superposition");
            break;
        case ScenarioKind::born:
            if (!exclusive || cfg.subprocesses.size() < 2) r.fail("process.combination", "exclusive_sum with at least 2 subprocesses");
            if (cfg.lattice.dims != 1) r.fail("lattice.dims", "dims = 1 for born");
            if (cfg.trials < 1) r.fail("trials", "trials >= 1");
            break;
        case ScenarioKind::two_slit: {
            if (j.contains("process")) r.fail("process", "two_slit builds its source from geometry");
            if (j.contains("steps")) r.fail("steps", "two_slit derives its steps from geometry");
            if (cfg.lattice.dims != 2) r.fail("lattice.dims", "dims = 2 for two_slit");
            if (cfg.potential.kind != PotentialSpec::Kind::free) r.fail("potential.kind", "two_slit requires a free Lagrangian");
            if (cfg.trials < 1) r.fail("trials", "trials >= 1");
            const auto& g = cfg.geometry;
            if (!(0.0 < g.a && g.a < g.b)) r.fail("geometry", "0 < a < b");
            if (!(0.0 < g.c && g.c < g.d)) r.fail("geometry", "0 < c < d");
            if (!(g.source_x < g.a)) r.fail("geometry.source_x", "source_x < a");
            if (!(g.k0 > 0.0)) r.fail("geometry.k0", "k0 > 0");
            if (!(g.source_sigma_x > 0.0) || !(g.source_sigma_y > 0.0)) r.fail("geometry", "source widths > 0");
            const double v = cfg.lattice.hbar * g.k0 / cfg.lattice.mass;
            if (v > 0.0 && cfg.lattice.dt > 0.0) {
                if (!whole_steps((g.a - g.source_x) / v, cfg.lattice.dt)) r.fail("geometry.a", "(a - source_x) / v a whole number of steps");
                if (!whole_steps((g.b - g.a) / v, cfg.lattice.dt)) r.fail("geometry.b", "(b - a) / v a whole number of steps");
            }
            const double edge = cfg.lattice.extent * cfg.lattice.dx;
            if (g.d >= edge) r.fail("geometry.d", "slits inside the lattice extent");
            const auto& d = cfg.detector;
            if (d.cells < 1) r.fail("detector.cells", "cells >= 1");
            if (!(d.half_width > 0.0) || d.half_width > edge) r.fail("detector.half_width", "0 < half_width <= extent * dx");
            if (!(d.depth > 0.0) || g.b + d.depth > edge) r.fail("detector.depth", "b + depth <= extent * dx");
            break;
        }
    }

    if (r.violations.empty()) {
        for (const auto& v : propagation::check_discretization(cfg.lattice, cfg.lattice.mass, cfg.stride())) {
            r.fail("lattice." + v.field, v.constraint);
        }
    }
}

}  // namespace detail

inline ParseResult parse_config(const json& j) {
    detail::Reader r;
    ScenarioConfig cfg;
    if (!r.object(j, "", {"scenario", "lattice", "potential", "process", "strategy", "window", "retain_slices", "steps", "seed",
                          "trials", "repeat_trials", "max_rounds", "geometry", "detector", "output"})) {
        return {std::nullopt, r.violations};
    }
    std::string name;
    if (!j.contains("scenario")) r.fail("scenario", "required");
    r.string(j, "", "scenario", name);
    if (name == "free_particle") {
        cfg.scenario = ScenarioKind::free_particle;
    } else if (name == "superposition") {
        cfg.scenario = ScenarioKind::superposition;
    } else if (name == "two_slit") {
        cfg.scenario = ScenarioKind::two_slit;
        cfg.lattice.dims = 2;
        cfg.lattice.dx = 0.25;
        cfg.lattice.dt = 0.5;
        cfg.lattice.extent = 160;
        cfg.retain_slices = 2;
        cfg.trials = 100000;
    } else if (name == "born") {
        cfg.scenario = ScenarioKind::born;
    } else if (j.contains("scenario")) {
        r.fail("scenario", "one of free_particle, superposition, two_slit, born");
    }

    if (j.contains("lattice")) detail::read_lattice(r, j.at("lattice"), cfg.lattice);
    if (j.contains("potential")) detail::read_potential(r, j.at("potential"), cfg.potential);
    if (j.contains("process")) detail::read_process(r, j.at("process"), cfg);
    if (j.contains("strategy")) detail::read_strategy(r, j.at("strategy"), cfg);
    if (j.contains("geometry")) detail::read_geometry(r, j.at("geometry"), cfg.geometry);
    if (j.contains("detector")) detail::read_detector(r, j.at("detector"), cfg.detector);
    if (j.contains("output")) detail::read_output(r, j.at("output"), cfg.output);
    if (j.contains("window")) {
        std::string w;
        r.string(j, "", "window", w);
        if (w == "taper") {
            cfg.window = propagation::KernelWindow::taper();
        } else if (w == "hard") {
            cfg.window = propagation::KernelWindow::hard();
        } else if (w == "none") {
            cfg.window = propagation::KernelWindow::none();
        } else {
            r.fail("window", "one of taper, hard, none");
        }
    }
    if (j.contains("retain_slices")) {
        std::size_t k = 0;
        r.integer(j, "", "retain_slices", k);
        if (k == 0) r.fail("retain_slices", "retain_slices >= 1");
        cfg.retain_slices = k;
    }
    r.integer(j, "", "steps", cfg.steps);
    if (j.contains("seed")) {
        std::uint64_t s = 0;
        r.integer(j, "", "seed", s);
        cfg.seed = s;
    }
    r.integer(j, "", "trials", cfg.trials);
    r.integer(j, "", "repeat_trials", cfg.repeat_trials);
    r.integer(j, "", "max_rounds", cfg.max_rounds);
    if (cfg.seed) cfg.strategy.seed = *cfg.seed;

    if (r.violations.empty()) detail::check_semantics(r, j, cfg);
    if (!r.violations.empty()) return {std::nullopt, r.violations};
    return {cfg, {}};
}

// Reads and parses a config file; malformed documents yield a "<document>" violation.
inline ParseResult parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) return {std::nullopt, {{"<document>", "cannot open " + path}}};
    std::stringstream ss;
    ss << in.rdbuf();
    json j;
    try {
        j = json::parse(ss.str());
    } catch (const json::parse_error& e) {
        return {std::nullopt, {{"<document>", std::string("malformed JSON: ") + e.what()}}};
    }
    return parse_config(j);
}

}  // namespace rgame::scenarios

// SPDX-License-Identifier: Apache-2.0
// Acceptance checks. Each criterion prints detail lines and one final
// "criterion N PASS|FAIL" line; the exit code is nonzero on FAIL.
#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "rgame/cgt.hpp"
#include "rgame/interp.hpp"
#include "rgame/metrics.hpp"
#include "rgame/nkprob.hpp"
#include "rgame/oracle.hpp"
#include "rgame/propagation.hpp"
#include "rgame/scenarios.hpp"
#include "rgame/tapestry.hpp"
#include "validator_oracle.hpp"

#ifndef RGAME_SOURCE_DIR
#define RGAME_SOURCE_DIR "."
#endif

namespace {

using namespace rgame;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

// Collects sub-checks; the criterion passes only if all of them pass.
class Report {
public:
    void check(bool pass, const std::string& what) {
        std::cout << "  " << (pass ? "ok   " : "FAIL ") << what << "\n";
        ok_ = ok_ && pass;
    }
    void note(const std::string& what) { std::cout << "  " << what << "\n"; }
    bool ok() const { return ok_; }

private:
    bool ok_ = true;
};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

scenarios::ScenarioConfig load(const std::string& name, const fs::path& out) {
    const auto path = fs::path(RGAME_SOURCE_DIR) / "configs" / (name + ".json");
    auto r = scenarios::parse_config_file(path.string());
    if (!r.ok()) {
        std::string msg = "config " + path.string() + " rejected:";
        for (const auto& v : r.violations) msg += " " + v.field + ": " + v.constraint + ";";
        throw std::runtime_error(msg);
    }
    r.config->output.dir = out.string();
    return *r.config;
}

fs::path scratch(const std::string& name) {
    auto p = fs::temp_directory_path() / ("rgame_acceptance_" + name);
    fs::remove_all(p);
    return p;
}

std::map<std::string, std::string> read_tree(const fs::path& dir) {
    std::map<std::string, std::string> files;
    if (!fs::exists(dir)) return files;
    for (const auto& e : fs::recursive_directory_iterator(dir)) {
        if (!e.is_regular_file()) continue;
        std::ifstream in(e.path(), std::ios::binary);
        std::stringstream ss;
        ss << in.rdbuf();
        files[fs::relative(e.path(), dir).string()] = ss.str();
    }
    return files;
}

// ---- 1: exact reference constants ----------------------------------------

bool reference_constants(Report& r) {
    const auto t0 = Clock::now();
    for (const char* name : {"ifs-phi", "ifs-rho", "ifs-sigma"}) {
        const auto d = scenarios::run_demo(name);
        r.check(d.match, std::string(name) + " levels 0-3 " + d.outputs.dump());
    }

    using nkprob::Block;
    using nkprob::Rational;
    using nkprob::Transform;
    const std::vector<Transform> phi{Transform::alpha, Transform::beta}, rho{Transform::gamma},
        sigma{Transform::alpha, Transform::beta, Transform::gamma};
    auto lv = [](const std::vector<Transform>& g, int k) { return nkprob::level_distribution(g, Block::a, k); };
    const Rational w1(2, 3), w2(1, 3);
    struct Row {
        const char* what;
        nkprob::MixtureResult res;
    };
    const Row rows[] = {{"k vs 2/3 g + 1/3 j", nkprob::mixture_compare(w1, lv(phi, 1), w2, lv(rho, 1), lv(sigma, 1))},
                        {"l vs 2/3 h + 1/3 i", nkprob::mixture_compare(w1, lv(phi, 2), w2, lv(rho, 2), lv(sigma, 2))},
                        {"m vs 2/3 g + 1/3 j", nkprob::mixture_compare(w1, lv(phi, 1), w2, lv(rho, 1), lv(sigma, 3))}};
    for (const auto& row : rows) {
        r.check(!row.res.equal, std::string("mixture mismatch ") + row.what + ": mixture " + nkprob::to_string(row.res.mixture) +
                                    (row.res.equal ? " equals" : " differs from") + " the sigma level");
    }

    const auto lego = nkprob::lego_demo();
    r.check(lego.p0 == Rational(1, 4) && lego.p1 == Rational(1, 2) && lego.p2 == Rational(1, 2),
            "lego p = " + lego.p0.str() + ", " + lego.p1.str() + ", " + lego.p2.str() + " (want 1/4, 1/2, 1/2)");
    r.check(lego.total == Rational(3, 2), "lego total " + lego.total.str() + " (want 3/2)");
    r.check(lego.interaction == Rational(-1, 4), "lego interaction " + lego.interaction.str() + " (want -1/4)");

    const auto bell = nkprob::bell_toy();
    r.check(bell.lhs == Rational(1, 2) && bell.rhs == Rational(3, 2) && bell.violated,
            "bell lhs " + bell.lhs.str() + " rhs " + bell.rhs.str() + " violated " + (bell.violated ? "true" : "false"));
    const double s = seconds_since(t0);
    r.check(s < 1.0, "runtime " + num(s) + " s < 1 s");
    return r.ok();
}

// ---- 2: census --------------------------------------------------------------

bool census(Report& r) {
    const auto t0 = Clock::now();
    const std::size_t want[] = {1, 4, 36};
    for (int day = 0; day <= 2; ++day) {
        const auto n = cgt::born_by(day).size();
        r.check(n == want[day], "day " + std::to_string(day) + ": " + std::to_string(n) + " values (want " + std::to_string(want[day]) + ")");
    }
    std::set<std::string> day1;
    for (const auto& g : cgt::born_by(1)) day1.insert(cgt::to_string(g));
    r.check(day1 == std::set<std::string>{"0", "1", "-1", "*"}, "day-1 set {0, 1, -1, *}");
    r.note("forms over day-1 values with no dominated options: " + std::to_string(cgt::count_undominated_forms(2)));
    const double s = seconds_since(t0);
    r.check(s < 10.0, "runtime " + num(s) + " s < 10 s");
    return r.ok();
}

// ---- 3: CGT algebra ---------------------------------------------------------

bool cgt_algebra(Report& r) {
    using namespace cgt;
    std::vector<Game> forms = born_by(2);
    const auto prev = born_by(1);
    // Every {L | R} over day-1 values, including dominated and reversible forms.
    for (std::uint32_t lm = 0; lm < 16; ++lm) {
        for (std::uint32_t rm = 0; rm < 16; ++rm) {
            std::vector<Game> L, R;
            for (std::size_t i = 0; i < prev.size(); ++i) {
                if (lm & (1u << i)) L.push_back(prev[i]);
                if (rm & (1u << i)) R.push_back(prev[i]);
            }
            forms.push_back(Game::make(L, R));
        }
    }
    std::size_t inverse = 0, zero_outcome = 0, negation = 0, idempotent = 0, preserving = 0, classes = 0;
    for (const auto& g : forms) {
        inverse += equal(add(g, neg(g)), zero());
        zero_outcome += (outcome(g) == Outcome::Zero) == equal(g, zero());
        const Outcome o = outcome(g), n = outcome(neg(g));
        negation += n == (o == Outcome::Positive ? Outcome::Negative : o == Outcome::Negative ? Outcome::Positive : o);
        const Game c = canonical_form(g);
        idempotent += canonical_form(c) == c;
        preserving += equal(c, g);
    }
    for (const auto& g : forms) {
        for (const auto& h : forms) classes += equal(g, h) == (canonical_form(g) == canonical_form(h));
    }
    const auto n = forms.size();
    r.note(std::to_string(n) + " forms (born_by(2) values and all {L | R} over day-1 values)");
    r.check(inverse == n, "g + (-g) = 0: " + std::to_string(inverse) + "/" + std::to_string(n));
    r.check(zero_outcome == n, "outcome Zero iff g = 0: " + std::to_string(zero_outcome) + "/" + std::to_string(n));
    r.check(negation == n, "negation swaps Positive/Negative: " + std::to_string(negation) + "/" + std::to_string(n));
    r.check(idempotent == n, "canonical_form idempotent: " + std::to_string(idempotent) + "/" + std::to_string(n));
    r.check(preserving == n, "canonical_form equal to its input: " + std::to_string(preserving) + "/" + std::to_string(n));
    r.check(classes == n * n, "equal iff same canonical form: " + std::to_string(classes) + "/" + std::to_string(n * n));
    return r.ok();
}

// ---- 4: interpolation -------------------------------------------------------

bool interpolation(Report& r) {
    const auto gauss = [](double t) { return Complex(std::exp(-t * t)); };
    const auto s = interp::SampleSet1D::sample(gauss, 4.0, 64);
    double cardinal = 0.0;
    for (std::size_t i = 0; i < s.values.size(); ++i) {
        const double t = (static_cast<double>(i) - 64.0) / 8.0;
        cardinal = std::max(cardinal, std::abs(interp::wsk_reconstruct(s, t) - s.values[i]));
    }
    r.check(cardinal <= 1e-14, "cardinal exactness max error " + num(cardinal) + " <= 1e-14");

    double sup = 0.0;
    for (int i = 0; i <= 1600; ++i) {
        const double t = -4.0 + 8.0 * i / 1600;
        sup = std::max(sup, std::abs(interp::wsk_reconstruct(s, t) - gauss(t)));
    }
    r.check(sup < 1e-6, "Gaussian reconstruction W=4 N=64 sup error " + num(sup) + " < 1e-6");

    double previous = 1e300;
    bool monotone = true;
    std::string trail;
    for (int n : {4, 8, 16, 32, 64, 128}) {
        const double e = interp::empirical_truncation_error(gauss, 4.0, n, 0.3);
        monotone = monotone && e <= previous;
        previous = e;
        trail += " " + num(e);
    }
    r.check(monotone, "truncation error non-increasing in N:" + trail);

    const double planck = interp::planck_sampling_error(5.391247e-44, 1.616255e-35, 1.0, 1.0);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.0e", planck);
    r.check(std::string(buf) == "2e-151", "Planck-lattice magnitude " + num(planck) + " rounds to " + buf + " (want 2e-151)");
    return r.ok();
}

// ---- 5: free-particle emergence ---------------------------------------------

bool free_particle(Report& r) {
    const auto t0 = Clock::now();
    auto cfg = load("free_particle", scratch("c5"));
    const auto rep = scenarios::run_free_particle(cfg);
    const double s = seconds_since(t0);
    const auto& last = rep.final_step();
    r.check(last.step == 20, "steps " + std::to_string(last.step));
    r.check(last.amplitude_error < 0.02, "amplitude relative L2 error " + num(last.amplitude_error) + " < 0.02");
    r.check(last.density_error < 0.02, "density relative L2 error " + num(last.density_error) + " < 0.02");
    r.check(rep.norm_drift < 0.01, "norm drift " + num(rep.norm_drift) + " < 0.01");
    r.check(s < 120.0, "runtime " + num(s) + " s < 120 s");

    auto fine = cfg;
    fine.lattice.dt /= 2;
    fine.lattice.dx /= 2;
    fine.lattice.extent *= 2;
    fine.steps *= 2;
    fine.output.dir.clear();
    const auto rep2 = scenarios::run_free_particle(fine);
    r.check(rep2.final_step().amplitude_error < last.amplitude_error,
            "halving dt and dx: error " + num(last.amplitude_error) + " -> " + num(rep2.final_step().amplitude_error));
    return r.ok();
}

// ---- 6: one round against the kernel -----------------------------------------

bool single_step(Report& r) {
    using namespace propagation;
    tapestry::LatticeConfig c;
    for (double k0 : {0.0, 1.0, 2.0}) {
        auto psi0 = [k0](double x) { return oracle::free_gaussian(x, 0.0, 1.0, 0.5, k0); };
        const auto proc = ProcessSpec::single([&](double x, double) { return psi0(x); });
        const Dynamics dyn{LagrangianSpec::free(), KernelWindow::taper(), std::nullopt};
        const auto next = play_round(initial_tapestry(c, proc), proc, Strategy::exhaustive(), dyn);
        auto ref = [&](double y) { return oracle::apply_kernel(psi0, y, c.dt, y - 12.0, y + 12.0, 24000); };
        const double e = metrics::rel_l2_amplitude(tapestry::interpret_state(next), ref, -8.0, 9.0, 340);
        r.check(e < 1e-3, "k0=" + num(k0) + ": relative L2 vs fine-quadrature kernel " + num(e) + " < 1e-3");
    }
    return r.ok();
}

// ---- 7: superposition -------------------------------------------------------

bool superposition(Report& r) {
    const auto rep = scenarios::run_superposition(load("superposition", scratch("c7")));
    r.check(rep.final_step().amplitude_error < 0.03, "total wave relative L2 error " + num(rep.final_step().amplitude_error) + " < 0.03");
    r.check(rep.single_tagged, "every informon carries exactly one tag");
    r.check(rep.tags.size() == 2, std::to_string(rep.tags.size()) + " tagged partial waves");
    for (const auto& t : rep.tags) {
        r.check(t.amplitude_error < 0.05, "tag " + std::to_string(t.tag) + " partial wave vs w_i Psi_i " + num(t.amplitude_error) + " < 0.05");
    }
    return r.ok();
}

// ---- 8: Born frequencies ------------------------------------------------------

bool born(Report& r) {
    const auto cfg = load("born", scratch("c8"));
    const auto rep = scenarios::run_born(cfg);
    std::string freq, want;
    for (std::size_t i = 0; i < rep.frequency.size(); ++i) {
        freq += " " + num(rep.frequency[i]);
        want += " " + num(rep.expected[i]);
    }
    r.note("frequency" + freq + " vs |w|^2" + want + " over " + std::to_string(cfg.trials) + " trials");
    r.check(cfg.trials >= 100000, "trials " + std::to_string(cfg.trials) + " >= 1e5");
    r.check(rep.tv < 0.02, "TV distance " + num(rep.tv) + " < 0.02");
    r.check(rep.repeat_trials >= 10000, "repeat trials " + std::to_string(rep.repeat_trials) + " >= 1e4");
    r.check(rep.repeat_same == rep.repeat_trials,
            "repeated measurement same basin " + std::to_string(rep.repeat_same) + "/" + std::to_string(rep.repeat_trials));
    return r.ok();
}

// ---- 9: two slits -------------------------------------------------------------

bool two_slit(Report& r) {
    const auto t0 = Clock::now();
    const auto cfg = load("two_slit", scratch("c9"));
    const auto rep = scenarios::run_two_slit(cfg);
    const double s = seconds_since(t0);
    r.check(cfg.trials >= 100000, "trials " + std::to_string(cfg.trials) + " >= 1e5");
    r.check(rep.tv_histogram_oracle < 0.05, "TV histogram vs Fresnel oracle " + num(rep.tv_histogram_oracle) + " < 0.05");
    r.note("TV engine probabilities vs oracle " + num(rep.tv_engine_oracle) + "; both-open fringe contrast " + num(rep.fringe_contrast));
    r.note("fringe spacing histogram " + num(rep.fringe_spacing_histogram) + ", oracle " + num(rep.fringe_spacing_oracle) +
           ", far field " + num(rep.fringe_spacing_far_field));
    r.check(s < 600.0, "runtime " + num(s) + " s < 600 s");
    for (const char* open : {"upper", "lower"}) {
        auto single = cfg;
        single.geometry.lower_open = std::string(open) == "lower";
        single.geometry.upper_open = std::string(open) == "upper";
        single.output.dir = scratch(std::string("c9_") + open).string();
        const auto one = scenarios::run_two_slit(single);
        r.check(one.fringe_contrast < 0.05, std::string(open) + " slit only: fringe contrast " + num(one.fringe_contrast) + " < 0.05");
    }
    return r.ok();
}

// ---- 10: tapestry axioms ------------------------------------------------------

bool axioms(Report& r) {
    std::mt19937_64 rng(20261017);
    const int instances = 2000;
    int agree = 0, valid = 0;
    for (int n = 0; n < instances; ++n) {
        const auto tap = testing_support::random_tapestry(rng);
        bool same = true;
        for (bool strict : {false, true}) {
            const auto got = testing_support::axioms_of(tapestry::validate(tap, {strict}));
            same = same && got == testing_support::brute_force_axioms(tap, strict);
            if (!strict) valid += got.empty();
        }
        agree += same;
    }
    r.check(agree == instances, "validator agrees with brute force on " + std::to_string(agree) + "/" + std::to_string(instances) +
                                    " random tapestries (" + std::to_string(valid) + " valid)");
    auto fp = load("free_particle", {});
    r.check(scenarios::run_free_particle(fp).invalid_tapestries == 0, "free_particle tapestries all valid");
    auto sp = load("superposition", {});
    r.check(scenarios::run_superposition(sp).invalid_tapestries == 0, "superposition tapestries all valid");
    auto bn = load("born", {});
    bn.trials = 1000;
    bn.repeat_trials = 100;
    r.check(scenarios::run_born(bn).invalid_tapestries == 0, "born tapestries all valid");
    auto ts = load("two_slit", {});
    ts.trials = 1000;
    r.check(scenarios::run_two_slit(ts).invalid_tapestries == 0, "two_slit tapestries all valid");
    return r.ok();
}

// ---- 11: determinism ----------------------------------------------------------

bool determinism(Report& r) {
    for (const char* name : {"free_particle", "superposition", "born", "two_slit"}) {
        std::map<std::string, std::string> runs[2];
        std::string reports[2];
        for (int k = 0; k < 2; ++k) {
            const auto dir = scratch(std::string("c11_") + name + "_" + std::to_string(k));
            reports[k] = scenarios::run(load(name, dir)).dump();
            runs[k] = read_tree(dir);
        }
        const bool same = !runs[0].empty() && runs[0] == runs[1] && reports[0] == reports[1];
        r.check(same, std::string(name) + ": " + std::to_string(runs[0].size()) + " output files byte-identical across two runs");
    }
    return r.ok();
}

struct Criterion {
    int id;
    const char* title;
    std::function<bool(Report&)> run;
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Acceptance criteria"};
    int only = 0;
    app.add_option("--only", only, "Run a single criterion (1-11)")->check(CLI::Range(1, 11));
    CLI11_PARSE(app, argc, argv);

    const std::vector<Criterion> all{
        {1, "reference constants (IFS, mixtures, LEGO, Bell)", reference_constants},
        {2, "CGT census", census},
        {3, "CGT algebra over day-2 forms", cgt_algebra},
        {4, "interpolation", interpolation},
        {5, "free-particle emergence", free_particle},
        {6, "single round vs kernel quadrature", single_step},
        {7, "superposition", superposition},
        {8, "measurement and Born frequencies", born},
        {9, "two-slit detection", two_slit},
        {10, "tapestry axioms", axioms},
        {11, "determinism", determinism},
    };
    bool all_ok = true;
    for (const auto& c : all) {
        if (only != 0 && c.id != only) continue;
        std::cout << "criterion " << c.id << ": " << c.title << "\n";
        Report rep;
        bool ok = false;
        try {
            ok = c.run(rep);
        } catch (const std::exception& e) {
            rep.check(false, std::string("exception: ") + e.what());
        }
        ok = ok && rep.ok();
        std::cout << "criterion " << c.id << " " << (ok ? "PASS" : "FAIL") << "\n" << std::flush;
        all_ok = all_ok && ok;
    }
    return all_ok ? 0 : 1;
}

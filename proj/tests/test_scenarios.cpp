// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "rgame/oracle.hpp"
#include "rgame/scenarios.hpp"

using namespace rgame;
using namespace rgame::scenarios;
using nlohmann::json;

namespace {

json free_particle_doc()
{
    return json::parse(R"({
      "scenario": "free_particle",
      "lattice": {"dt": 0.05, "dx": 0.1, "extent": 400},
      "process": {"subprocesses": [{"weight": 1.0, "state": {"kind": "gaussian", "sigma": 1.0}}]},
      "steps": 20
    })");
}

json superposition_doc(json w1, json w2)
{
    json j = json::parse(R"({
      "scenario": "superposition",
      "lattice": {"dt": 0.05, "dx": 0.05, "extent": 800},
      "process": {"combination": "exclusive_sum", "subprocesses": [
        {"state": {"kind": "gaussian", "sigma": 1.0, "x0": -3.0, "k0": 2.0}, "tag": 1},
        {"state": {"kind": "gaussian", "sigma": 1.0, "x0": 3.0, "k0": -2.0}, "tag": 2}]},
      "steps": 20
    })");
    j["process"]["subprocesses"][0]["weight"] = w1;
    j["process"]["subprocesses"][1]["weight"] = w2;
    return j;
}

json two_slit_doc(const std::string& open, int trials)
{
    json j = json::parse(R"({
      "scenario": "two_slit",
      "seed": 99,
      "geometry": {"source_x": -4.0, "source_sigma_x": 2.0, "source_sigma_y": 2.0, "k0": 2.0,
                   "a": 4.0, "c": 1.875, "d": 4.125, "b": 20.0}
    })");
    j["geometry"]["open"] = open;
    j["trials"] = trials;
    return j;
}

json born_doc(int trials)
{
    json j = json::parse(R"({
      "scenario": "born",
      "seed": 5,
      "lattice": {"dt": 0.1, "dx": 0.05, "extent": 200},
      "potential": {"kind": "harmonic", "omega": 1.0},
      "process": {"combination": "exclusive_sum", "subprocesses": [
        {"weight": 0.6, "state": {"kind": "ho", "n": 0}, "tag": 1},
        {"weight": [0.0, 0.48], "state": {"kind": "ho", "n": 1}, "tag": 2},
        {"weight": 0.64, "state": {"kind": "ho", "n": 2}, "tag": 3}]},
      "steps": 2,
      "repeat_trials": 2000
    })");
    j["trials"] = trials;
    return j;
}

ScenarioConfig parse_ok(const json& j)
{
    auto r = parse_config(j);
    for (const auto& v : r.violations) ADD_FAILURE() << v.field << ": " << v.constraint;
    return r.config.value_or(ScenarioConfig{});
}

bool has_violation(const ParseResult& r, const std::string& field)
{
    for (const auto& v : r.violations) {
        if (v.field == field) return true;
    }
    return false;
}

std::string slurp(const std::filesystem::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::filesystem::path scratch(const std::string& name)
{
    auto p = std::filesystem::temp_directory_path() / ("rgame_test_" + name);
    std::filesystem::remove_all(p);
    return p;
}

}  // namespace

TEST(ParseConfig, MinimalFreeParticle)
{
    auto r = parse_config(json::parse(R"({"scenario": "free_particle"})"));
    ASSERT_TRUE(r.ok());
    EXPECT_EQ(r.config->scenario, ScenarioKind::free_particle);
    EXPECT_EQ(r.config->lattice, tapestry::LatticeConfig{});
    EXPECT_EQ(r.config->steps, 20);
}

TEST(ParseConfig, DiscretizationRuleNamed)
{
    auto j = free_particle_doc();
    j["lattice"]["dx"] = 0.3;
    auto r = parse_config(j);
    EXPECT_FALSE(r.ok());
    EXPECT_TRUE(has_violation(r, "lattice.dx"));
}

TEST(ParseConfig, NyquistNamed)
{
    auto j = free_particle_doc();
    j["lattice"]["band_limit"] = 40.0;
    auto r = parse_config(j);
    EXPECT_FALSE(r.ok());
    EXPECT_TRUE(has_violation(r, "lattice.dx"));
}

TEST(ParseConfig, UnknownFieldsRejected)
{
    auto j = free_particle_doc();
    j["foo"] = 1;
    j["lattice"]["bar"] = 2;
    auto r = parse_config(j);
    EXPECT_FALSE(r.ok());
    EXPECT_TRUE(has_violation(r, "foo"));
    EXPECT_TRUE(has_violation(r, "lattice.bar"));
}

TEST(ParseConfig, ConstraintViolations)
{
    auto j = free_particle_doc();
    j["scenario"] = "three_slit";
    EXPECT_TRUE(has_violation(parse_config(j), "scenario"));

    j = free_particle_doc();
    j["lattice"]["dt"] = -1.0;
    EXPECT_TRUE(has_violation(parse_config(j), "lattice.dt"));

    j = free_particle_doc();
    j["potential"] = {{"kind", "constant"}, {"value", 1.0}};
    EXPECT_TRUE(has_violation(parse_config(j), "potential.kind"));

    auto s = superposition_doc(0.7, 0.7);
    EXPECT_TRUE(has_violation(parse_config(s), "process.subprocesses"));

    auto b = born_doc(10);
    b.erase("seed");
    EXPECT_TRUE(has_violation(parse_config(b), "seed"));

    auto t = two_slit_doc("both", 10);
    t["geometry"]["b"] = 3.0;
    EXPECT_TRUE(has_violation(parse_config(t), "geometry"));
    t = two_slit_doc("both", 10);
    t["geometry"]["c"] = 5.0;
    EXPECT_TRUE(has_violation(parse_config(t), "geometry"));
    t = two_slit_doc("sideways", 10);
    EXPECT_TRUE(has_violation(parse_config(t), "geometry.open"));
    t = two_slit_doc("both", 10);
    t["geometry"]["a"] = 4.3;  // not a whole number of steps from the source
    EXPECT_TRUE(has_violation(parse_config(t), "geometry.a"));
}

TEST(ParseConfig, MalformedDocument)
{
    const auto dir = scratch("malformed");
    std::filesystem::create_directories(dir);
    std::ofstream(dir / "bad.json") << "{\"scenario\": ";
    auto r = parse_config_file((dir / "bad.json").string());
    EXPECT_FALSE(r.ok());
    EXPECT_TRUE(has_violation(r, "<document>"));
    EXPECT_TRUE(has_violation(parse_config_file((dir / "missing.json").string()), "<document>"));
    EXPECT_TRUE(has_violation(parse_config(json::array()), "<root>"));
}

TEST(States, OscillatorOrthonormal)
{
    for (int a = 0; a < 4; ++a) {
        for (int b = 0; b < 4; ++b) {
            const double s = oracle::simpson([&](double x) { return oscillator_state(x, a, 1.0) * oscillator_state(x, b, 1.0); }, -12, 12, 6000);
            EXPECT_NEAR(s, a == b ? 1.0 : 0.0, 1e-10) << a << "," << b;
        }
    }
    EXPECT_NEAR(std::norm(gaussian_packet(0.3, 1.0, 0.0, 2.0)), std::norm(oracle::free_gaussian(0.3, 0.0, 1.0, 0.0, 2.0)), 1e-15);
}

TEST(FreeParticle, ZeroStepsMatchesInitialCondition)
{
    auto cfg = parse_ok(free_particle_doc());
    cfg.steps = 0;
    const auto rep = run_free_particle(cfg);
    ASSERT_EQ(rep.steps.size(), 1u);
    EXPECT_LT(rep.final_step().density_error, 1e-10);
    EXPECT_LT(rep.final_step().amplitude_error, 1e-10);
}

TEST(FreeParticle, DefaultsWithinTolerance)
{
    const auto rep = run_free_particle(parse_ok(free_particle_doc()));
    ASSERT_EQ(rep.steps.size(), 21u);
    EXPECT_LT(rep.final_step().density_error, 0.02);
    EXPECT_LT(rep.norm_drift, 0.01);
    EXPECT_EQ(rep.invalid_tapestries, 0u);
}

TEST(FreeParticle, CoarseLatticeRefused)
{
    auto cfg = parse_ok(free_particle_doc());
    cfg.lattice.dx = 0.3;
    EXPECT_THROW(run_free_particle(cfg), rgame::domain_error);
}

TEST(Superposition, TwoPacketsWithinTolerance)
{
    const double r = 1.0 / std::sqrt(2.0);
    const auto rep = run_superposition(parse_ok(superposition_doc(r, json::array({0.0, r}))));
    EXPECT_LT(rep.final_step().amplitude_error, 0.03);
    EXPECT_TRUE(rep.single_tagged);
    ASSERT_EQ(rep.tags.size(), 2u);
    for (const auto& t : rep.tags) {
        EXPECT_LT(t.amplitude_error, 0.05) << t.tag;
        EXPECT_LE(t.max_fraction_deviation, 0.02) << t.tag;
    }
}

TEST(Superposition, ZeroWeightReducesToSingleRun)
{
    auto sup = superposition_doc(1.0, 0.0);
    sup["process"]["subprocesses"][0]["state"] = {{"kind", "gaussian"}, {"sigma", 1.0}};
    auto single = free_particle_doc();
    single["lattice"] = sup["lattice"];
    const auto a = scratch("reduce_sup"), b = scratch("reduce_free");
    auto cs = parse_ok(sup);
    cs.output.dir = a.string();
    auto cf = parse_ok(single);
    cf.output.dir = b.string();
    const auto rs = run_superposition(cs);
    const auto rf = run_free_particle(cf);
    EXPECT_EQ(slurp(a / "wave.csv"), slurp(b / "wave.csv"));
    EXPECT_FALSE(slurp(a / "wave.csv").empty());
    ASSERT_EQ(rs.steps.size(), rf.steps.size());
    EXPECT_EQ(rs.final_step().density_error, rf.final_step().density_error);
    EXPECT_TRUE(rs.tags.empty());
}

TEST(TwoSlit, PeakSpacingOfCosinePattern)
{
    std::vector<double> edges, p;
    for (int i = 0; i <= 96; ++i) edges.push_back(-24.0 + 0.5 * i);
    for (int i = 0; i < 96; ++i) {
        const double y = 0.5 * (edges[i] + edges[i + 1]);
        p.push_back(std::pow(std::cos(pi * y / 6.0), 2) + 0.01);
    }
    EXPECT_NEAR(peak_spacing(p, edges), 6.0, 0.3);
    EXPECT_EQ(peak_spacing({1.0, 1.0}, {0.0, 1.0, 2.0}), 0.0);
}

TEST(TwoSlit, BothOpenMatchesFresnelOracle)
{
    const auto rep = run_two_slit(parse_ok(two_slit_doc("both", 40000)));
    EXPECT_EQ(rep.steps_to_slit, 8);
    EXPECT_EQ(rep.steps_to_detector, 16);
    EXPECT_LT(rep.tv_engine_oracle, 0.02);
    EXPECT_LT(rep.tv_histogram_oracle, 0.05);
    EXPECT_GT(rep.fringe_contrast, 0.1);
    EXPECT_LT(rep.superposition_residual, 1e-12);
    ASSERT_GT(rep.fringe_spacing_oracle, 0.0);
    EXPECT_LT(std::abs(rep.fringe_spacing_histogram - rep.fringe_spacing_oracle) / rep.fringe_spacing_oracle, 0.10);
    EXPECT_EQ(rep.invalid_tapestries, 0u);
    std::int64_t total = 0;
    for (auto c : rep.counts) total += c;
    EXPECT_EQ(total + rep.uncoupled, 40000);
}

TEST(TwoSlit, SingleSlitHasNoFringes)
{
    const auto rep = run_two_slit(parse_ok(two_slit_doc("upper", 40000)));
    EXPECT_LT(rep.fringe_contrast, 0.05);
    EXPECT_LT(rep.tv_histogram_oracle, 0.05);
    EXPECT_TRUE(rep.lower_p.empty());
}

TEST(Born, FrequenciesAndRepeatability)
{
    const auto rep = run_born(parse_ok(born_doc(20000)));
    ASSERT_EQ(rep.expected.size(), 3u);
    EXPECT_NEAR(rep.expected[0], 0.36, 1e-12);
    EXPECT_NEAR(rep.expected[1], 0.2304, 1e-12);
    EXPECT_NEAR(rep.expected[2], 0.4096, 1e-12);
    EXPECT_LT(rep.tv, 0.02);
    EXPECT_EQ(rep.repeat_trials, 2000);
    EXPECT_EQ(rep.repeat_same, rep.repeat_trials);
    EXPECT_EQ(rep.invalid_tapestries, 0u);
}

TEST(Determinism, SameSeedSameBytes)
{
    const auto a = scratch("det_a"), b = scratch("det_b"), c = scratch("det_c");
    auto cfg = parse_ok(born_doc(3000));
    cfg.output.dir = a.string();
    run_born(cfg);
    cfg.output.dir = b.string();
    run_born(cfg);
    *cfg.seed += 1;
    cfg.output.dir = c.string();
    run_born(cfg);
    EXPECT_EQ(slurp(a / "trials.jsonl"), slurp(b / "trials.jsonl"));
    EXPECT_EQ(slurp(a / "report.json"), slurp(b / "report.json"));
    EXPECT_NE(slurp(a / "trials.jsonl"), slurp(c / "trials.jsonl"));
}

TEST(Demo, RecordsAndMatchFlags)
{
    const auto bell = run_demo("bell");
    EXPECT_TRUE(bell.match);
    EXPECT_EQ(bell.outputs["lhs"], "1/2");
    EXPECT_EQ(bell.outputs["rhs"], "3/2");
    EXPECT_TRUE(run_demo("ifs-sigma").match);
    EXPECT_EQ(run_demo("ifs-sigma").outputs[3], "(2/9,7/27,7/27,7/27)");
    EXPECT_TRUE(run_demo("ifs-phi").match);
    EXPECT_TRUE(run_demo("ifs-rho").match);
    EXPECT_TRUE(run_demo("qtp").match);
    EXPECT_TRUE(run_demo("region").match);
    // Printed constants the exact computation does not reproduce.
    const auto census = run_demo("census");
    EXPECT_FALSE(census.match);
    EXPECT_EQ(census.outputs["born_by"], json::array({1, 4, 22}));
    EXPECT_EQ(census.outputs["undominated_forms_day2"], 36);
    EXPECT_EQ(run_demo("lego").outputs["total"], "5/4");
    EXPECT_FALSE(run_demo("mixture").match);
    EXPECT_THROW(run_demo("nope"), rgame::domain_error);
    for (const auto& n : demo_names()) EXPECT_EQ(run_demo(n).to_json()["demo"], n);
}

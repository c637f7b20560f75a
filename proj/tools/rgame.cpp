// SPDX-License-Identifier: Apache-2.0
#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "rgame/interp.hpp"
#include "rgame/scenarios.hpp"
#include "rgame/tapestry.hpp"

namespace {

using nlohmann::json;
using namespace rgame;

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kInvalid = 2;
constexpr int kMismatch = 3;

int run_config(const std::string& path, const std::optional<std::uint64_t>& seed, const std::string& out, const std::string& format) {
    std::ifstream in(path);
    if (!in) {
        std::cerr << "cannot open " << path << "\n";
        return kInvalid;
    }
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        std::cerr << "<document>: malformed JSON: " << e.what() << "\n";
        return kInvalid;
    }
    if (j.is_object()) {
        if (seed) j["seed"] = *seed;
        if (!out.empty()) j["output"]["dir"] = out;
        if (!format.empty()) j["output"]["format"] = format;
    }
    const auto parsed = scenarios::parse_config(j);
    if (!parsed.ok()) {
        for (const auto& v : parsed.violations) std::cerr << v.field << ": " << v.constraint << "\n";
        return kInvalid;
    }
    try {
        std::cout << scenarios::run(*parsed.config).dump(2) << "\n";
    } catch (const rgame::domain_error& e) {
        std::cerr << e.what() << "\n";
        return kInvalid;
    }
    return kOk;
}

void print_demo(const scenarios::DemoRecord& r, bool table) {
    if (table) {
        std::cout << r.demo << "\n";
        std::cout << "  outputs:        " << r.outputs.dump() << "\n";
        std::cout << "  expected:       " << r.paper_expected.dump() << "\n";
        std::cout << "  match:          " << (r.match ? "yes" : "NO") << "\n";
    }
    std::cout << r.to_json().dump() << "\n";
}

int demo(const std::string& name, const std::string& format) {
    const bool table = format != "json";
    std::vector<std::string> names{name};
    if (name == "all") names = scenarios::demo_names();
    bool all_match = true;
    for (const auto& n : names) {
        const auto known = scenarios::demo_names();
        if (std::find(known.begin(), known.end(), n) == known.end()) {
            std::cerr << "unknown demo '" << n << "'; known:";
            for (const auto& k : known) std::cerr << " " << k;
            std::cerr << "\n";
            return kUsage;
        }
        const auto r = scenarios::run_demo(n);
        print_demo(r, table);
        all_match = all_match && r.match;
    }
    return all_match ? kOk : kMismatch;
}

int validate_file(const std::string& path, bool strict) {
    std::ifstream in(path);
    if (!in) {
        std::cerr << "cannot open " << path << "\n";
        return kInvalid;
    }
    try {
        const auto tap = tapestry::tapestry_from_json(json::parse(in));
        const auto found = tapestry::validate(tap, {strict});
        for (const auto& v : found) std::cout << tapestry::describe(v) << "\n";
        std::cout << (found.empty() ? "valid" : "invalid") << " (" << found.size() << " violations)\n";
        return found.empty() ? kOk : kInvalid;
    } catch (const std::exception& e) {
        std::cerr << "malformed tapestry: " << e.what() << "\n";
        return kInvalid;
    }
}

int census(int day) {
    static const std::size_t expected[] = {1, 4, 36};
    if (day < 0 || day > 2) {
        std::cerr << "census: day must be 0, 1 or 2\n";
        return kUsage;
    }
    const auto values = cgt::born_by(day);
    for (const auto& g : values) std::cout << cgt::to_string(g) << "\n";
    const std::size_t want = expected[day];
    std::cout << "day " << day << ": " << values.size() << " values (reference: " << want << ")";
    if (day == 2) std::cout << "; forms with undominated options: " << cgt::count_undominated_forms(2);
    std::cout << "\n";
    return values.size() == want ? kOk : kMismatch;
}

int interp_test() {
    bool ok = true;
    auto line = [&](bool pass, const std::string& what) {
        std::cout << (pass ? "ok   " : "FAIL ") << what << "\n";
        ok = ok && pass;
    };
    const auto gauss = [](double t) { return Complex(std::exp(-t * t)); };

    const auto s = interp::SampleSet1D::sample(gauss, 4.0, 64);
    double cardinal = 0.0;
    for (int n = -64; n <= 64; ++n) {
        cardinal = std::max(cardinal, std::abs(interp::wsk_reconstruct(s, n / 8.0) - s.values[static_cast<std::size_t>(n + 64)]));
    }
    line(cardinal <= 1e-14, "cardinal exactness " + format_double(cardinal) + " <= 1e-14");

    double sup = 0.0;
    for (int i = 0; i <= 800; ++i) {
        const double t = -4.0 + 8.0 * i / 800;
        sup = std::max(sup, std::abs(interp::wsk_reconstruct(s, t) - gauss(t)));
    }
    line(sup < 1e-6, "gaussian reconstruction W=4 N=64 sup error " + format_double(sup) + " < 1e-6");

    double previous = 1e300;
    bool monotone = true;
    for (int n : {8, 16, 32, 64}) {
        const double e = interp::empirical_truncation_error(gauss, 4.0, n, 0.3);
        monotone = monotone && e <= previous + 1e-15;
        previous = e;
    }
    line(monotone, "truncation error non-increasing in N");

    const double planck = interp::planck_sampling_error(5.391247e-44, 1.616255e-35, 1.0, 1.0);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.0e", planck);
    line(std::string(buf) == "2e-151", std::string("planck-lattice error magnitude ") + format_double(planck) + " (" + buf +
                                           ") vs reference 2e-151");
    return ok ? kOk : kMismatch;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Reality-game simulation toolkit"};
    app.require_subcommand(1);

    std::optional<std::uint64_t> seed;
    std::string out, format;
    auto* run = app.add_subcommand("run", "Run a scenario config");
    std::string config;
    run->add_option("config", config, "Scenario config (JSON)")->required();
    run->add_option("--seed", seed, "Override the config seed");
    run->add_option("--out", out, "Output directory");
    run->add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}));

    auto* demo_cmd = app.add_subcommand("demo", "Run a reference-constant demonstration");
    std::string demo_name;
    std::string demo_format = "table";
    demo_cmd->add_option("name", demo_name, "Demo name or 'all'")->required();
    demo_cmd->add_option("--format", demo_format, "table or json")->check(CLI::IsMember({"table", "json"}));

    auto* validate_cmd = app.add_subcommand("validate", "Check a tapestry JSON document against the axioms");
    std::string tap_path;
    bool strict = false;
    validate_cmd->add_option("tapestry", tap_path, "Tapestry JSON")->required();
    validate_cmd->add_flag("--strict", strict, "Check axiom 7 by its literal reading");

    auto* census_cmd = app.add_subcommand("census", "List the game values born by a day");
    int day = 2;
    census_cmd->add_option("--day", day, "Day (0, 1 or 2)");

    auto* interp_cmd = app.add_subcommand("interp-test", "Interpolation self-checks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    if (run->parsed()) return run_config(config, seed, out, format);
    if (demo_cmd->parsed()) return demo(demo_name, demo_format);
    if (validate_cmd->parsed()) return validate_file(tap_path, strict);
    if (census_cmd->parsed()) return census(day);
    if (interp_cmd->parsed()) return interp_test();
    return kUsage;
}

#include "imcflab/errors.hpp"
#include "imcflab/oracle.hpp"
#include "imcflab/report.hpp"
#include "imcflab/scenario.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <iostream>
#include <malloc.h>
#include <optional>

using namespace imcflab;

namespace {

int run_one(const std::filesystem::path& config_path, const std::optional<std::filesystem::path>& out)
{
    ScenarioConfig config;
    try {
        config = load_config(config_path);
    } catch (const std::exception& e) {
        std::cerr << "imcflab: " << e.what() << '\n';
        return 2;
    }
    if (out)
        config.output_dir = *out;
    const ScenarioResult result = run_scenario(config);
    try {
        write_artifacts(config, result);
    } catch (const std::exception& e) {
        std::cerr << "imcflab: " << e.what() << '\n';
        return 2;
    }
    std::cout << to_string(config.scenario) << " (" << config_path.filename().string() << "):";
    for (const auto& v : result.verdicts)
        std::cout << ' ' << v.name << '=' << (v.pass ? "PASS" : "FAIL");
    if (result.numerical_failure)
        std::cout << " numerical_failure: " << result.failure;
    std::cout << " -> exit " << result.exit_code() << '\n';
    return result.exit_code();
}

int run_suite(const std::filesystem::path& dir, const std::filesystem::path& out)
{
    std::vector<std::filesystem::path> configs;
    std::error_code ec;
    for (const auto& entry : std::filesystem::directory_iterator(dir, ec))
        if (entry.path().extension() == ".json")
            configs.push_back(entry.path());
    if (ec || configs.empty()) {
        std::cerr << "imcflab: no scenario configs found in " << dir.string() << '\n';
        return 2;
    }
    std::sort(configs.begin(), configs.end());
    int worst = 0;
    for (const auto& path : configs)
        worst = std::max(worst, run_one(path, out / path.stem()));
    return worst;
}

int print_oracle(int n, double r0, std::optional<double> d)
{
    const SphereClosedForms closed = sphere_closed_forms(n, r0);
    const FunctionalRecord& r = closed.record;
    nlohmann::ordered_json doc{{"n", n},
                               {"r0", r0},
                               {"closed_forms",
                                {{"area", r.area},
                                 {"A", r.A},
                                 {"H", closed.H},
                                 {"sigma2", closed.sigma2},
                                 {"I", r.I},
                                 {"J", r.J},
                                 {"L", r.L},
                                 {"calK", r.calK},
                                 {"Q", r.Q}}}};
    if (d) {
        const OffCenterOracle o = offcenter_oracle(n, r0, *d);
        doc["d"] = *d;
        doc["offcenter"] = {{"L", o.L},
                            {"L_center", o.L_center},
                            {"I", o.I},
                            {"rhs_naive", o.rhs_naive},
                            {"naive_gap", o.naive_gap},
                            {"theorem_gap", o.theorem_gap}};
    }
    write_json(std::cout, doc);
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    // Per-step fields are a few hundred kB; keep them off the mmap path so they are not re-faulted every stage.
    mallopt(M_MMAP_THRESHOLD, 256 << 20);
    mallopt(M_TRIM_THRESHOLD, 512 << 20);

    CLI::App app{"Inverse mean curvature flow lab for convex radial graphs in S^3"};
    app.require_subcommand(1);

    std::string config_path;
    std::optional<std::string> run_out;
    auto* run = app.add_subcommand("run", "Run one scenario config");
    run->add_option("config", config_path, "Scenario config (JSON)")->required();
    run->add_option("--out", run_out, "Override the output directory");

    std::string suite_dir = IMCFLAB_SCENARIO_DIR;
    std::string suite_out = "out";
    auto* suite = app.add_subcommand("suite", "Run every shipped scenario");
    suite->add_option("--dir", suite_dir, "Directory of scenario configs");
    suite->add_option("--out", suite_out, "Output root; each scenario writes to <out>/<config stem>");

    int n = 3;
    double r0 = 0.0;
    std::optional<double> d;
    auto* oracle = app.add_subcommand("oracle", "Closed forms and quadrature oracles");
    oracle->require_subcommand(1);
    auto* sphere = oracle->add_subcommand("sphere", "Geodesic sphere of radius r0, optionally centered at distance d");
    sphere->add_option("--n", n, "Ambient dimension")->required();
    sphere->add_option("--r0", r0, "Geodesic radius")->required();
    sphere->add_option("--d", d, "Center distance from the origin");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*run)
            return run_one(config_path, run_out ? std::optional<std::filesystem::path>(*run_out) : std::nullopt);
        if (*suite)
            return run_suite(suite_dir, suite_out);
        if (*sphere)
            return print_oracle(n, r0, d);
    } catch (const std::exception& e) {
        std::cerr << "imcflab: " << e.what() << '\n';
        return 2;
    }
    return 2;
}

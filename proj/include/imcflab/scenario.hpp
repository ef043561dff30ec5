#pragma once

#include "imcflab/flow.hpp"
#include "imcflab/shapes.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

namespace imcflab {

enum class ScenarioKind { CenteredSphere, OffCenterSphere, PerturbedConvex, BalanceDemo, ConjectureExplorer, IdentitySuite };

ScenarioKind parse_scenario_kind(const std::string& name);
std::string to_string(ScenarioKind kind);

struct Tolerances {
    double theorem = 1e-5;   ///< theorem gap, relative to I_x
    double equality = 1e-8;  ///< equality families (centered spheres)
    double brendle = 1e-8;   ///< relative to J
    double identity = 1e-6;  ///< integrated identities, relative to I
    double j_minus_l = 1e-8; ///< relative to J
    double evolution = 1e-3;
    double prop_4_1 = 1e-8;  ///< relative to calK
    double oracle = 1e-5;

    void validate() const;
};

struct ScenarioConfig {
    ScenarioKind scenario = ScenarioKind::CenteredSphere;
    int n = 3;
    int n_theta = 96;
    int n_phi = 192;

    // shape: geodesic sphere of radius r0 centered at distance d along axis, plus amplitude * pattern
    double r0 = std::numbers::pi / 6;
    double d = 0.0;
    Vec3 axis{0.0, 0.0, 1.0};
    double amplitude = 0.0;
    PerturbationPattern pattern = PerturbationPattern::CosTheta;

    FlowConfig flow;
    double balance_tol = 1e-3;
    int balance_max_iter = 5;
    std::optional<std::pair<int, int>> balance_flow_grid;

    double evolution_dt = 1e-4;
    int evolution_steps = 20;

    int identity_count = 10;
    std::uint64_t identity_seed = 1;
    int identity_degree = 3;
    double identity_amplitude = 0.04;

    Tolerances tolerances;
    std::filesystem::path output_dir = "out";
    bool plots = true;

    /// Throws ConfigError for missing scenario parameters or out-of-range values.
    void validate() const;
};

/// Strict parse: unknown keys and wrong types are ConfigError.
ScenarioConfig parse_config(const nlohmann::json& document);
ScenarioConfig load_config(const std::filesystem::path& path);

struct Verdict {
    std::string name;
    bool pass = false;
    nlohmann::ordered_json detail;
};

struct ScenarioResult {
    ScenarioKind kind = ScenarioKind::CenteredSphere;
    std::vector<Verdict> verdicts;
    nlohmann::ordered_json summary;
    std::vector<FunctionalRecord> trace;
    bool flow_ran = false;
    bool numerical_failure = false;
    std::string failure;

    /// 0 all verdicts pass, 1 a verdict failed, 2 numerical failure.
    int exit_code() const;
    const Verdict* find(const std::string& name) const;
};

/// Initial surface described by the shape fields of the config.
RadialGraph build_shape(const ScenarioConfig& config, const SphericalGrid& grid);

/// 26 unit directions of R^4: normalize(2, v) for the non-zero v in {-1, 0, 1}^3.
std::vector<Vec4> sample_directions();

/// Runs the scenario; numerical errors are caught and reported through the result.
ScenarioResult run_scenario(const ScenarioConfig& config);

/// trace.csv, summary.json and (when enabled) Q.svg, A.svg under config.output_dir.
void write_artifacts(const ScenarioConfig& config, const ScenarioResult& result);

} // namespace imcflab

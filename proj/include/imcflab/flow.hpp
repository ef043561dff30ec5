#pragma once

#include "imcflab/ambient.hpp"
#include "imcflab/functionals.hpp"
#include "imcflab/geometry.hpp"
#include "imcflab/interpolation.hpp"

#include <optional>
#include <string>
#include <vector>

namespace imcflab {

struct FlowConfig {
    double dt_safety = 0.5;    ///< fraction of the estimated explicit stability limit, in (0, 1]
    double dt_max = 1e-2;
    double stop_A = 0.98;      ///< stop once A >= stop_A, must lie in (0, 1)
    double stop_H_min = 0.05;
    double t_max = 10.0;
    int record_every = 1;
    bool store_graphs = false; ///< keep the graph of every record (needed by evolution_checks)
    int pole_modes_min = 2;    ///< longitude modes kept on the rows next to the poles
    MonotoneParams params{};

    void validate() const;
};

enum class StopReason { ReachedA, HFloor, TMax, ConvexityLost, NumericalFailure };
std::string to_string(StopReason reason);

struct FlowTrace {
    std::vector<FunctionalRecord> records{};
    std::vector<RadialGraph> graphs{};///< parallel to records when FlowConfig::store_graphs
    StopReason stop_reason = StopReason::TMax;
    double stop_time = 0.0;
    int record_every = 1;
    int steps = 0;
    std::string failure{};           ///< diagnostic for NumericalFailure
    RadialGraph final_graph;
};

/// Longitude-mode cutoff per row: max(pole_modes_min, ceil(n_phi/2 sin theta)), capped at n_phi/2.
std::vector<int> pole_filter_cutoffs(const SphericalGrid& grid, int pole_modes_min);

/// Radial speed v/H of the graph under the flow, with the pole filter applied.
/// Throws FlowSingularityError when H <= 0 somewhere.
std::vector<double> imcf_velocity(const ModelSpace& space, const RadialGraph& graph, std::span<const int> cutoff);

/// One classical RK4 step of du/dt = v/H. Throws FlowSingularityError (H <= 0),
/// NumericalError (non-finite values) or DomainError (dt <= 0).
RadialGraph imcf_step(const ModelSpace& space, const RadialGraph& graph, double dt, int pole_modes_min = 2);

/// Explicit step limit: 2.5 min(eta^2 H^2) / (lambda_theta + lambda_phi), where the lambdas bound
/// the discrete second-derivative operators (lambda_phi = 0 on zonal data, which stays zonal).
double stable_time_step(const SphericalGrid& grid, const GeometryFields& fields, bool zonal, int pole_modes_min);

/// Evolve until a stop criterion fires. Numerical failures are reported via stop_reason.
/// Throws DomainError when the initial graph is not strictly convex.
FlowTrace run_flow(const ModelSpace& space, const RadialGraph& graph, const FlowConfig& config);

struct EvolutionResiduals {
    double area = 0.0;   ///< max relative residual of d|Sigma|/dt vs -int F H
    double J = 0.0;      ///< ... of dJ/dt vs -n int F rho
    double I = 0.0;      ///< ... of dI/dt vs 2 int p H F - 2 int rho K F
    double max() const { return std::max({area, J, I}); }
    /// Largest violations (relative, positive = violated) of dI/dt <= (n-2)/(n-1) I - 2J and
    /// dJ/dt >= n/(n-1) J, both evaluated with the finite-difference derivatives.
    double I_inequality_violation = 0.0;
    double J_inequality_violation = 0.0;
    int samples = 0;
};

/// Central differences of the recorded functionals against the quadrature of the evolution
/// formulas at the middle record. Requires stride-1 recording with stored graphs (UsageError).
EvolutionResiduals evolution_checks(const ModelSpace& space, const FlowTrace& trace);

struct MonotonicityVerdict {
    bool pass = false;
    bool q_non_increasing = false;
    bool brendle_holds = false;
    double max_q_increase = 0.0;       ///< max over pairs of Q(k+1) - Q(k)
    double min_brendle_margin = 0.0;   ///< min over records of ((n-1) int rho/H - J - alpha) / J
    std::vector<double> q_values;
};

/// Q(t_{k+1}) <= Q(t_k) + 1e-6 max(1, |Q(t_k)|) for all consecutive records and the Brendle-type
/// bound at every record (relative tolerance brendle_tol). HypothesisViolation if some A > 1.
MonotonicityVerdict monotonicity_check(const FlowTrace& trace, const MonotoneParams& params,
                                       double brendle_tol = 1e-8);

/// Center of the hemisphere bounded by the equator that best fits a near-equatorial surface:
/// smallest-eigenvalue eigenvector of int q q^T dSigma, oriented toward int q dSigma.
/// Throws DegenerateError when the orientation is ambiguous.
Vec4 estimate_equator(const RadialGraph& graph);

/// Angle between two unit vectors of R^4.
double angle_between(const Vec4& a, const Vec4& b);

struct BalanceOptions {
    double tol = 1e-3;
    int max_iter = 5;
    FlowConfig flow{};
    /// Run the equator-finding flows on this grid (n_theta, n_phi) instead of the graph's own.
    std::optional<std::pair<int, int>> flow_grid;
};

struct BalanceResult {
    RadialGraph graph;
    Mat4 rotation = Mat4::Identity();
    int iterations = 0;
    std::vector<Vec4> estimates{};///< equator center found at each iteration
};

/// Rotate the surface until the point associated to it via the flow is the origin.
/// Each iteration flows the current candidate, estimates its equator center x and, unless
/// angle(x, e0) < tol, rotates the original graph by the accumulated rotation.
/// Throws NonConvergenceError after max_iter iterations or when a flow fails.
BalanceResult balance(const ModelSpace& space, const RadialGraph& graph, const BalanceOptions& options);

} // namespace imcflab

#include "imcflab/flow.hpp"

#include "imcflab/errors.hpp"
#include "imcflab/summation.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace imcflab {

void FlowConfig::validate() const
{
    if (!(dt_safety > 0.0 && dt_safety <= 1.0))
        throw ConfigError("flow: dt_safety must lie in (0, 1]");
    if (!(dt_max > 0.0))
        throw ConfigError("flow: dt_max must be positive");
    if (!(stop_A > 0.0 && stop_A < 1.0))
        throw ConfigError("flow: stop_A must lie in (0, 1)");
    if (!(stop_H_min >= 0.0))
        throw ConfigError("flow: stop_H_min must be non-negative");
    if (!(t_max > 0.0))
        throw ConfigError("flow: t_max must be positive");
    if (record_every < 1)
        throw ConfigError("flow: record_every must be >= 1");
    if (pole_modes_min < 1)
        throw ConfigError("flow: pole_modes_min must be >= 1");
}

std::string to_string(StopReason reason)
{
    switch (reason) {
    case StopReason::ReachedA: return "reached_A";
    case StopReason::HFloor: return "H_floor";
    case StopReason::TMax: return "t_max";
    case StopReason::ConvexityLost: return "convexity_lost";
    case StopReason::NumericalFailure: return "numerical_failure";
    }
    return "unknown";
}

std::vector<int> pole_filter_cutoffs(const SphericalGrid& grid, int pole_modes_min)
{
    const int half = grid.n_phi() / 2;
    std::vector<int> cutoff(grid.n_theta());
    for (int i = 0; i < grid.n_theta(); ++i) {
        const int resolved = static_cast<int>(std::ceil(half * grid.sin_theta()[i] - 1e-9));
        cutoff[i] = std::min(half, std::max(pole_modes_min, resolved));
    }
    return cutoff;
}

std::vector<double> imcf_velocity(const ModelSpace& space, const RadialGraph& graph, std::span<const int> cutoff)
{
    const SpeedFields s = compute_speed_fields(space, graph);
    std::vector<double> velocity(s.H.size());
    for (std::size_t k = 0; k < velocity.size(); ++k) {
        if (!(s.H[k] > 0.0))
            throw FlowSingularityError("mean curvature is not positive; the flow is undefined");
        velocity[k] = s.v[k] / s.H[k];
    }
    truncate_longitude_modes(graph.grid, velocity, cutoff);
    return velocity;
}

namespace {

RadialGraph advance(const RadialGraph& base, std::span<const double> rate, double step)
{
    RadialGraph out{base.grid, base.u};
    for (std::size_t k = 0; k < out.u.size(); ++k)
        out.u[k] += step * rate[k];
    return out;
}

std::vector<double> velocity_from_fields(const RadialGraph& graph, const GeometryFields& fields,
                                         std::span<const int> cutoff)
{
    std::vector<double> velocity(fields.H.size());
    for (std::size_t k = 0; k < velocity.size(); ++k) {
        if (!(fields.H[k] > 0.0))
            throw FlowSingularityError("mean curvature is not positive; the flow is undefined");
        velocity[k] = fields.v[k] / fields.H[k];
    }
    truncate_longitude_modes(graph.grid, velocity, cutoff);
    return velocity;
}

RadialGraph rk4_step(const ModelSpace& space, const RadialGraph& graph, double dt, std::span<const int> cutoff,
                     std::vector<double> k1)
{
    const auto k2 = imcf_velocity(space, advance(graph, k1, 0.5 * dt), cutoff);
    const auto k3 = imcf_velocity(space, advance(graph, k2, 0.5 * dt), cutoff);
    const auto k4 = imcf_velocity(space, advance(graph, k3, dt), cutoff);
    RadialGraph out{graph.grid, graph.u};
    for (std::size_t k = 0; k < out.u.size(); ++k) {
        out.u[k] += dt / 6.0 * ((k1[k] + k4[k]) + 2.0 * (k2[k] + k3[k]));
        if (!std::isfinite(out.u[k]))
            throw NumericalError("flow step produced a non-finite radius");
    }
    return out;
}

} // namespace

RadialGraph imcf_step(const ModelSpace& space, const RadialGraph& graph, double dt, int pole_modes_min)
{
    if (!(dt > 0.0))
        throw DomainError("imcf_step: dt must be positive");
    const auto cutoff = pole_filter_cutoffs(graph.grid, pole_modes_min);
    return rk4_step(space, graph, dt, cutoff, imcf_velocity(space, graph, cutoff));
}

double stable_time_step(const SphericalGrid& grid, const GeometryFields& fields, bool zonal, int pole_modes_min)
{
    const double h = grid.theta_step();
    // Largest symbol of the 4th-order second-difference stencil: 16 / (3 h^2).
    const double lambda_theta = 16.0 / (3.0 * h * h);
    double lambda_phi = 0.0;
    if (!zonal) {
        const auto cutoff = pole_filter_cutoffs(grid, pole_modes_min);
        for (int i = 0; i < grid.n_theta(); ++i) {
            const double s = grid.sin_theta()[i];
            lambda_phi = std::max(lambda_phi, cutoff[i] * cutoff[i] / (s * s));
        }
    }
    double min_coeff = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < fields.H.size(); ++k)
        min_coeff = std::min(min_coeff, fields.eta[k] * fields.eta[k] * fields.H[k] * fields.H[k]);
    // 2.5 sits just inside the real-axis stability interval of classical RK4 (~2.785).
    return 2.5 * min_coeff / (lambda_theta + lambda_phi);
}

FlowTrace run_flow(const ModelSpace& space, const RadialGraph& graph, const FlowConfig& config)
{
    config.validate();
    FlowTrace trace{.final_graph = graph};
    trace.record_every = config.record_every;
    const auto cutoff = pole_filter_cutoffs(graph.grid, config.pole_modes_min);

    RadialGraph current = graph;
    GeometryFields fields = compute_geometry(space, current);
    if (!(fields.min_lambda() > 0.0))
        throw DomainError("run_flow: the initial graph is not strictly convex");

    double t = 0.0;
    int step = 0;
    bool last_recorded = false;
    auto push_record = [&](const FunctionalRecord& rec) {
        trace.records.push_back(rec);
        if (config.store_graphs)
            trace.graphs.push_back(current);
    };

    for (;;) {
        const FunctionalRecord rec = functionals(space, current, fields, t, config.params);
        std::optional<StopReason> stop;
        if (!(rec.lambda_min > 0.0))
            stop = StopReason::ConvexityLost;
        else if (rec.A >= config.stop_A * (1.0 - 1e-9))
            stop = StopReason::ReachedA;
        else if (rec.min_H <= config.stop_H_min)
            stop = StopReason::HFloor;
        else if (t >= config.t_max * (1.0 - 1e-12))
            stop = StopReason::TMax;

        last_recorded = stop || step % config.record_every == 0;
        if (last_recorded)
            push_record(rec);
        if (stop) {
            trace.stop_reason = *stop;
            break;
        }

        double dt = config.dt_safety *
                    std::min(stable_time_step(current.grid, fields, is_zonal(current.grid, current.u),
                                              config.pole_modes_min),
                             config.dt_max);
        // A grows like e^t, so the remaining time to stop_A is known in advance.
        dt = std::min(dt, std::log(config.stop_A / rec.A));
        dt = std::min(dt, config.t_max - t);

        try {
            RadialGraph next = rk4_step(space, current, dt, cutoff, velocity_from_fields(current, fields, cutoff));
            GeometryFields next_fields = compute_geometry(space, next);
            current = std::move(next);
            fields = std::move(next_fields);
        } catch (const std::exception& e) {
            if (!last_recorded)
                push_record(rec);
            trace.stop_reason = StopReason::NumericalFailure;
            trace.failure = e.what();
            break;
        }
        t += dt;
        ++step;
    }
    trace.steps = step;
    trace.stop_time = t;
    trace.final_graph = std::move(current);
    return trace;
}

EvolutionResiduals evolution_checks(const ModelSpace& space, const FlowTrace& trace)
{
    if (trace.record_every != 1)
        throw UsageError("evolution_checks needs stride-1 recording");
    if (trace.graphs.size() != trace.records.size())
        throw UsageError("evolution_checks needs the graph of every record");
    if (trace.records.size() < 3)
        throw UsageError("evolution_checks needs at least three records");

    const int n = space.dimension();
    EvolutionResiduals res;
    auto relative = [](double fd, double exact) { return std::abs(fd - exact) / std::max(std::abs(exact), 1e-300); };

    for (std::size_t k = 1; k + 1 < trace.records.size(); ++k) {
        const auto& prev = trace.records[k - 1];
        const auto& mid = trace.records[k];
        const auto& next = trace.records[k + 1];
        const double h1 = mid.t - prev.t;
        const double h2 = next.t - mid.t;
        // second-order central difference on a non-uniform stencil
        auto derivative = [&](double fm, double f0, double fp) {
            return -h2 / (h1 * (h1 + h2)) * fm + (h2 - h1) / (h1 * h2) * f0 + h1 / (h2 * (h1 + h2)) * fp;
        };
        const double d_area = derivative(prev.area, mid.area, next.area);
        const double d_J = derivative(prev.J, mid.J, next.J);
        const double d_I = derivative(prev.I, mid.I, next.I);

        const GeometryFields f = compute_geometry(space, trace.graphs[k]);
        const std::size_t count = f.H.size();
        std::vector<double> fh(count), f_rho(count), p_h_f(count), rho_k_f(count);
        for (std::size_t m = 0; m < count; ++m) {
            const double speed = -1.0 / f.H[m]; // F = -1/H
            fh[m] = speed * f.H[m];
            f_rho[m] = speed * f.rho[m];
            p_h_f[m] = f.p[m] * f.H[m] * speed;
            rho_k_f[m] = f.rho[m] * f.sigma2[m] * speed;
        }
        const double rate_area = -f.integrate(fh);
        const double rate_J = -n * f.integrate(f_rho);
        const double rate_I = 2.0 * f.integrate(p_h_f) - 2.0 * f.integrate(rho_k_f);

        res.area = std::max(res.area, relative(d_area, rate_area));
        res.J = std::max(res.J, relative(d_J, rate_J));
        res.I = std::max(res.I, relative(d_I, rate_I));

        const double I_bound = (n - 2.0) / (n - 1.0) * mid.I - 2.0 * mid.J;
        res.I_inequality_violation =
            std::max(res.I_inequality_violation, (d_I - I_bound) / std::max(std::abs(mid.I), std::abs(mid.J)));
        const double J_bound = n / (n - 1.0) * mid.J;
        res.J_inequality_violation = std::max(res.J_inequality_violation, (J_bound - d_J) / std::abs(mid.J));
        ++res.samples;
    }
    return res;
}

MonotonicityVerdict monotonicity_check(const FlowTrace& trace, const MonotoneParams& params, double brendle_tol)
{
    MonotonicityVerdict verdict;
    for (const auto& rec : trace.records)
        if (rec.A > 1.0)
            throw HypothesisViolation("monotonicity_check: a record has A > 1");

    verdict.q_non_increasing = true;
    verdict.brendle_holds = true;
    verdict.max_q_increase = -std::numeric_limits<double>::infinity();
    verdict.min_brendle_margin = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < trace.records.size(); ++k) {
        const auto& rec = trace.records[k];
        verdict.q_values.push_back(q_quantity(rec, params));
        const double margin = ((rec.n - 1) * rec.rho_over_H - rec.J - params.alpha) / std::abs(rec.J);
        verdict.min_brendle_margin = std::min(verdict.min_brendle_margin, margin);
        if (margin < -brendle_tol)
            verdict.brendle_holds = false;
        if (k > 0) {
            const double q_prev = verdict.q_values[k - 1];
            const double increase = verdict.q_values[k] - q_prev;
            verdict.max_q_increase = std::max(verdict.max_q_increase, increase);
            if (increase > 1e-6 * std::max(1.0, std::abs(q_prev)))
                verdict.q_non_increasing = false;
        }
    }
    verdict.pass = verdict.q_non_increasing && verdict.brendle_holds;
    return verdict;
}

Vec4 estimate_equator(const RadialGraph& graph)
{
    const GeometryFields f = compute_geometry(ModelSpace::spherical(3), graph);
    const SphericalGrid& grid = graph.grid;
    // 4 first moments and 10 second moments, each reduced pairwise
    std::array<std::vector<double>, 14> terms;
    for (auto& t : terms)
        t.resize(grid.size());
    for (int i = 0; i < grid.n_theta(); ++i)
        for (int j = 0; j < grid.n_phi(); ++j) {
            const std::size_t k = grid.index(i, j);
            const Vec4 q = embed_node(graph, i, j);
            const double w = f.area_weight[k];
            int slot = 0;
            for (int a = 0; a < 4; ++a)
                terms[slot++][k] = q[a] * w;
            for (int a = 0; a < 4; ++a)
                for (int b = a; b < 4; ++b)
                    terms[slot++][k] = q[a] * q[b] * w;
        }
    Vec4 centroid;
    Mat4 second;
    int slot = 0;
    for (int a = 0; a < 4; ++a)
        centroid[a] = pairwise_sum(terms[slot++]);
    for (int a = 0; a < 4; ++a)
        for (int b = a; b < 4; ++b) {
            second(a, b) = pairwise_sum(terms[slot++]);
            second(b, a) = second(a, b);
        }

    const Eigen::SelfAdjointEigenSolver<Mat4> solver(second);
    Vec4 x = solver.eigenvectors().col(0);
    const double alignment = x.dot(centroid);
    if (std::abs(alignment) <= 1e-12 * centroid.norm())
        throw DegenerateError("estimate_equator: centroid is orthogonal to the fitted pole");
    if (alignment < 0.0)
        x = -x;
    return x.normalized();
}

double angle_between(const Vec4& a, const Vec4& b)
{
    // atan2 form stays accurate for tiny angles
    const double cross = (a - a.dot(b) * b).norm();
    return std::atan2(cross, a.dot(b));
}

BalanceResult balance(const ModelSpace& space, const RadialGraph& graph, const BalanceOptions& options)
{
    if (options.max_iter < 1)
        throw ConfigError("balance: max_iter must be >= 1");
    const std::optional<SphericalGrid> flow_grid =
        options.flow_grid ? std::optional<SphericalGrid>(build_grid(options.flow_grid->first, options.flow_grid->second))
                          : std::nullopt;

    BalanceResult result{.graph = graph};
    const Vec4 e0 = Vec4::UnitX();
    for (int iter = 1; iter <= options.max_iter; ++iter) {
        const RadialGraph working = flow_grid ? resample(result.graph, *flow_grid) : result.graph;
        const FlowTrace trace = run_flow(space, working, options.flow);
        if (trace.stop_reason == StopReason::ConvexityLost || trace.stop_reason == StopReason::NumericalFailure)
            throw NonConvergenceError("balance: flow stopped with " + to_string(trace.stop_reason));
        const Vec4 x = estimate_equator(trace.final_graph);
        result.estimates.push_back(x);
        result.iterations = iter;
        if (angle_between(x, e0) < options.tol)
            return result;
        result.rotation = rotation_to_pole(x) * result.rotation;
        result.graph = rotate_graph(graph, result.rotation);
    }
    throw NonConvergenceError("balance: no convergence within max_iter iterations");
}

} // namespace imcflab

#include "imcflab/errors.hpp"
#include "imcflab/flow.hpp"
#include "imcflab/interpolation.hpp"
#include "imcflab/shapes.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

using namespace imcflab;
using doctest::Approx;

namespace {

constexpr double pi = std::numbers::pi;

double spread(const std::vector<double>& u)
{
    const auto [lo, hi] = std::minmax_element(u.begin(), u.end());
    return *hi - *lo;
}

double max_deviation_from_mean(const std::vector<double>& u)
{
    double mean = 0.0;
    for (double x : u)
        mean += x;
    mean /= static_cast<double>(u.size());
    double worst = 0.0;
    for (double x : u)
        worst = std::max(worst, std::abs(x - mean));
    return worst;
}

Vec4 center_direction(double d, const Vec3& a)
{
    return Vec4(std::cos(d), std::sin(d) * a[0], std::sin(d) * a[1], std::sin(d) * a[2]);
}

FlowConfig probe_config(double dt, int steps)
{
    FlowConfig config;
    config.dt_safety = 1.0;
    config.dt_max = dt;
    config.t_max = dt * steps;
    config.store_graphs = true;
    return config;
}

} // namespace

TEST_SUITE("flow") {

TEST_CASE("single step of a centered sphere")
{
    const auto space = ModelSpace::spherical(3);
    const auto grid = build_grid(32, 64);
    const auto next = imcf_step(space, constant_graph(grid, pi / 6), 1e-3);
    // du/dt = tan(u) / (n - 1), solved by sin u(t) = sin u0 e^{t/2}
    const double first_order = 1e-3 * std::tan(pi / 6) / 2.0;
    CHECK(first_order == Approx(2.886751e-4).epsilon(1e-6));
    const double exact = std::asin(0.5 * std::exp(0.5e-3)) - pi / 6;
    for (double u : next.u) {
        CHECK(std::abs(u - pi / 6 - exact) < 1e-10);
        // the dt^2 term is dt^2/2 * sec^2(u) tan(u) / 4 = 9.6e-8
        CHECK(std::abs(u - pi / 6 - first_order) < 1e-7);
    }
}

TEST_CASE("constant graphs stay constant and follow the ODE")
{
    const auto space = ModelSpace::spherical(3);
    const auto grid = build_grid(32, 64);
    auto g = constant_graph(grid, 0.4);
    for (int k = 0; k < 10; ++k)
        g = imcf_step(space, g, 1e-2);
    CHECK(spread(g.u) == 0.0);
    // sin(u(t)) = sin(u0) e^{t/2}
    CHECK(g.u[0] == Approx(std::asin(std::sin(0.4) * std::exp(0.05))).epsilon(1e-10));
}

TEST_CASE("euclidean round spheres grow exponentially")
{
    const auto space = ModelSpace::euclidean(3);
    const auto grid = build_grid(16, 32);
    auto g = constant_graph(grid, 1.3);
    const auto v = imcf_velocity(space, g, pole_filter_cutoffs(grid, 2));
    for (double x : v)
        CHECK(x == Approx(1.3 / 2.0).epsilon(1e-12));
    for (int k = 0; k < 100; ++k)
        g = imcf_step(space, g, 1e-2);
    CHECK(g.u[5] == Approx(1.3 * std::exp(0.5)).epsilon(1e-10));
}

TEST_CASE("step errors")
{
    const auto space = ModelSpace::spherical(3);
    const auto grid = build_grid(16, 32);
    CHECK_THROWS_AS(imcf_step(space, constant_graph(grid, 0.5), 0.0), DomainError);
    CHECK_THROWS_AS(imcf_step(space, constant_graph(grid, 0.5), -1e-3), DomainError);
    // beyond the equator the mean curvature is negative
    CHECK_THROWS_AS(imcf_step(space, constant_graph(grid, 2.0), 1e-3), FlowSingularityError);
    CHECK_THROWS_AS(imcf_velocity(space, constant_graph(grid, 2.0), pole_filter_cutoffs(grid, 2)),
                    FlowSingularityError);
    auto bad = constant_graph(grid, 0.5);
    bad.u[40] = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(imcf_step(space, bad, 1e-3), NumericalError);
}

TEST_CASE("pole filter cutoffs")
{
    const auto grid = build_grid(32, 64);
    const auto c = pole_filter_cutoffs(grid, 2);
    REQUIRE(c.size() == 32);
    CHECK(c.front() == 2);
    CHECK(c.back() == 2);
    CHECK(c[16] == 32);
    for (int i = 0; i < 16; ++i)
        CHECK(c[i] == c[31 - i]);
}

TEST_CASE("flow config validation")
{
    FlowConfig c;
    CHECK_NOTHROW(c.validate());
    auto bad = c;
    bad.dt_safety = 0.0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = c;
    bad.stop_A = 1.0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = c;
    bad.record_every = 0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = c;
    bad.t_max = -1.0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    CHECK(to_string(StopReason::ReachedA) == "reached_A");
}

TEST_CASE("centered sphere flow: stop time and exponential area law")
{
    const auto space = ModelSpace::spherical(3);
    const auto grid = build_grid(16, 32);
    const auto trace = run_flow(space, constant_graph(grid, pi / 6), FlowConfig{});
    CHECK(trace.stop_reason == StopReason::ReachedA);
    // A(t) = A0 e^t
    CHECK(trace.stop_time == Approx(std::log(0.98 / 0.25)).epsilon(1e-3));
    CHECK(std::abs(trace.stop_time - std::log(0.98 / 0.25)) <= 1e-3);
    double worst = 0.0;
    for (const auto& r : trace.records)
        worst = std::max(worst, std::abs(r.A / (0.25 * std::exp(r.t)) - 1.0));
    CHECK(worst <= 1e-4);
    // I = 8 pi cos^2 u sin u peaks at sin u = 1/sqrt(3) and then decreases toward 0
    std::size_t peak = 0;
    for (std::size_t k = 1; k < trace.records.size(); ++k) {
        CHECK(trace.records[k].min_H < trace.records[k - 1].min_H);
        CHECK(trace.records[k].A > trace.records[k - 1].A);
        if (trace.records[k].I > trace.records[peak].I)
            peak = k;
    }
    CHECK(trace.records[peak].I == Approx(16.0 * pi / (3.0 * std::sqrt(3.0))).epsilon(1e-5));
    for (std::size_t k = peak + 1; k < trace.records.size(); ++k)
        CHECK(trace.records[k].I < trace.records[k - 1].I);
    CHECK(trace.records.back().I < 0.1 * trace.records.front().I);
    CHECK(trace.records.back().A >= 0.98 * (1.0 - 1e-9));
}

TEST_CASE("flow stop criteria")
{
    const auto space = ModelSpace::spherical(3);
    const auto grid = build_grid(16, 32);
    FlowConfig c;
    c.t_max = 0.1;
    CHECK(run_flow(space, constant_graph(grid, pi / 6), c).stop_reason == StopReason::TMax);
    c = FlowConfig{};
    c.stop_H_min = 1.0;
    const auto h = run_flow(space, constant_graph(grid, pi / 6), c);
    CHECK(h.stop_reason == StopReason::HFloor);
    CHECK(h.records.back().min_H <= 1.0);
    c = FlowConfig{};
    c.record_every = 10;
    const auto sparse = run_flow(space, constant_graph(grid, pi / 6), c);
    CHECK(sparse.records.size() < run_flow(space, constant_graph(grid, pi / 6), FlowConfig{}).records.size());
    CHECK_THROWS_AS(run_flow(space, perturbed_graph(grid, pi / 4, 0.4, PerturbationPattern::CosTheta), FlowConfig{}),
                    DomainError);
}

TEST_CASE("evolution identities")
{
    const auto space = ModelSpace::spherical(3);
    const auto grid = build_grid(32, 64);
    {
        const auto trace = run_flow(space, constant_graph(grid, pi / 6), probe_config(1e-4, 20));
        const auto res = evolution_checks(space, trace);
        CHECK(res.samples > 0);
        CHECK(res.area <= 1e-3);
        CHECK(res.J <= 1e-3);
        CHECK(res.I <= 1e-3);
        CHECK(res.I_inequality_violation <= 1e-3);
        CHECK(res.J_inequality_violation <= 1e-3);
    }
    {
        const auto g = perturbed_graph(grid, pi / 4, 0.05, PerturbationPattern::TiltedBump);
        const auto trace = run_flow(space, g, probe_config(1e-4, 20));
        CHECK(evolution_checks(space, trace).max() <= 5e-3);
        // -int F H with F = -1/H is exactly the area
        const auto f = compute_geometry(space, g);
        std::vector<double> ones(grid.size());
        for (std::size_t k = 0; k < grid.size(); ++k)
            ones[k] = f.H[k] / f.H[k];
        CHECK((f.area() - f.integrate(ones)) / f.area() == Approx(0.0));
    }
    auto no_graphs = probe_config(1e-4, 20);
    no_graphs.store_graphs = false;
    CHECK_THROWS_AS(evolution_checks(space, run_flow(space, constant_graph(grid, pi / 6), no_graphs)), UsageError);
    auto strided = probe_config(1e-4, 20);
    strided.record_every = 2;
    CHECK_THROWS_AS(evolution_checks(space, run_flow(space, constant_graph(grid, pi / 6), strided)), UsageError);
}

TEST_CASE("monotonicity of Q and the Brendle-type bound")
{
    const auto space = ModelSpace::spherical(3);
    const auto grid = build_grid(32, 64);
    {
        const auto trace = run_flow(space, constant_graph(grid, pi / 6), FlowConfig{});
        const auto v = monotonicity_check(trace, {});
        CHECK(v.pass);
        for (double q : v.q_values)
            CHECK(std::abs(q) <= 1e-8);
        CHECK(std::abs(v.min_brendle_margin) <= 1e-8);
        const auto& r0 = trace.records.front();
        CHECK(2.0 * r0.rho_over_H == Approx(pi / 2).epsilon(1e-12));
        CHECK(r0.J == Approx(pi / 2).epsilon(1e-12));
    }
    {
        // the Brendle-type margin is small for near-umbilic surfaces, so resolve it on a finer grid
        const auto fine = build_grid(64, 128);
        const auto trace = run_flow(space, perturbed_graph(fine, pi / 4, 0.05, PerturbationPattern::CosTheta), FlowConfig{});
        const auto v = monotonicity_check(trace, {});
        INFO("min Brendle margin ", v.min_brendle_margin);
        CHECK(v.pass);
        CHECK(v.q_non_increasing);
        CHECK(v.brendle_holds);
        CHECK(v.q_values.front() > 0.0);
        CHECK(v.q_values.back() < v.q_values.front());
    }
    FlowTrace fake{.final_graph = constant_graph(grid, 0.5)};
    FunctionalRecord r;
    r.A = 0.5;
    r.J = 1.0;
    fake.records.push_back(r);
    r.A = 1.01;
    fake.records.push_back(r);
    CHECK_THROWS_AS(monotonicity_check(fake, {}), HypothesisViolation);
}

TEST_CASE("equator estimate")
{
    const auto space = ModelSpace::spherical(3);
    const auto grid = build_grid(32, 64);
    {
        const auto trace = run_flow(space, constant_graph(grid, pi / 6), FlowConfig{});
        const Vec4 x = estimate_equator(trace.final_graph);
        CHECK(angle_between(x, Vec4(1, 0, 0, 0)) < 1e-6);
    }
    {
        const auto trace = run_flow(space, offcenter_sphere_graph(grid, pi / 6, 0.25, {0, 0, 1}), FlowConfig{});
        const Vec4 x = estimate_equator(trace.final_graph);
        CHECK(angle_between(x, center_direction(0.25, {0, 0, 1})) < 1e-3);
    }
    {
        const auto trace = run_flow(space, perturbed_graph(grid, pi / 4, 0.05, PerturbationPattern::CosTheta), FlowConfig{});
        CHECK(estimate_equator(trace.final_graph).norm() == Approx(1.0).epsilon(1e-14));
        CHECK(trace.records.back().A >= 0.98 * (1.0 - 1e-9));
    }
    // a small centered sphere: the fitted pole is tangential and the centroid is e0
    CHECK_THROWS_AS(estimate_equator(constant_graph(grid, pi / 6)), DegenerateError);
    CHECK(angle_between(Vec4(1, 0, 0, 0), Vec4(0, 1, 0, 0)) == Approx(pi / 2));
}

TEST_CASE("rotation to the pole")
{
    const Vec4 x = Vec4(0.3, -0.5, 0.7, 0.2).normalized();
    const Mat4 R = rotation_to_pole(x);
    CHECK((R.transpose() * R - Mat4::Identity()).norm() < 1e-14);
    CHECK(R.determinant() == Approx(1.0));
    CHECK((R * x - Vec4(1, 0, 0, 0)).norm() < 1e-14);
    CHECK((rotation_to_pole(Vec4(1, 0, 0, 0)) - Mat4::Identity()).norm() == 0.0);
    CHECK_THROWS_AS(rotation_to_pole(Vec4(-1, 0, 0, 0)), DegenerateError);
    CHECK_THROWS_AS(rotation_to_pole(Vec4(1, 1, 0, 0)), DomainError);
}

TEST_CASE("rotating an off-center sphere recenters it")
{
    const auto grid = build_grid(32, 64);
    const Vec3 axis{std::sin(0.7), 0.0, std::cos(0.7)};
    const auto g = offcenter_sphere_graph(grid, pi / 6, 0.25, axis);
    const auto centered = rotate_graph(g, rotation_to_pole(center_direction(0.25, axis)));
    CHECK(max_deviation_from_mean(centered.u) < 1e-9);
    CHECK(centered.u[0] == Approx(pi / 6).epsilon(1e-9));
    // moving the origin outside the ball
    CHECK_THROWS_AS(rotate_graph(g, rotation_to_pole(center_direction(1.0, axis))), NotRadialGraphError);
}

TEST_CASE("balance")
{
    const auto space = ModelSpace::spherical(3);
    const auto grid = build_grid(32, 64);
    {
        const auto b = balance(space, constant_graph(grid, pi / 6), BalanceOptions{});
        CHECK(b.iterations == 1);
        CHECK((b.rotation - Mat4::Identity()).norm() == 0.0);
    }
    {
        const Vec3 axis{std::sin(0.7), 0.0, std::cos(0.7)};
        BalanceOptions opt;
        opt.tol = 1e-5;
        const auto b = balance(space, offcenter_sphere_graph(grid, pi / 6, 0.25, axis), opt);
        CHECK(b.iterations <= 5);
        CHECK(max_deviation_from_mean(b.graph.u) <= 1e-4);
        CHECK((b.rotation.transpose() * b.rotation - Mat4::Identity()).norm() < 1e-12);
    }
    {
        const auto b = balance(space, perturbed_graph(grid, pi / 4, 0.05, PerturbationPattern::CosTheta), BalanceOptions{});
        CHECK(b.iterations <= 5);
    }
    {
        BalanceOptions opt;
        opt.tol = 1e-14;
        opt.max_iter = 1;
        CHECK_THROWS_AS(balance(space, offcenter_sphere_graph(grid, pi / 6, 0.25, {0, 0, 1}), opt), NonConvergenceError);
    }
}

}

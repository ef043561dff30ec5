#include "imcflab/errors.hpp"
#include "imcflab/functionals.hpp"
#include "imcflab/geometry.hpp"
#include "imcflab/scenario.hpp"
#include "imcflab/shapes.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace imcflab;
using doctest::Approx;

namespace {

constexpr double pi = std::numbers::pi;

struct Evaluated {
    RadialGraph graph;
    GeometryFields fields;
    FunctionalRecord record;
};

Evaluated evaluate(RadialGraph graph, const MonotoneParams& params = {})
{
    const auto space = ModelSpace::spherical(3);
    auto fields = compute_geometry(space, graph);
    auto record = functionals(space, graph, fields, 0.0, params);
    return {std::move(graph), std::move(fields), record};
}

Vec4 center_direction(double d, const Vec3& a)
{
    return Vec4(std::cos(d), std::sin(d) * a[0], std::sin(d) * a[1], std::sin(d) * a[2]);
}

const Vec3 tilted_axis{std::sin(0.7), 0.0, std::cos(0.7)};

} // namespace

TEST_SUITE("functionals") {

TEST_CASE("unit sphere areas")
{
    CHECK(unit_sphere_area(3) == Approx(4.0 * pi));
    CHECK(unit_sphere_area(4) == Approx(2.0 * pi * pi));
    CHECK(unit_sphere_area(5) == Approx(8.0 * pi * pi / 3.0));
}

TEST_CASE("closed forms of centered spheres")
{
    const auto grid = build_grid(32, 64);
    {
        const auto e = evaluate(constant_graph(grid, pi / 6));
        CHECK(e.record.area == Approx(pi).epsilon(1e-12));
        CHECK(e.record.A == Approx(0.25).epsilon(1e-12));
        CHECK(e.record.I == Approx(3.0 * pi).epsilon(1e-12));
        CHECK(e.record.I == Approx(9.424778).epsilon(1e-7));
        CHECK(e.record.J == Approx(pi / 2).epsilon(1e-12));
        CHECK(e.record.L == Approx(pi / 2).epsilon(1e-12));
        CHECK(e.record.calK == Approx(pi / 2).epsilon(1e-12));
        CHECK(std::abs(e.record.j_minus_l) < 1e-12);
        CHECK(std::abs(e.record.umbilicity) < 1e-12);
    }
    {
        const auto e = evaluate(constant_graph(grid, pi / 4));
        CHECK(e.record.I == Approx(8.885766).epsilon(1e-7));
        CHECK(e.record.I == Approx(2.0 * std::sqrt(2.0) * pi).epsilon(1e-12));
        CHECK(e.record.J == Approx(4.442883).epsilon(1e-7));
        CHECK(e.record.L == Approx(std::sqrt(2.0) * pi).epsilon(1e-12));
        CHECK(e.record.calK == Approx(std::sqrt(2.0) * pi).epsilon(1e-12));
    }
}

TEST_CASE("off-center sphere has L below calK and J equal to L")
{
    const auto grid = build_grid(96, 192);
    const auto e = evaluate(offcenter_sphere_graph(grid, pi / 6, 0.25, {0, 0, 1}));
    CHECK(e.record.L < 1.570796);
    CHECK(e.record.L < e.record.calK);
    CHECK(std::abs(e.record.j_minus_l) <= 1e-8 * e.record.J);
    CHECK(e.record.calK == Approx(pi / 2).epsilon(1e-7));
}

TEST_CASE("rho_x_volume")
{
    const auto grid = build_grid(32, 64);
    const auto centered = constant_graph(grid, pi / 6);
    CHECK(rho_x_volume(centered, Vec4(1, 0, 0, 0)) == Approx(pi / 2).epsilon(1e-9));
    CHECK(rho_x_volume(centered, Vec4(-1, 0, 0, 0)) == Approx(-pi / 2).epsilon(1e-9));
    CHECK(std::abs(rho_x_volume(centered, Vec4(0, 1, 0, 0))) < 1e-12);
    CHECK_THROWS_AS(rho_x_volume(centered, Vec4(1, 1, 0, 0)), DomainError);
    CHECK_THROWS_AS(rho_x_volume(centered, Vec4(1, 0, 0, 0), 63), ConfigError);

    const auto big = build_grid(96, 192);
    const auto off = offcenter_sphere_graph(big, pi / 6, 0.25, {0, 0, 1});
    CHECK(rho_x_volume(off, center_direction(0.25, {0, 0, 1})) == Approx(pi / 2).epsilon(1e-6));
    // L_x at x = origin agrees with the exact radial antiderivative used for L
    const auto e = evaluate(off);
    CHECK(rho_x_volume(off, Vec4(1, 0, 0, 0)) == Approx(e.record.L).epsilon(1e-9));
}

TEST_CASE("moment vector")
{
    const auto grid = build_grid(32, 64);
    const auto c = evaluate(constant_graph(grid, pi / 6));
    const Vec4 m = moment_vector(c.graph, c.fields);
    CHECK(m[0] == Approx(3.0 * pi).epsilon(1e-12));
    CHECK(std::abs(m[1]) < 1e-12);
    CHECK(std::abs(m[2]) < 1e-12);
    CHECK(std::abs(m[3]) < 1e-12);
    CHECK(m.norm() == Approx(9.424778).epsilon(1e-7));

    const auto big = build_grid(96, 192);
    for (double d : {0.1, 0.25, 0.4}) {
        const auto e = evaluate(offcenter_sphere_graph(big, pi / 6, d, {0, 0, 1}));
        const Vec4 mo = moment_vector(e.graph, e.fields);
        CHECK(mo.norm() == Approx(3.0 * pi).epsilon(1e-6));
        CHECK(mo.norm() >= e.record.I);
        // the maximizer is the center of the sphere
        CHECK((mo.normalized() - center_direction(d, {0, 0, 1})).norm() < 1e-6);
    }
}

TEST_CASE("monotone quantity")
{
    const auto grid = build_grid(32, 64);
    for (double r0 : {0.3, pi / 6, pi / 4, 1.2}) {
        const auto e = evaluate(constant_graph(grid, r0));
        CHECK(std::abs(q_quantity(e.record, {})) < 1e-10);
    }
    FunctionalRecord r;
    r.n = 3;
    r.I = 8.885766;
    r.J = 4.442883;
    r.A = 0.5;
    CHECK(std::abs(q_quantity(r, {})) < 1e-5);
    const auto p = MonotoneParams::from_alpha(3, 1.0);
    CHECK(p.beta == Approx(2.0));
    CHECK(p.gamma == Approx(8.0 / 3.0));
    CHECK(MonotoneParams::from_alpha(3, 0.0).beta == 0.0);
    r.A = 0.0;
    CHECK_THROWS_AS(q_quantity(r, {}), DomainError);
    r.A = -0.1;
    CHECK_THROWS_AS(q_quantity(r, {}), DomainError);
}

TEST_CASE("inequality report")
{
    const auto grid = build_grid(32, 64);
    {
        const auto e = evaluate(constant_graph(grid, pi / 4));
        const auto rep = inequality_report(e.record, e.record.I, e.record.L, XMode::Origin);
        CHECK(rep.lhs == Approx(8.885766).epsilon(1e-7));
        CHECK(rep.rhs_theorem == Approx(8.885766).epsilon(1e-7));
        CHECK(rep.rhs_naive == Approx(8.885766).epsilon(1e-7));
        CHECK(std::abs(rep.theorem_gap) < 1e-10);
        CHECK(std::abs(rep.naive_gap) < 1e-10);
    }
    const auto big = build_grid(96, 192);
    const auto e = evaluate(offcenter_sphere_graph(big, pi / 6, 0.25, {0, 0, 1}));
    const Vec4 m = moment_vector(e.graph, e.fields);
    const Vec4 x = center_direction(0.25, {0, 0, 1});
    const auto at_center = inequality_report(e.record, m.dot(x), rho_x_volume(e.graph, x), XMode::Given);
    CHECK(std::abs(at_center.theorem_gap) <= 1e-6 * at_center.lhs);
    const auto at_origin = inequality_report(e.record, e.record.I, e.record.L, XMode::Origin);
    CHECK(at_origin.naive_gap < 0.0);
    CHECK(at_origin.lhs == Approx(6.0 * e.record.L).epsilon(1e-7));
    CHECK(to_string(XMode::EstimatedCenter) == "estimated_center");

    FunctionalRecord zero;
    zero.A = 0.5;
    CHECK_THROWS_AS(inequality_report(zero, 1.0, 1.0, XMode::Origin), DegenerateError);
}

TEST_CASE("weighted volume never exceeds calK")
{
    const auto big = build_grid(96, 192);
    const std::vector<Vec4> dirs = sample_directions();
    REQUIRE(dirs.size() == 26);
    const RadialGraph shapes[] = {
        constant_graph(big, pi / 6),
        offcenter_sphere_graph(big, pi / 6, 0.25, {0, 0, 1}),
        perturbed_graph(big, pi / 4, 0.05, PerturbationPattern::CosTheta),
    };
    for (const auto& g : shapes) {
        const auto e = evaluate(g);
        for (const Vec4& x : dirs) {
            CHECK(x.norm() == Approx(1.0).epsilon(1e-15));
            const double Lx = rho_x_volume(e.graph, x);
            CHECK(Lx - e.record.calK <= 1e-8 * e.record.calK);
            // only the point at the center of a geodesic ball gives equality
            CHECK(std::abs(Lx - e.record.calK) > 1e-8 * e.record.calK);
        }
    }
}

TEST_CASE("conjecture report")
{
    const auto grid = build_grid(64, 128);
    const auto e = evaluate(offcenter_sphere_graph(grid, pi / 6, 0.25, tilted_axis));
    const Vec4 m = moment_vector(e.graph, e.fields);
    const auto rep = conjecture_report(e.record, m);
    CHECK(rep.sup_I_x == Approx(m.norm()));
    REQUIRE(rep.maximizer.has_value());
    CHECK((*rep.maximizer - center_direction(0.25, tilted_axis)).norm() < 1e-5);
    CHECK(std::abs(rep.gap) <= 1e-5 * rep.sup_I_x);
    const auto none = conjecture_report(e.record, Vec4::Zero());
    CHECK_FALSE(none.maximizer.has_value());
}

}

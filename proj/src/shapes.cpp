#include "imcflab/shapes.hpp"

#include "imcflab/errors.hpp"

#include <cmath>
#include <numbers>

namespace imcflab {

RadialGraph constant_graph(const SphericalGrid& grid, double r0)
{
    return {grid, std::vector<double>(grid.size(), r0)};
}

double offcenter_sphere_radius(double r0, double d, double cos_psi)
{
    const double sd = std::sin(d);
    const double cd = std::cos(d);
    const double big_r = std::sqrt(cd * cd + sd * sd * cos_psi * cos_psi);
    const double delta = std::atan2(sd * cos_psi, cd);
    return delta + std::acos(std::cos(r0) / big_r);
}

RadialGraph offcenter_sphere_graph(const SphericalGrid& grid, double r0, double d, const Vec3& axis)
{
    if (!(r0 > 0.0 && r0 < std::numbers::pi / 2))
        throw DomainError("off-center sphere needs 0 < r0 < pi/2");
    if (!(d >= 0.0))
        throw DomainError("off-center sphere needs d >= 0");
    if (d >= r0)
        throw NotRadialGraphError("off-center sphere with d >= r0 does not enclose the origin");
    const double norm = std::sqrt(axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]);
    if (std::abs(norm - 1.0) > 1e-12)
        throw DomainError("off-center axis must be a unit vector");

    RadialGraph graph{grid, std::vector<double>(grid.size())};
    for (int i = 0; i < grid.n_theta(); ++i)
        for (int j = 0; j < grid.n_phi(); ++j) {
            const Vec3 q = grid.direction(i, j);
            const double cos_psi = q[0] * axis[0] + q[1] * axis[1] + q[2] * axis[2];
            graph.u[grid.index(i, j)] = offcenter_sphere_radius(r0, d, cos_psi);
        }
    return graph;
}

PerturbationPattern parse_pattern(const std::string& name)
{
    if (name == "cos_theta")
        return PerturbationPattern::CosTheta;
    if (name == "legendre2")
        return PerturbationPattern::Legendre2;
    if (name == "tilted_bump")
        return PerturbationPattern::TiltedBump;
    throw ConfigError("unknown perturbation pattern '" + name + "'");
}

std::string to_string(PerturbationPattern pattern)
{
    switch (pattern) {
    case PerturbationPattern::CosTheta: return "cos_theta";
    case PerturbationPattern::Legendre2: return "legendre2";
    case PerturbationPattern::TiltedBump: return "tilted_bump";
    }
    return "unknown";
}

RadialGraph perturbed_graph(const SphericalGrid& grid, double base, double amplitude, PerturbationPattern pattern)
{
    const Vec3 tilt{std::sin(0.6) * std::cos(0.3), std::sin(0.6) * std::sin(0.3), std::cos(0.6)};
    RadialGraph graph{grid, std::vector<double>(grid.size())};
    for (int i = 0; i < grid.n_theta(); ++i)
        for (int j = 0; j < grid.n_phi(); ++j) {
            const Vec3 q = grid.direction(i, j);
            double y = 0.0;
            switch (pattern) {
            case PerturbationPattern::CosTheta: y = q[2]; break;
            case PerturbationPattern::Legendre2: y = 0.5 * (3.0 * q[2] * q[2] - 1.0); break;
            case PerturbationPattern::TiltedBump: {
                const double c = q[0] * tilt[0] + q[1] * tilt[1] + q[2] * tilt[2];
                y = c + 0.25 * (3.0 * c * c - 1.0);
                break;
            }
            }
            graph.u[grid.index(i, j)] = base + amplitude * y;
        }
    return graph;
}

std::size_t polynomial_term_count(int degree)
{
    std::size_t count = 0;
    for (int deg = 1; deg <= degree; ++deg)
        count += static_cast<std::size_t>((deg + 1) * (deg + 2) / 2);
    return count;
}

RadialGraph polynomial_graph(const SphericalGrid& grid, double base, int degree, const std::vector<double>& coefficients)
{
    if (coefficients.size() != polynomial_term_count(degree))
        throw ConfigError("polynomial graph: expected " + std::to_string(polynomial_term_count(degree)) +
                          " coefficients");
    RadialGraph graph{grid, std::vector<double>(grid.size(), base)};
    for (int i = 0; i < grid.n_theta(); ++i)
        for (int j = 0; j < grid.n_phi(); ++j) {
            const Vec3 q = grid.direction(i, j);
            std::size_t k = 0;
            double value = base;
            for (int deg = 1; deg <= degree; ++deg)
                for (int a = deg; a >= 0; --a)
                    for (int b = deg - a; b >= 0; --b) {
                        const int c = deg - a - b;
                        value += coefficients[k++] * std::pow(q[0], a) * std::pow(q[1], b) * std::pow(q[2], c);
                    }
            graph.u[grid.index(i, j)] = value;
        }
    return graph;
}

} // namespace imcflab

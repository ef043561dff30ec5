#pragma once

#include "imcflab/grid.hpp"

#include <array>
#include <string>
#include <vector>

namespace imcflab {

using Vec3 = std::array<double, 3>;

RadialGraph constant_graph(const SphericalGrid& grid, double r0);

/// Geodesic sphere of radius r0 in S^3 whose center lies at distance d from the origin in the
/// direction `axis` (a unit vector of the parameter sphere). Requires 0 < r0 < pi/2, 0 <= d < r0.
/// Throws NotRadialGraphError when d >= r0 and DomainError for the other preconditions.
RadialGraph offcenter_sphere_graph(const SphericalGrid& grid, double r0, double d, const Vec3& axis);

/// Closed-form radial function of the off-center sphere along a ray at angle psi from the axis.
double offcenter_sphere_radius(double r0, double d, double cos_psi);

enum class PerturbationPattern {
    CosTheta,   ///< cos(theta): zonal first harmonic
    Legendre2,  ///< P2(cos theta): zonal second harmonic
    TiltedBump, ///< cos(psi) + 0.5 P2(cos psi), psi measured from a tilted axis (non-zonal)
};

PerturbationPattern parse_pattern(const std::string& name);
std::string to_string(PerturbationPattern pattern);

/// u = base + amplitude * Y(pattern).
RadialGraph perturbed_graph(const SphericalGrid& grid, double base, double amplitude, PerturbationPattern pattern);

/// u = base + sum_k c_k x^a y^b z^c over the monomials of degree 1..degree (graded lexicographic
/// order), evaluated on the unit directions of the grid.
RadialGraph polynomial_graph(const SphericalGrid& grid, double base, int degree, const std::vector<double>& coefficients);

/// Number of monomials of degree 1..degree in three variables.
std::size_t polynomial_term_count(int degree);

} // namespace imcflab

#pragma once

#include "imcflab/functionals.hpp"

#include <vector>

namespace imcflab {

/// Geodesic sphere of radius r0 whose center lies at distance d from the origin.
struct SphereSpec {
    int n = 3;
    double r0 = 0.0;
    double d = 0.0;

    /// Throws DomainError unless n >= 3, 0 < r0 < pi/2, d >= 0 and r0 + d < pi/2.
    void validate() const;
};

/// Closed forms of a geodesic sphere centered at the origin.
struct SphereClosedForms {
    FunctionalRecord record; ///< area, A, I, J, L, calK, Q; the remaining fields are left at zero except min_H
    double H = 0.0;
    double sigma2 = 0.0;
};

/// Throws DomainError unless n >= 3 and 0 < r0 < pi/2.
SphereClosedForms sphere_closed_forms(int n, double r0);

struct OffCenterOracle {
    double L = 0.0;           ///< n int_Omega cos r dV, by volume quadrature
    double L_center = 0.0;    ///< same with the weight centered at the ball's center
    double I = 0.0;           ///< int cos r H dSigma, from (n-2) I = 2 sigma2 L
    double rhs_naive = 0.0;
    double naive_gap = 0.0;   ///< I - rhs_naive, x at the origin
    double theorem_gap = 0.0; ///< x at the ball's center
};

/// Axisymmetric Gauss-Legendre quadrature with `nodes` points per direction.
/// Throws DomainError unless 0 < r0, 0 < d and r0 + d < pi/2 (n >= 3), or nodes < 2.
OffCenterOracle offcenter_oracle(int n, double r0, double d, int nodes = 256);

/// Gauss-Legendre nodes and weights on [-1, 1].
struct GaussLegendre {
    std::vector<double> x;
    std::vector<double> w;
};
GaussLegendre gauss_legendre(int nodes);

} // namespace imcflab

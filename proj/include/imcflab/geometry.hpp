#pragma once

#include "imcflab/ambient.hpp"
#include "imcflab/grid.hpp"

#include <span>
#include <vector>

namespace imcflab {

/// Pointwise extrinsic geometry of a radial graph in a 3-dimensional warped product.
///
/// Tensor components are taken in the h-orthonormal frame (d_theta, d_phi / sin theta) of the
/// parameter sphere. The unit normal xi points to the inner region, so geodesic spheres about
/// the origin have positive principal curvatures.
struct GeometryFields {
    std::vector<double> g11, g12, g22;
    std::vector<double> b11, b12, b22;
    std::vector<double> v;            ///< sqrt(1 + |grad u|^2 / eta(u)^2)
    std::vector<double> H;            ///< mean curvature, trace of the shape operator
    std::vector<double> sigma2;       ///< extrinsic scalar curvature K
    std::vector<double> sq_norm_a;    ///< |a|^2, squared norm of the shape operator
    std::vector<double> umbilicity;   ///< |a|^2 - H^2 / (n-1) >= 0
    std::vector<double> lambda_min;
    std::vector<double> lambda_max;
    std::vector<double> p;            ///< support function <D rho, xi> = -eta''(u) / v
    std::vector<double> rho;          ///< eta'(u)
    std::vector<double> eta;          ///< eta(u)
    std::vector<double> xi_radial;    ///< radial component of xi, -1/v
    std::vector<double> area_weight;  ///< quadrature weight of dSigma at each node

    double integrate(std::span<const double> field) const;
    double area() const;
    double min_H() const;
    double min_lambda() const;
};

/// Throws NumericalError on non-finite input or output and DomainError if u leaves (0, r_max)
/// or the ambient dimension is not 3.
GeometryFields compute_geometry(const ModelSpace& space, const RadialGraph& graph);

/// Mean curvature and graph factor only; the cheap path used by the flow stages.
struct SpeedFields {
    std::vector<double> H;
    std::vector<double> v;
    std::vector<double> eta;
};

SpeedFields compute_speed_fields(const ModelSpace& space, const RadialGraph& graph);

/// k-th elementary symmetric polynomial of the entries; sigma_0 = 1.
double sigma_k(std::span<const double> lambda, int k);

struct IdentityResiduals {
    double minkowski;      ///< (n-2) int rho H - 2 int p K
    double laplace_rho;    ///< int (H p - (n-1) rho)
};

/// Integrated forms of two divergence identities. Spherical ambient only (DomainError otherwise).
IdentityResiduals identity_residuals(const ModelSpace& space, const GeometryFields& fields);

} // namespace imcflab

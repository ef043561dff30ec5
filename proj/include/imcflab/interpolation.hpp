#pragma once

#include "imcflab/grid.hpp"

#include <Eigen/Dense>

#include <span>

namespace imcflab {

/// Point of S^3 in its R^4 embedding: (cos r, sin r * omega).
using Vec4 = Eigen::Vector4d;
using Mat4 = Eigen::Matrix4d;

/// Tensor-product Lagrange interpolation (8 x 8 stencil) of a nodal field on the parameter
/// sphere. Stencils crossing a pole use the continued rows, so the interpolant is smooth there.
class SphereInterpolator {
public:
    SphereInterpolator(SphericalGrid grid, std::span<const double> field);

    double operator()(double theta, double phi) const;
    /// Value along a unit direction of R^3.
    double at_direction(double x, double y, double z) const;

private:
    SphericalGrid grid_;
    std::vector<double> field_;
};

/// Sample a graph on another grid by interpolation.
RadialGraph resample(const RadialGraph& graph, const SphericalGrid& target);

/// Proper rotation of R^4 sending unit x to e0 = (1, 0, 0, 0), acting in span(x, e0).
/// Identity when x == e0; DegenerateError when x == -e0.
Mat4 rotation_to_pole(const Vec4& x);

/// The graph of R(Sigma), resampled on the same grid by per-ray bisection of the inside/outside
/// test of Sigma through R^{-1}. NotRadialGraphError when the new origin R^{-1} e0 is not enclosed.
RadialGraph rotate_graph(const RadialGraph& graph, const Mat4& rotation);

/// Embedding of the graph's node (i, j): (cos u, sin u * omega).
Vec4 embed_node(const RadialGraph& graph, int i, int j);

} // namespace imcflab

#include "imcflab/geometry.hpp"

#include "imcflab/errors.hpp"
#include "imcflab/summation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace imcflab {

namespace {

void check_input(const ModelSpace& space, const RadialGraph& graph)
{
    if (space.dimension() != 3)
        throw DomainError("the grid engine supports n = 3 only");
    if (graph.u.size() != graph.grid.size())
        throw DomainError("radial graph size does not match its grid");
    for (double r : graph.u) {
        if (!std::isfinite(r))
            throw NumericalError("radial graph contains a non-finite value");
        if (!(r > 0.0 && r < space.r_max()))
            throw DomainError("radial graph value " + std::to_string(r) + " outside (0, r_max)");
    }
}

/// Gradient and h-Hessian of u in the orthonormal frame, one node.
struct LocalJet {
    double a1, a2;
    double hess11, hess12, hess22;
};

inline LocalJet local_jet(const GridDerivatives& d, std::size_t k, double inv_sin_t, double cot_t)
{
    LocalJet jet;
    jet.a1 = d.d_theta[k];
    jet.a2 = d.d_phi[k] * inv_sin_t;
    jet.hess11 = d.d_theta2[k];
    jet.hess12 = (d.d_theta_phi[k] - cot_t * d.d_phi[k]) * inv_sin_t;
    jet.hess22 = d.d_phi2[k] * (inv_sin_t * inv_sin_t) + cot_t * d.d_theta[k];
    return jet;
}

/// Shape operator S = g^{-1} b of the graph, row-major.
struct ShapeOperator {
    double s11, s12, s21, s22;
    double b11, b12, b22;
    double v;
};

inline ShapeOperator shape_operator(const LocalJet& jet, const WarpValues& w)
{
    const double inv_eta = 1.0 / w.eta;
    const double inv_eta2 = inv_eta * inv_eta;
    const double grad2 = jet.a1 * jet.a1 + jet.a2 * jet.a2;
    const double v = std::sqrt(1.0 + grad2 * inv_eta2);
    const double inv_v = 1.0 / v;
    const double twist = 2.0 * w.eta_prime * inv_eta;
    const double diag = w.eta * w.eta_prime;

    ShapeOperator s;
    s.v = v;
    s.b11 = (-jet.hess11 + twist * jet.a1 * jet.a1 + diag) * inv_v;
    s.b12 = (-jet.hess12 + twist * jet.a1 * jet.a2) * inv_v;
    s.b22 = (-jet.hess22 + twist * jet.a2 * jet.a2 + diag) * inv_v;

    // g = eta^2 I + a a^T, g^{-1} = (I - a a^T / (eta^2 v^2)) / eta^2
    const double c = inv_eta2 * inv_v * inv_v;
    const double gi11 = (1.0 - c * jet.a1 * jet.a1) * inv_eta2;
    const double gi12 = (-c * jet.a1 * jet.a2) * inv_eta2;
    const double gi22 = (1.0 - c * jet.a2 * jet.a2) * inv_eta2;
    s.s11 = gi11 * s.b11 + gi12 * s.b12;
    s.s12 = gi11 * s.b12 + gi12 * s.b22;
    s.s21 = gi12 * s.b11 + gi22 * s.b12;
    s.s22 = gi12 * s.b12 + gi22 * s.b22;
    return s;
}

} // namespace

double GeometryFields::integrate(std::span<const double> field) const
{
    std::vector<double> terms(area_weight.size());
    for (std::size_t k = 0; k < terms.size(); ++k)
        terms[k] = field[k] * area_weight[k];
    return pairwise_sum(terms);
}

double GeometryFields::area() const { return pairwise_sum(area_weight); }

double GeometryFields::min_H() const { return *std::min_element(H.begin(), H.end()); }

double GeometryFields::min_lambda() const { return *std::min_element(lambda_min.begin(), lambda_min.end()); }

GeometryFields compute_geometry(const ModelSpace& space, const RadialGraph& graph)
{
    check_input(space, graph);
    const SphericalGrid& grid = graph.grid;
    const GridDerivatives d = differentiate(grid, graph.u);
    const std::size_t n = grid.size();
    const auto weights = grid.quad_weights();
    const bool zonal = is_zonal(grid, graph.u);

    GeometryFields f;
    for (auto* field : {&f.g11, &f.g12, &f.g22, &f.b11, &f.b12, &f.b22, &f.v, &f.H, &f.sigma2, &f.sq_norm_a,
                        &f.umbilicity, &f.lambda_min, &f.lambda_max, &f.p, &f.rho, &f.eta, &f.xi_radial,
                        &f.area_weight})
        field->resize(n);

    for (int i = 0; i < grid.n_theta(); ++i) {
        const double inv_sin_t = 1.0 / grid.sin_theta()[i];
        const double cot_t = grid.cos_theta()[i] * inv_sin_t;
        for (int j = 0; j < grid.n_phi(); ++j) {
            const std::size_t k = grid.index(i, j);
            const WarpValues w = space.warp(graph.u[k]);
            const LocalJet jet = local_jet(d, k, inv_sin_t, cot_t);
            const ShapeOperator s = shape_operator(jet, w);

            f.g11[k] = jet.a1 * jet.a1 + w.eta * w.eta;
            f.g12[k] = jet.a1 * jet.a2;
            f.g22[k] = jet.a2 * jet.a2 + w.eta * w.eta;
            f.b11[k] = s.b11;
            f.b12[k] = s.b12;
            f.b22[k] = s.b22;
            f.v[k] = s.v;

            const double mean = s.s11 + s.s22;
            // (lambda_1 - lambda_2)^2 / 2, written without cancellation
            const double half_diff = 0.5 * (s.s11 - s.s22);
            const double umb = 2.0 * half_diff * half_diff + 2.0 * s.s12 * s.s21;
            const double radius = std::sqrt(std::max(0.0, 0.5 * umb));
            f.H[k] = mean;
            f.sigma2[k] = s.s11 * s.s22 - s.s12 * s.s21;
            f.umbilicity[k] = umb;
            f.sq_norm_a[k] = 0.5 * mean * mean + umb;
            f.lambda_min[k] = 0.5 * mean - radius;
            f.lambda_max[k] = 0.5 * mean + radius;
            f.p[k] = -w.eta_double_prime / s.v;
            f.rho[k] = w.eta_prime;
            f.eta[k] = w.eta;
            f.xi_radial[k] = -1.0 / s.v;
            f.area_weight[k] = weights[k] * w.eta * w.eta * s.v;

            if (!std::isfinite(mean) || !std::isfinite(f.sigma2[k]))
                throw NumericalError("non-finite curvature at node (" + std::to_string(i) + ", " +
                                     std::to_string(j) + ")");
            if (zonal) {
                for (auto* field : {&f.g11, &f.g12, &f.g22, &f.b11, &f.b12, &f.b22, &f.v, &f.H, &f.sigma2,
                                    &f.sq_norm_a, &f.umbilicity, &f.lambda_min, &f.lambda_max, &f.p, &f.rho, &f.eta,
                                    &f.xi_radial})
                    std::fill_n(field->begin() + k + 1, grid.n_phi() - 1, (*field)[k]);
                for (int jj = 1; jj < grid.n_phi(); ++jj)
                    f.area_weight[k + jj] = weights[k + jj] * w.eta * w.eta * s.v;
                break;
            }
        }
    }
    return f;
}

SpeedFields compute_speed_fields(const ModelSpace& space, const RadialGraph& graph)
{
    check_input(space, graph);
    const SphericalGrid& grid = graph.grid;
    const GridDerivatives d = differentiate(grid, graph.u);
    SpeedFields f;
    f.H.resize(grid.size());
    f.v.resize(grid.size());
    f.eta.resize(grid.size());
    const bool zonal = is_zonal(grid, graph.u);
    for (int i = 0; i < grid.n_theta(); ++i) {
        const double inv_sin_t = 1.0 / grid.sin_theta()[i];
        const double cot_t = grid.cos_theta()[i] * inv_sin_t;
        for (int j = 0; j < grid.n_phi(); ++j) {
            const std::size_t k = grid.index(i, j);
            const WarpValues w = space.warp(graph.u[k]);
            const ShapeOperator s = shape_operator(local_jet(d, k, inv_sin_t, cot_t), w);
            f.H[k] = s.s11 + s.s22;
            f.v[k] = s.v;
            f.eta[k] = w.eta;
            if (!std::isfinite(f.H[k]))
                throw NumericalError("non-finite mean curvature");
            if (zonal) {
                for (auto* field : {&f.H, &f.v, &f.eta})
                    std::fill_n(field->begin() + k + 1, grid.n_phi() - 1, (*field)[k]);
                break;
            }
        }
    }
    return f;
}

double sigma_k(std::span<const double> lambda, int k)
{
    if (k < 0 || k > static_cast<int>(lambda.size()))
        throw DomainError("sigma_k: k = " + std::to_string(k) + " out of range");
    // e_j accumulated by the recurrence e_j <- e_j + x e_{j-1}
    std::vector<double> e(k + 1, 0.0);
    e[0] = 1.0;
    for (double x : lambda)
        for (int j = k; j >= 1; --j)
            e[j] += x * e[j - 1];
    return e[k];
}

IdentityResiduals identity_residuals(const ModelSpace& space, const GeometryFields& f)
{
    if (space.kind() != SpaceKind::Spherical)
        throw DomainError("identity residuals assume the spherical ambient");
    const int n = space.dimension();
    const std::size_t count = f.H.size();
    std::vector<double> mink(count), lap(count);
    for (std::size_t k = 0; k < count; ++k) {
        mink[k] = (n - 2) * f.rho[k] * f.H[k] - 2.0 * f.p[k] * f.sigma2[k];
        lap[k] = f.H[k] * f.p[k] - (n - 1) * f.rho[k];
    }
    return {f.integrate(mink), f.integrate(lap)};
}

} // namespace imcflab

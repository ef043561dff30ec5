#include "imcflab/functionals.hpp"

#include "imcflab/errors.hpp"
#include "imcflab/summation.hpp"

#include <cmath>
#include <numbers>

namespace imcflab {

double unit_sphere_area(int n)
{
    return 2.0 * std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n);
}

MonotoneParams MonotoneParams::from_alpha(int n, double alpha)
{
    MonotoneParams p;
    p.alpha = alpha;
    p.beta = (n - 1.0) / (n - 2.0) * alpha;
    p.gamma = 2.0 * (n - 1.0) * (n - 1.0) / (n * (n - 2.0)) * alpha;
    return p;
}

FunctionalRecord functionals(const ModelSpace& space, const RadialGraph& graph, const GeometryFields& f,
                             double t, const MonotoneParams& params)
{
    const int n = space.dimension();
    const std::size_t count = f.H.size();
    std::vector<double> rho_h(count), rho_over_h(count), eta_n(count);
    for (std::size_t k = 0; k < count; ++k) {
        rho_h[k] = f.rho[k] * f.H[k];
        rho_over_h[k] = f.rho[k] / f.H[k];
        eta_n[k] = std::pow(f.eta[k], n);
    }

    FunctionalRecord r;
    r.n = n;
    r.t = t;
    r.area = f.area();
    const double omega = unit_sphere_area(n);
    r.A = r.area / omega;
    r.I = f.integrate(rho_h);
    r.J = f.integrate(f.p);
    r.L = graph.grid.integrate(eta_n);
    r.calK = omega * std::pow(r.A, n / (n - 1.0));
    r.j_minus_l = r.J - r.L;
    r.min_H = f.min_H();
    r.lambda_min = f.min_lambda();
    r.umbilicity = f.integrate(f.umbilicity);
    r.rho_over_H = f.integrate(rho_over_h);
    r.Q = r.A > 0.0 ? q_quantity(r, params) : 0.0;
    return r;
}

double rho_x_volume(const RadialGraph& graph, const Vec4& x, int radial_intervals)
{
    if (std::abs(x.norm() - 1.0) > 1e-12)
        throw DomainError("rho_x_volume: x must be a unit vector");
    if (radial_intervals < 64 || radial_intervals % 2 != 0)
        throw ConfigError("rho_x_volume: need an even number >= 64 of radial intervals");
    const SphericalGrid& grid = graph.grid;
    constexpr int n = 3;
    std::vector<double> per_ray(grid.size());
    for (int i = 0; i < grid.n_theta(); ++i)
        for (int j = 0; j < grid.n_phi(); ++j) {
            const auto q = grid.direction(i, j);
            const double tangential = x[1] * q[0] + x[2] * q[1] + x[3] * q[2];
            const double u = graph.u[grid.index(i, j)];
            const double h = u / radial_intervals;
            // integrand <(cos r, sin r q), x> sin^{n-1} r, zero at r = 0
            auto integrand = [&](double r) {
                const double s = std::sin(r);
                return (x[0] * std::cos(r) + tangential * s) * s * s;
            };
            double acc = integrand(u);
            for (int m = 1; m < radial_intervals; ++m)
                acc += (m % 2 == 1 ? 4.0 : 2.0) * integrand(m * h);
            per_ray[grid.index(i, j)] = n * acc * h / 3.0;
        }
    return grid.integrate(per_ray);
}

Vec4 moment_vector(const RadialGraph& graph, const GeometryFields& f)
{
    const SphericalGrid& grid = graph.grid;
    std::array<std::vector<double>, 4> terms;
    for (auto& t : terms)
        t.resize(grid.size());
    for (int i = 0; i < grid.n_theta(); ++i)
        for (int j = 0; j < grid.n_phi(); ++j) {
            const std::size_t k = grid.index(i, j);
            const Vec4 q = embed_node(graph, i, j);
            const double weight = f.H[k] * f.area_weight[k];
            for (int c = 0; c < 4; ++c)
                terms[c][k] = q[c] * weight;
        }
    Vec4 m;
    for (int c = 0; c < 4; ++c)
        m[c] = pairwise_sum(terms[c]);
    return m;
}

double q_quantity(const FunctionalRecord& r, const MonotoneParams& params)
{
    if (!(r.A > 0.0))
        throw DomainError("q_quantity: A must be positive");
    const int n = r.n;
    const double a_inv = std::pow(r.A, -2.0 / (n - 1));
    return std::pow(r.A, -(n - 2.0) / (n - 1.0)) *
           (r.I - (n - 1) * (r.J + params.beta) * (a_inv - 1.0) + params.gamma * a_inv);
}

std::string to_string(XMode mode)
{
    switch (mode) {
    case XMode::Origin: return "origin";
    case XMode::Given: return "given";
    case XMode::EstimatedCenter: return "estimated_center";
    }
    return "unknown";
}

namespace {

double naive_rhs(const FunctionalRecord& r)
{
    const int n = r.n;
    return (n - 1) * unit_sphere_area(n) *
           (std::pow(r.A, (n - 2.0) / (n - 1.0)) - std::pow(r.A, n / (n - 1.0)));
}

} // namespace

InequalityReport inequality_report(const FunctionalRecord& r, double I_x, double L_x, XMode x_mode)
{
    if (r.calK == 0.0)
        throw DegenerateError("inequality_report: calK vanishes");
    InequalityReport rep;
    rep.x_mode = x_mode;
    rep.lhs = I_x;
    rep.rhs_naive = naive_rhs(r);
    rep.rhs_theorem = (L_x / r.calK) * rep.rhs_naive;
    rep.theorem_gap = rep.lhs - rep.rhs_theorem;
    rep.naive_gap = rep.lhs - rep.rhs_naive;
    return rep;
}

ConjectureReport conjecture_report(const FunctionalRecord& r, const Vec4& moment)
{
    ConjectureReport rep;
    rep.sup_I_x = moment.norm();
    rep.rhs_naive = naive_rhs(r);
    rep.gap = rep.sup_I_x - rep.rhs_naive;
    if (rep.sup_I_x > 1e-12 * std::max(1.0, std::abs(r.I)))
        rep.maximizer = moment / rep.sup_I_x;
    return rep;
}

} // namespace imcflab

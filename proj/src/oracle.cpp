#include "imcflab/oracle.hpp"

#include "imcflab/errors.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace imcflab {

void SphereSpec::validate() const
{
    if (n < 3)
        throw DomainError("SphereSpec: n must be >= 3");
    if (!(r0 > 0.0 && r0 < std::numbers::pi / 2))
        throw DomainError("SphereSpec: r0 must lie in (0, pi/2)");
    if (!(d >= 0.0))
        throw DomainError("SphereSpec: d must be non-negative");
    if (!(r0 + d < std::numbers::pi / 2))
        throw DomainError("SphereSpec: r0 + d must stay below pi/2");
}

namespace {

double naive_rhs(int n, double omega, double A)
{
    return (n - 1) * omega * (std::pow(A, (n - 2.0) / (n - 1.0)) - std::pow(A, n / (n - 1.0)));
}

double sigma2_of_sphere(int n, double r0)
{
    const double cot = 1.0 / std::tan(r0);
    return 0.5 * (n - 1) * (n - 2) * cot * cot;
}

} // namespace

SphereClosedForms sphere_closed_forms(int n, double r0)
{
    if (n < 3)
        throw DomainError("sphere_closed_forms: n must be >= 3");
    if (!(r0 > 0.0 && r0 < std::numbers::pi / 2))
        throw DomainError("sphere_closed_forms: r0 = " + std::to_string(r0) + " outside (0, pi/2)");
    const double omega = unit_sphere_area(n);
    const double s = std::sin(r0);
    const double c = std::cos(r0);

    SphereClosedForms out;
    FunctionalRecord& r = out.record;
    r.n = n;
    r.area = omega * std::pow(s, n - 1);
    r.A = std::pow(s, n - 1);
    r.I = (n - 1) * omega * c * c * std::pow(s, n - 2);
    r.J = omega * std::pow(s, n);
    r.L = r.J;
    r.calK = r.J;
    r.Q = 0.0;
    out.H = (n - 1) * c / s;
    out.sigma2 = sigma2_of_sphere(n, r0);
    r.min_H = out.H;
    return out;
}

GaussLegendre gauss_legendre(int nodes)
{
    if (nodes < 2)
        throw DomainError("gauss_legendre: need at least two nodes");
    GaussLegendre gl;
    gl.x.resize(nodes);
    gl.w.resize(nodes);
    for (int k = 0; k < (nodes + 1) / 2; ++k) {
        // Chebyshev-like initial guess, then Newton on P_nodes
        double x = std::cos(std::numbers::pi * (k + 0.75) / (nodes + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int m = 2; m <= nodes; ++m) {
                const double p2 = ((2.0 * m - 1.0) * x * p1 - (m - 1.0) * p0) / m;
                p0 = p1;
                p1 = p2;
            }
            dp = nodes * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16)
                break;
        }
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        gl.x[k] = -x;
        gl.x[nodes - 1 - k] = x;
        gl.w[k] = w;
        gl.w[nodes - 1 - k] = w;
    }
    return gl;
}

OffCenterOracle offcenter_oracle(int n, double r0, double d, int nodes)
{
    if (n < 3)
        throw DomainError("offcenter_oracle: n must be >= 3");
    if (!(r0 > 0.0 && r0 < std::numbers::pi / 2))
        throw DomainError("offcenter_oracle: r0 must lie in (0, pi/2)");
    if (!(d > 0.0))
        throw DomainError("offcenter_oracle: d must be positive");
    if (!(r0 + d < std::numbers::pi / 2))
        throw DomainError("offcenter_oracle: r0 + d must stay below pi/2");
    const GaussLegendre gl = gauss_legendre(nodes);

    // Geodesic polar coordinates (s, alpha) about the ball's center, alpha measured from the
    // direction pointing away from the origin: cos r = cos s cos d - sin s sin d cos alpha.
    const double cd = std::cos(d);
    const double sd = std::sin(d);
    double total = 0.0;
    for (int a = 0; a < nodes; ++a) {
        const double s = 0.5 * r0 * (gl.x[a] + 1.0);
        const double ws = 0.5 * r0 * gl.w[a];
        const double radial = std::pow(std::sin(s), n - 1);
        double inner = 0.0;
        for (int b = 0; b < nodes; ++b) {
            const double alpha = 0.5 * std::numbers::pi * (gl.x[b] + 1.0);
            const double wa = 0.5 * std::numbers::pi * gl.w[b];
            const double cos_r = std::cos(s) * cd - std::sin(s) * sd * std::cos(alpha);
            inner += wa * cos_r * std::pow(std::sin(alpha), n - 2);
        }
        total += ws * radial * inner;
    }

    const double omega = unit_sphere_area(n);
    const double A = std::pow(std::sin(r0), n - 1);
    OffCenterOracle out;
    out.L = n * unit_sphere_area(n - 1) * total;
    out.L_center = omega * std::pow(std::sin(r0), n);
    out.I = 2.0 * sigma2_of_sphere(n, r0) * out.L / (n - 2);
    out.rhs_naive = naive_rhs(n, omega, A);
    out.naive_gap = out.I - out.rhs_naive;
    // With x at the center the sphere is centered for rho_x, and calK equals L_center.
    const double I_center = 2.0 * sigma2_of_sphere(n, r0) * out.L_center / (n - 2);
    const double calK = omega * std::pow(A, n / (n - 1.0));
    out.theorem_gap = I_center - (out.L_center / calK) * out.rhs_naive;
    return out;
}

} // namespace imcflab

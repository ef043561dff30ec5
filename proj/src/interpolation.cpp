#include "imcflab/interpolation.hpp"

#include "imcflab/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

namespace imcflab {

namespace {

constexpr int stencil = 8;

/// Lagrange weights on nodes 0..7 evaluated at fractional position t (relative to node 0).
std::array<double, stencil> lagrange_weights(double t)
{
    std::array<double, stencil> w{};
    for (int m = 0; m < stencil; ++m) {
        double num = 1.0, den = 1.0;
        for (int l = 0; l < stencil; ++l) {
            if (l == m)
                continue;
            num *= t - l;
            den *= m - l;
        }
        w[m] = num / den;
    }
    return w;
}

} // namespace

SphereInterpolator::SphereInterpolator(SphericalGrid grid, std::span<const double> field)
    : grid_(std::move(grid)), field_(field.begin(), field.end())
{
    if (field_.size() != grid_.size())
        throw DomainError("interpolated field does not match its grid");
}

double SphereInterpolator::operator()(double theta, double phi) const
{
    const int nt = grid_.n_theta();
    const int np = grid_.n_phi();
    const double ht = grid_.theta_step();
    const double hp = grid_.phi_step();

    // Row coordinate: theta = (k + 1/2) ht
    const double row_pos = theta / ht - 0.5;
    const int k0 = static_cast<int>(std::floor(row_pos)) - (stencil / 2 - 1);
    const auto wt = lagrange_weights(row_pos - k0);

    double wrapped = std::fmod(phi, 2.0 * std::numbers::pi);
    if (wrapped < 0.0)
        wrapped += 2.0 * std::numbers::pi;
    const double col_pos = wrapped / hp;
    const int j0 = static_cast<int>(std::floor(col_pos)) - (stencil / 2 - 1);
    const auto wp = lagrange_weights(col_pos - j0);

    double value = 0.0;
    for (int a = 0; a < stencil; ++a) {
        const int k = k0 + a;
        // rows further than one pole-crossing never occur for n_theta >= 16
        double row_sum = 0.0;
        for (int b = 0; b < stencil; ++b) {
            const int j = ((j0 + b) % np + np) % np;
            row_sum += wp[b] * continued_value(grid_, field_, k, j);
        }
        value += wt[a] * row_sum;
    }
    (void)nt;
    return value;
}

double SphereInterpolator::at_direction(double x, double y, double z) const
{
    const double theta = std::atan2(std::hypot(x, y), z);
    const double phi = std::atan2(y, x);
    return (*this)(theta, phi);
}

RadialGraph resample(const RadialGraph& graph, const SphericalGrid& target)
{
    const SphereInterpolator interp(graph.grid, graph.u);
    RadialGraph out{target, std::vector<double>(target.size())};
    for (int i = 0; i < target.n_theta(); ++i)
        for (int j = 0; j < target.n_phi(); ++j)
            out.u[target.index(i, j)] = interp(target.theta()[i], target.phi()[j]);
    return out;
}

Mat4 rotation_to_pole(const Vec4& x)
{
    if (std::abs(x.norm() - 1.0) > 1e-10)
        throw DomainError("rotation_to_pole: x must be a unit vector");
    const Vec4 e0 = Vec4::UnitX();
    const double c = std::clamp(x.dot(e0), -1.0, 1.0);
    Vec4 w = x - c * e0;
    const double s = w.norm();
    if (s < 1e-15) {
        if (c > 0.0)
            return Mat4::Identity();
        throw DegenerateError("rotation_to_pole: x is the antipode of the origin");
    }
    w /= s;
    // Rotation by -alpha in the (e0, w) plane, alpha the angle from e0 to x.
    Mat4 r = Mat4::Identity();
    r += (c - 1.0) * (e0 * e0.transpose() + w * w.transpose());
    r += s * (e0 * w.transpose() - w * e0.transpose());
    return r;
}

Vec4 embed_node(const RadialGraph& graph, int i, int j)
{
    const auto q = graph.grid.direction(i, j);
    const double r = graph.u[graph.grid.index(i, j)];
    const double s = std::sin(r);
    return {std::cos(r), s * q[0], s * q[1], s * q[2]};
}

RadialGraph rotate_graph(const RadialGraph& graph, const Mat4& rotation)
{
    const SphereInterpolator interp(graph.grid, graph.u);
    const Mat4 inverse = rotation.transpose();

    // Signed test: negative inside Sigma, positive outside.
    auto outside = [&](const Vec4& point) {
        const Vec4 q = inverse * point;
        const double s = std::acos(std::clamp(q[0], -1.0, 1.0));
        const double tangential = q.tail<3>().norm();
        if (tangential < 1e-300)
            return q[0] > 0.0 ? -1.0 : 1.0;
        return s - interp.at_direction(q[1], q[2], q[3]);
    };

    if (outside(Vec4::UnitX()) >= 0.0)
        throw NotRadialGraphError("rotated surface does not enclose the origin");

    const SphericalGrid& grid = graph.grid;
    RadialGraph out{grid, std::vector<double>(grid.size())};
    for (int i = 0; i < grid.n_theta(); ++i)
        for (int j = 0; j < grid.n_phi(); ++j) {
            const auto dir = grid.direction(i, j);
            auto point = [&](double r) {
                const double s = std::sin(r);
                return Vec4(std::cos(r), s * dir[0], s * dir[1], s * dir[2]);
            };
            double lo = 0.0;
            double hi = std::numbers::pi;
            if (outside(point(hi)) <= 0.0)
                throw NotRadialGraphError("rotated surface encloses the antipode of the origin");
            for (int it = 0; it < 60; ++it) {
                const double mid = 0.5 * (lo + hi);
                if (outside(point(mid)) < 0.0)
                    lo = mid;
                else
                    hi = mid;
            }
            out.u[grid.index(i, j)] = 0.5 * (lo + hi);
        }
    return out;
}

} // namespace imcflab

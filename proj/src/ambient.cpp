#include "imcflab/ambient.hpp"

#include "imcflab/errors.hpp"

#include <cmath>
#include <numbers>

namespace imcflab {

std::string to_string(SpaceKind kind)
{
    switch (kind) {
    case SpaceKind::Spherical: return "spherical";
    case SpaceKind::Hyperbolic: return "hyperbolic";
    case SpaceKind::Euclidean: return "euclidean";
    case SpaceKind::Custom: return "custom";
    }
    return "unknown";
}

namespace {

void require_dimension(int n)
{
    if (n < 3)
        throw ConfigError("ambient dimension must be >= 3, got " + std::to_string(n));
}

} // namespace

ModelSpace::ModelSpace(SpaceKind kind, int n, double kappa, double r_max)
    : kind_(kind), n_(n), kappa_(kappa), r_max_(r_max)
{
    require_dimension(n);
}

ModelSpace ModelSpace::spherical(int n) { return ModelSpace(SpaceKind::Spherical, n, 1.0, std::numbers::pi); }

ModelSpace ModelSpace::hyperbolic(int n) { return ModelSpace(SpaceKind::Hyperbolic, n, -1.0, unbounded_radius); }

ModelSpace ModelSpace::euclidean(int n) { return ModelSpace(SpaceKind::Euclidean, n, 0.0, unbounded_radius); }

ModelSpace ModelSpace::custom(int n, ScalarFn eta, ScalarFn eta_prime, ScalarFn eta_double_prime,
                              double kappa, double r_max)
{
    if (!eta || !eta_prime || !eta_double_prime)
        throw ConfigError("custom warped product needs eta, eta' and eta''");
    if (!(r_max > 0.0))
        throw ConfigError("custom warped product needs r_max > 0");
    ModelSpace space(SpaceKind::Custom, n, kappa, r_max);
    space.eta_ = std::move(eta);
    space.eta_prime_ = std::move(eta_prime);
    space.eta_double_prime_ = std::move(eta_double_prime);
    return space;
}

WarpValues ModelSpace::warp(double r) const noexcept
{
    switch (kind_) {
    case SpaceKind::Spherical: {
        const double s = std::sin(r);
        return {s, std::cos(r), -s};
    }
    case SpaceKind::Hyperbolic: {
        const double s = std::sinh(r);
        return {s, std::cosh(r), s};
    }
    case SpaceKind::Euclidean: return {r, 1.0, 0.0};
    case SpaceKind::Custom: return {eta_(r), eta_prime_(r), eta_double_prime_(r)};
    }
    return {0.0, 0.0, 0.0};
}

WarpValues warp_eval(const ModelSpace& space, double r)
{
    if (!(r >= 0.0 && r < space.r_max()))
        throw DomainError("radial coordinate " + std::to_string(r) + " outside [0, r_max)");
    return space.warp(r);
}

double static_residual(const ModelSpace& space, double r)
{
    if (!(r > 0.0 && r < space.r_max()))
        throw DomainError("static residual needs 0 < r < r_max, got r = " + std::to_string(r));
    const WarpValues w = space.warp(r);
    // rho = eta', so rho' = eta'' and rho'' = eta''' = -kappa eta' on a space form.
    // For custom spaces the third derivative is taken by central differences of eta''.
    double rho_second;
    if (space.kind() == SpaceKind::Custom) {
        const double step = 1e-5 * std::max(1.0, r);
        rho_second = (space.warp(r + step).eta_double_prime - space.warp(r - step).eta_double_prime) / (2.0 * step);
    } else {
        rho_second = -space.kappa() * w.eta_prime;
    }
    const int n = space.dimension();
    return rho_second + (n - 1) * (w.eta_prime / w.eta) * w.eta_double_prime + n * w.eta_prime;
}

} // namespace imcflab

#pragma once

#include <functional>
#include <limits>
#include <string>

namespace imcflab {

enum class SpaceKind { Spherical, Hyperbolic, Euclidean, Custom };

std::string to_string(SpaceKind kind);

struct WarpValues {
    double eta;
    double eta_prime;
    double eta_double_prime;
};

/// Warped product N x [0, r_max) with metric dr^2 + eta(r)^2 g_N, N the round S^{n-1}.
///
/// The three space forms are built in; `custom` accepts a caller-supplied warping
/// function. rho = eta' is the potential used throughout the library.
class ModelSpace {
public:
    using ScalarFn = std::function<double(double)>;

    static ModelSpace spherical(int n);
    static ModelSpace hyperbolic(int n);
    static ModelSpace euclidean(int n);
    /// kappa is the sectional-curvature constant reported through ricci_normal/scalar_curvature.
    static ModelSpace custom(int n, ScalarFn eta, ScalarFn eta_prime, ScalarFn eta_double_prime,
                             double kappa, double r_max);

    SpaceKind kind() const noexcept { return kind_; }
    int dimension() const noexcept { return n_; }
    double r_max() const noexcept { return r_max_; }
    double kappa() const noexcept { return kappa_; }
    /// Ric(xi, xi) for any unit vector: (n-1) kappa.
    double ricci_normal() const noexcept { return (n_ - 1) * kappa_; }
    double scalar_curvature() const noexcept { return n_ * (n_ - 1) * kappa_; }

    /// Unchecked evaluation for hot loops; callers guarantee 0 <= r < r_max.
    WarpValues warp(double r) const noexcept;

private:
    ModelSpace(SpaceKind kind, int n, double kappa, double r_max);

    SpaceKind kind_;
    int n_;
    double kappa_;
    double r_max_;
    ScalarFn eta_;
    ScalarFn eta_prime_;
    ScalarFn eta_double_prime_;
};

inline constexpr double unbounded_radius = std::numeric_limits<double>::infinity();

/// eta, eta', eta'' at r. Throws DomainError unless 0 <= r < r_max.
WarpValues warp_eval(const ModelSpace& space, double r);

/// rho'' + (n-1)(eta'/eta) rho' + n rho at r, i.e. (Delta_M rho + n rho) for radial rho.
/// Vanishes identically on the round sphere. Throws DomainError unless 0 < r < r_max.
double static_residual(const ModelSpace& space, double r);

} // namespace imcflab

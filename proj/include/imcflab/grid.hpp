#pragma once

#include <array>
#include <memory>
#include <span>
#include <vector>

namespace imcflab {

/// Colatitude x longitude grid on S^2 (the parameter sphere of a radial graph in a 3-manifold).
///
/// Nodes sit at theta_i = (i + 1/2) pi / n_theta and phi_j = 2 pi j / n_phi, so the poles are
/// never nodes. Quadrature is Fejer's first rule in cos(theta) times the trapezoid rule in phi;
/// both are spectrally accurate for smooth integrands and the weights sum to 4 pi.
///
/// Immutable; copies share state.
class SphericalGrid {
public:
    SphericalGrid(int n_theta, int n_phi);

    int n_theta() const noexcept { return n_theta_; }
    int n_phi() const noexcept { return n_phi_; }
    std::size_t size() const noexcept;
    std::size_t index(int i, int j) const noexcept { return static_cast<std::size_t>(i) * n_phi() + j; }

    double theta_step() const noexcept;
    double phi_step() const noexcept;

    std::span<const double> theta() const noexcept;
    std::span<const double> phi() const noexcept;
    std::span<const double> sin_theta() const noexcept;
    std::span<const double> cos_theta() const noexcept;
    std::span<const double> cos_phi() const noexcept;
    std::span<const double> sin_phi() const noexcept;
    /// Per-node quadrature weights (row-major, n_theta x n_phi).
    std::span<const double> quad_weights() const noexcept;

    /// Unit vector in R^3 of node (i, j).
    std::array<double, 3> direction(int i, int j) const noexcept;

    /// Weighted sum of a nodal field with pairwise reduction.
    double integrate(std::span<const double> field) const;

    struct Impl;
    const Impl& impl() const noexcept { return *impl_; }

private:
    std::shared_ptr<const Impl> impl_;
    int n_theta_;
    int n_phi_;
};

/// Validated factory: n_theta >= 16, n_phi >= 32, n_phi even. Throws ConfigError otherwise.
SphericalGrid build_grid(int n_theta, int n_phi);

/// Partial derivatives of a nodal field with respect to (theta, phi).
///
/// phi derivatives are Fourier-exact per row; theta derivatives are 4th-order centered
/// differences, continued across the poles with f(-theta, phi) = f(theta, phi + pi).
struct GridDerivatives {
    std::vector<double> d_theta;
    std::vector<double> d_theta2;
    std::vector<double> d_phi;
    std::vector<double> d_phi2;
    std::vector<double> d_theta_phi;
};

GridDerivatives differentiate(const SphericalGrid& grid, std::span<const double> field);

/// True when every row of `field` is constant in phi (bit-exactly).
bool is_zonal(const SphericalGrid& grid, std::span<const double> field) noexcept;

/// Zeroes, row by row, the Fourier modes with wavenumber above cutoff[i].
/// Rows whose cutoff is >= n_phi/2 or whose values are constant are left untouched.
void truncate_longitude_modes(const SphericalGrid& grid, std::span<double> field, std::span<const int> cutoff);

/// Value of the nodal field at extended row k (k may lie outside [0, n_theta); rows continue
/// across the poles with a half-turn in phi) and column j.
double continued_value(const SphericalGrid& grid, std::span<const double> field, int k, int j) noexcept;

/// A star-shaped surface r = u(theta, phi) sampled on a grid.
struct RadialGraph {
    SphericalGrid grid;
    std::vector<double> u;
};

} // namespace imcflab

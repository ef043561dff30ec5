#pragma once

#include "imcflab/ambient.hpp"
#include "imcflab/geometry.hpp"
#include "imcflab/interpolation.hpp"

#include <optional>
#include <string>

namespace imcflab {

/// Area of the unit sphere S^{n-1} in R^n.
double unit_sphere_area(int n);

/// Constants of the monotone quantity: beta and gamma are slaved to alpha.
struct MonotoneParams {
    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 0.0;

    static MonotoneParams from_alpha(int n, double alpha);
};

/// Scalar functionals of one surface at one flow time.
struct FunctionalRecord {
    int n = 3;
    double t = 0.0;
    double area = 0.0;       ///< |Sigma|
    double A = 0.0;          ///< |Sigma| / omega_{n-1}
    double I = 0.0;          ///< int rho H dSigma
    double J = 0.0;          ///< int p dSigma
    double L = 0.0;          ///< n int_Omega rho dOmega
    double calK = 0.0;       ///< omega_{n-1} A^{n/(n-1)}
    double Q = 0.0;          ///< monotone quantity for the params in use
    double j_minus_l = 0.0;
    double min_H = 0.0;
    double lambda_min = 0.0;
    double umbilicity = 0.0; ///< int (|a|^2 - H^2/(n-1)) dSigma
    double rho_over_H = 0.0; ///< int rho / H dSigma, the left side of the Brendle-type bound is (n-1) times this
};

/// Quadrature of all functionals. L uses the exact radial antiderivative eta(u)^n / n.
FunctionalRecord functionals(const ModelSpace& space, const RadialGraph& graph, const GeometryFields& fields,
                             double t, const MonotoneParams& params = {});

/// n int_Omega <q, x> dV for a unit x of R^4 (spherical ambient, n = 3), per-ray composite Simpson.
/// Throws DomainError for non-unit x.
double rho_x_volume(const RadialGraph& graph, const Vec4& x, int radial_intervals = 128);

/// m = int q H dSigma in the R^4 embedding; sup over unit x of int rho_x H dSigma equals |m|.
Vec4 moment_vector(const RadialGraph& graph, const GeometryFields& fields);

/// Q = A^{-(n-2)/(n-1)} [ I - (n-1)(J + beta)(A^{-2/(n-1)} - 1) + gamma A^{-2/(n-1)} ].
/// Throws DomainError when A <= 0.
double q_quantity(const FunctionalRecord& record, const MonotoneParams& params);

enum class XMode { Origin, Given, EstimatedCenter };
std::string to_string(XMode mode);

struct InequalityReport {
    XMode x_mode = XMode::Origin;
    double lhs = 0.0;            ///< I_x = int rho_x H dSigma
    double rhs_theorem = 0.0;    ///< (n-1) omega (L_x / calK)(A^{(n-2)/(n-1)} - A^{n/(n-1)})
    double rhs_naive = 0.0;      ///< same without the L_x / calK factor
    double theorem_gap = 0.0;
    double naive_gap = 0.0;
};

/// Gaps of the weighted and the naive inequality for a given point x, supplied through I_x and
/// L_x. Throws DegenerateError when calK == 0.
InequalityReport inequality_report(const FunctionalRecord& record, double I_x, double L_x, XMode x_mode);

/// sup_x I_x against the naive right-hand side.
struct ConjectureReport {
    double sup_I_x = 0.0;
    double rhs_naive = 0.0;
    double gap = 0.0;
    std::optional<Vec4> maximizer; ///< empty when |m| is numerically zero
};

ConjectureReport conjecture_report(const FunctionalRecord& record, const Vec4& moment);

} // namespace imcflab

#include "imcflab/grid.hpp"

#include "imcflab/errors.hpp"
#include "imcflab/summation.hpp"

#include <fftw3.h>

#include <cmath>
#include <algorithm>
#include <array>
#include <complex>
#include <mutex>
#include <numbers>
#include <string>

namespace imcflab {

namespace {

// The FFTW planner is not reentrant; execution with the new-array interface is.
std::mutex& planner_mutex()
{
    static std::mutex m;
    return m;
}

/// Fejer's first rule on [-1, 1] at x_i = cos(theta_i), theta_i = (i + 1/2) pi / n.
std::vector<double> fejer_weights(int n)
{
    std::vector<double> w(n);
    for (int i = 0; i < n; ++i) {
        const double theta = (i + 0.5) * std::numbers::pi / n;
        double s = 0.0;
        for (int k = 1; k <= n / 2; ++k)
            s += std::cos(2.0 * k * theta) / (4.0 * k * k - 1.0);
        w[i] = (2.0 / n) * (1.0 - 2.0 * s);
    }
    return w;
}

} // namespace

struct SphericalGrid::Impl {
    int n_theta;
    int n_phi;
    double h_theta;
    double h_phi;
    std::vector<double> theta, phi, sin_t, cos_t, cos_p, sin_p, weights;
    fftw_plan forward = nullptr;
    fftw_plan backward = nullptr;

    Impl(int nt, int np) : n_theta(nt), n_phi(np)
    {
        h_theta = std::numbers::pi / nt;
        h_phi = 2.0 * std::numbers::pi / np;
        theta.resize(nt);
        sin_t.resize(nt);
        cos_t.resize(nt);
        for (int i = 0; i < nt; ++i) {
            theta[i] = (i + 0.5) * h_theta;
            sin_t[i] = std::sin(theta[i]);
            cos_t[i] = std::cos(theta[i]);
        }
        phi.resize(np);
        cos_p.resize(np);
        sin_p.resize(np);
        for (int j = 0; j < np; ++j) {
            phi[j] = j * h_phi;
            cos_p[j] = std::cos(phi[j]);
            sin_p[j] = std::sin(phi[j]);
        }
        const std::vector<double> w_theta = fejer_weights(nt);
        weights.resize(static_cast<std::size_t>(nt) * np);
        for (int i = 0; i < nt; ++i)
            for (int j = 0; j < np; ++j)
                weights[static_cast<std::size_t>(i) * np + j] = w_theta[i] * h_phi;

        std::vector<double> real(np);
        std::vector<std::complex<double>> spec(np / 2 + 1);
        std::lock_guard lock(planner_mutex());
        forward = fftw_plan_dft_r2c_1d(np, real.data(), reinterpret_cast<fftw_complex*>(spec.data()),
                                       FFTW_ESTIMATE | FFTW_UNALIGNED);
        backward = fftw_plan_dft_c2r_1d(np, reinterpret_cast<fftw_complex*>(spec.data()), real.data(),
                                        FFTW_ESTIMATE | FFTW_UNALIGNED);
    }

    ~Impl()
    {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(forward);
        fftw_destroy_plan(backward);
    }

    Impl(const Impl&) = delete;
    Impl& operator=(const Impl&) = delete;

    void r2c(const double* in, std::complex<double>* out) const
    {
        // r2c does not modify its input when FFTW_PRESERVE_INPUT is implied (1-d r2c).
        fftw_execute_dft_r2c(forward, const_cast<double*>(in), reinterpret_cast<fftw_complex*>(out));
    }

    // c2r destroys its input.
    void c2r(std::complex<double>* in, double* out) const
    {
        fftw_execute_dft_c2r(backward, reinterpret_cast<fftw_complex*>(in), out);
    }
};

SphericalGrid::SphericalGrid(int n_theta, int n_phi) : n_theta_(n_theta), n_phi_(n_phi)
{
    if (n_theta < 16 || n_phi < 32 || n_phi % 2 != 0)
        throw ConfigError("grid must satisfy n_theta >= 16, n_phi >= 32, n_phi even; got " +
                          std::to_string(n_theta) + " x " + std::to_string(n_phi));
    impl_ = std::make_shared<const Impl>(n_theta, n_phi);
}

std::size_t SphericalGrid::size() const noexcept { return impl_->weights.size(); }
double SphericalGrid::theta_step() const noexcept { return impl_->h_theta; }
double SphericalGrid::phi_step() const noexcept { return impl_->h_phi; }
std::span<const double> SphericalGrid::theta() const noexcept { return impl_->theta; }
std::span<const double> SphericalGrid::phi() const noexcept { return impl_->phi; }
std::span<const double> SphericalGrid::sin_theta() const noexcept { return impl_->sin_t; }
std::span<const double> SphericalGrid::cos_theta() const noexcept { return impl_->cos_t; }
std::span<const double> SphericalGrid::cos_phi() const noexcept { return impl_->cos_p; }
std::span<const double> SphericalGrid::sin_phi() const noexcept { return impl_->sin_p; }
std::span<const double> SphericalGrid::quad_weights() const noexcept { return impl_->weights; }

std::array<double, 3> SphericalGrid::direction(int i, int j) const noexcept
{
    const Impl& g = *impl_;
    return {g.sin_t[i] * g.cos_p[j], g.sin_t[i] * g.sin_p[j], g.cos_t[i]};
}

double SphericalGrid::integrate(std::span<const double> field) const
{
    const auto& w = impl_->weights;
    std::vector<double> terms(w.size());
    for (std::size_t k = 0; k < w.size(); ++k)
        terms[k] = w[k] * field[k];
    return pairwise_sum(terms);
}

SphericalGrid build_grid(int n_theta, int n_phi) { return SphericalGrid(n_theta, n_phi); }

double continued_value(const SphericalGrid& grid, std::span<const double> field, int k, int j) noexcept
{
    const int nt = grid.n_theta();
    const int np = grid.n_phi();
    int row = k;
    int shift = 0;
    if (k < 0) {
        row = -1 - k;
        shift = np / 2;
    } else if (k >= nt) {
        row = 2 * nt - 1 - k;
        shift = np / 2;
    }
    return field[static_cast<std::size_t>(row) * np + (j + shift) % np];
}

namespace {

bool row_constant(const double* row, int np) noexcept
{
    for (int j = 1; j < np; ++j)
        if (row[j] != row[0])
            return false;
    return true;
}

} // namespace

bool is_zonal(const SphericalGrid& grid, std::span<const double> field) noexcept
{
    const int np = grid.n_phi();
    for (int i = 0; i < grid.n_theta(); ++i)
        if (!row_constant(field.data() + static_cast<std::size_t>(i) * np, np))
            return false;
    return true;
}

GridDerivatives differentiate(const SphericalGrid& grid, std::span<const double> f)
{
    const auto& g = grid.impl();
    const int nt = g.n_theta;
    const int np = g.n_phi;
    const std::size_t n = grid.size();
    GridDerivatives d;
    d.d_theta.resize(n);
    d.d_theta2.resize(n);
    d.d_phi.assign(n, 0.0);
    d.d_phi2.assign(n, 0.0);
    d.d_theta_phi.resize(n);

    // Longitude derivatives, row by row.
    const int nk = np / 2 + 1;
    std::vector<std::complex<double>> spec(nk), work(nk);
    const double scale = 1.0 / np;
    bool zonal = true;
    for (int i = 0; i < nt; ++i) {
        const double* row = f.data() + static_cast<std::size_t>(i) * np;
        if (row_constant(row, np))
            continue;
        zonal = false;
        g.r2c(row, spec.data());
        for (int k = 0; k < nk; ++k)
            work[k] = spec[k] * std::complex<double>(0.0, k * scale);
        work[nk - 1] = 0.0;
        g.c2r(work.data(), d.d_phi.data() + static_cast<std::size_t>(i) * np);
        for (int k = 0; k < nk; ++k)
            work[k] = spec[k] * (-static_cast<double>(k) * k * scale);
        g.c2r(work.data(), d.d_phi2.data() + static_cast<std::size_t>(i) * np);
    }

    // Colatitude derivatives; the stencils are arranged so constants differentiate to exact zeros.
    const double inv_12h = 1.0 / (12.0 * g.h_theta);
    const double inv_12h2 = 1.0 / (12.0 * g.h_theta * g.h_theta);
    const int half = np / 2;
    // Rows i-2..i+2 continued across the poles: a stored row plus a half-turn shift.
    auto source_row = [&](int k, int& shift) {
        shift = 0;
        if (k < 0) {
            k = -1 - k;
            shift = half;
        } else if (k >= nt) {
            k = 2 * nt - 1 - k;
            shift = half;
        }
        return static_cast<std::size_t>(k) * np;
    };
    for (int i = 0; i < nt; ++i) {
        std::array<std::size_t, 5> base;
        std::array<int, 5> shift;
        for (int o = 0; o < 5; ++o)
            base[o] = source_row(i + o - 2, shift[o]);
        const std::size_t out = static_cast<std::size_t>(i) * np;
        // zonal input: every column repeats column 0
        const int columns = zonal ? 1 : np;
        for (int j = 0; j < columns; ++j) {
            std::array<std::size_t, 5> at;
            for (int o = 0; o < 5; ++o) {
                const int jj = j + shift[o];
                at[o] = base[o] + (jj < np ? jj : jj - np);
            }
            const double fm2 = f[at[0]], fm1 = f[at[1]], f0 = f[at[2]], fp1 = f[at[3]], fp2 = f[at[4]];
            d.d_theta[out + j] = ((fm2 - fp2) + 8.0 * (fp1 - fm1)) * inv_12h;
            d.d_theta2[out + j] = (16.0 * (fp1 + fm1) - (fp2 + fm2) - 30.0 * f0) * inv_12h2;
            const auto& p = d.d_phi;
            d.d_theta_phi[out + j] = ((p[at[0]] - p[at[4]]) + 8.0 * (p[at[3]] - p[at[1]])) * inv_12h;
        }
        if (zonal) {
            std::fill_n(d.d_theta.begin() + out + 1, np - 1, d.d_theta[out]);
            std::fill_n(d.d_theta2.begin() + out + 1, np - 1, d.d_theta2[out]);
            std::fill_n(d.d_theta_phi.begin() + out + 1, np - 1, d.d_theta_phi[out]);
        }
    }
    return d;
}

void truncate_longitude_modes(const SphericalGrid& grid, std::span<double> field, std::span<const int> cutoff)
{
    const auto& g = grid.impl();
    const int np = g.n_phi;
    const int nk = np / 2 + 1;
    std::vector<std::complex<double>> spec(nk);
    for (int i = 0; i < g.n_theta; ++i) {
        if (cutoff[i] >= np / 2)
            continue;
        double* row = field.data() + static_cast<std::size_t>(i) * np;
        if (row_constant(row, np))
            continue;
        g.r2c(row, spec.data());
        for (int k = 0; k < nk; ++k)
            spec[k] = k <= cutoff[i] ? spec[k] / static_cast<double>(np) : 0.0;
        g.c2r(spec.data(), row);
    }
}

} // namespace imcflab

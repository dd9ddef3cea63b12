#pragma once

// Special functions, Gauss-Legendre rules, quadrature over a disk and the
// closed-form 2x2 symmetric eigenproblem.

#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "fso/errors.hpp"

namespace fso::numerics {

// Symmetric 2x2 matrix [[a11, a12], [a12, a22]].
struct SymMatrix2 {
    double a11 = 0.0;
    double a12 = 0.0;
    double a22 = 0.0;

    double trace() const noexcept { return a11 + a22; }
    double determinant() const noexcept { return a11 * a22 - a12 * a12; }
    bool operator==(const SymMatrix2&) const = default;
};

struct EigenSym2 {
    double lambda1 = 0.0;  // largest
    double lambda2 = 0.0;
    // Unit eigenvector belonging to lambda1; the lambda2 vector is (-v1z, v1y).
    double v1y = 1.0;
    double v1z = 0.0;
};

EigenSym2 eig_sym2(const SymMatrix2& m) noexcept;

double erf(double x) noexcept;
double erfc(double x) noexcept;

// Modified Bessel function of the first kind, order zero. Throws
// std::overflow_error once the result is not representable (|x| > ~713.98).
double bessel_i0(double x);
// exp(-|x|) * I0(x); never overflows.
double bessel_i0e(double x) noexcept;

// Standard normal quantile for p in (0, 1).
double normal_quantile(double p);

// Gauss-Legendre rule on [-1, 1].
struct GaussLegendreRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

GaussLegendreRule gauss_legendre(int order);

struct DiskQuadratureOptions {
    double rel_tol = 1e-9;
    int initial_radial_order = 8;  // angular order is always twice the radial
    int max_level = 6;             // radial order 8 * 2^6 = 512 at the last level
};

namespace detail {
// Rules for radial orders initial * 2^level, cached for the default ladder.
const GaussLegendreRule& ladder_rule(int order);

struct PolarEstimate {
    double value = 0.0;
    double abs_value = 0.0;
};

template <class F>
PolarEstimate polar_gauss_legendre(F& f, double radius, int radial_order) {
    const GaussLegendreRule& radial = ladder_rule(radial_order);
    const GaussLegendreRule& angular = ladder_rule(2 * radial_order);
    const double half_r = 0.5 * radius;

    PolarEstimate est;
    for (std::size_t j = 0; j < angular.nodes.size(); ++j) {
        const double theta = std::numbers::pi * (1.0 + angular.nodes[j]);
        const double c = std::cos(theta);
        const double s = std::sin(theta);
        double ring = 0.0;
        double abs_ring = 0.0;
        for (std::size_t i = 0; i < radial.nodes.size(); ++i) {
            const double r = half_r * (1.0 + radial.nodes[i]);
            const double v = f(r * c, r * s) * r * radial.weights[i];
            ring += v;
            abs_ring += std::abs(v);
        }
        est.value += angular.weights[j] * ring;
        est.abs_value += angular.weights[j] * abs_ring;
    }
    const double jac = half_r * std::numbers::pi;
    est.value *= jac;
    est.abs_value *= jac;
    return est;
}
}  // namespace detail

// Integral of f(y, z) over the disk y^2 + z^2 <= radius^2 by tensor
// Gauss-Legendre in polar coordinates. The order doubles until two successive
// estimates agree to rel_tol (or to round-off when the integral is ~0).
template <class F>
double disk_quadrature(F&& f, double radius, const DiskQuadratureOptions& opts = {}) {
    if (!(radius > 0.0) || !std::isfinite(radius)) {
        throw InvalidArgument("disk_quadrature: radius must be positive and finite");
    }
    if (!(opts.rel_tol > 0.0 && opts.rel_tol < 1.0)) {
        throw InvalidArgument("disk_quadrature: rel_tol must lie in (0, 1)");
    }
    int order = opts.initial_radial_order;
    detail::PolarEstimate prev = detail::polar_gauss_legendre(f, radius, order);
    for (int level = 1; level <= opts.max_level; ++level) {
        order *= 2;
        const detail::PolarEstimate cur = detail::polar_gauss_legendre(f, radius, order);
        const double diff = std::abs(cur.value - prev.value);
        if (!std::isfinite(cur.value)) {
            throw QuadratureFailure("disk_quadrature: non-finite integrand", cur.value);
        }
        if (diff <= opts.rel_tol * std::abs(cur.value) || diff <= 1e-15 * cur.abs_value) {
            return cur.value;
        }
        prev = cur;
    }
    throw QuadratureFailure("disk_quadrature: no convergence at radial order " +
                                std::to_string(order),
                            prev.value);
}

template <class F>
double disk_quadrature(F&& f, double radius, double rel_tol) {
    DiskQuadratureOptions opts;
    opts.rel_tol = rel_tol;
    return disk_quadrature(std::forward<F>(f), radius, opts);
}

// Adaptive Gauss-Kronrod on [a, b]; b may be +infinity.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol = 1e-10);

// Sum with pairwise (cascade) splitting; the result depends only on the
// element order, never on how the array was produced.
double pairwise_sum(std::span<const double> values) noexcept;

}  // namespace fso::numerics

#include "fso/numerics.hpp"

#include <array>
#include <bit>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace fso::numerics {

namespace {

constexpr double kTwoOverSqrtPi = 1.1283791670955125738961589031215452;
constexpr double kOneOverSqrtPi = 0.5641895835477562869480794515607726;

// erf(x) = 2/sqrt(pi) * x * exp(-x^2) * sum_n (2x^2)^n / (2n+1)!!
// All terms are positive so there is no cancellation for |x| <= 3.
double erf_series(double x) noexcept {
    const double x2 = x * x;
    double term = 1.0;
    double sum = 1.0;
    for (int n = 1; n < 500; ++n) {
        term *= 2.0 * x2 / (2.0 * n + 1.0);
        sum += term;
        if (term < 1e-17 * sum) break;
    }
    return kTwoOverSqrtPi * x * std::exp(-x2) * sum;
}

// Continued fraction for erfc, x > 3 (modified Lentz):
// erfc(x) = exp(-x^2)/sqrt(pi) / (x + (1/2)/(x + 1/(x + (3/2)/(x + ...))))
double erfc_continued_fraction(double x) noexcept {
    constexpr double tiny = 1e-300;
    double f = x;
    double c = f;
    double d = 0.0;
    for (int n = 1; n < 5000; ++n) {
        const double a = 0.5 * n;
        d = x + a * d;
        if (d == 0.0) d = tiny;
        c = x + a / c;
        if (c == 0.0) c = tiny;
        d = 1.0 / d;
        const double delta = c * d;
        f *= delta;
        if (std::abs(delta - 1.0) < 1e-16) break;
    }
    return std::exp(-x * x) * kOneOverSqrtPi / f;
}

constexpr double kSeriesLimitI0 = 15.0;

double i0_series(double ax) noexcept {
    const double q = 0.25 * ax * ax;
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < 1000; ++k) {
        term *= q / (static_cast<double>(k) * k);
        sum += term;
        if (term < 1e-17 * sum) break;
    }
    return sum;
}

// sum_k ((2k-1)!!)^2 / (k! 8^k x^k), truncated at the smallest term.
double i0_asymptotic_sum(double ax) noexcept {
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < 200; ++k) {
        const double next = term * (2.0 * k - 1.0) * (2.0 * k - 1.0) / (8.0 * k * ax);
        if (next >= term) break;
        term = next;
        sum += term;
        if (term < 1e-17 * sum) break;
    }
    return sum;
}

GaussLegendreRule compute_rule(int n) {
    GaussLegendreRule rule;
    rule.nodes.resize(static_cast<std::size_t>(n));
    rule.weights.resize(static_cast<std::size_t>(n));
    const int half = (n + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0;
            double p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            if (n == 1) {
                p0 = 1.0;
                p1 = x;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        // recompute the derivative at the converged node
        double p0 = 1.0;
        double p1 = x;
        for (int k = 2; k <= n; ++k) {
            const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[static_cast<std::size_t>(i)] = -x;
        rule.nodes[static_cast<std::size_t>(n - 1 - i)] = x;
        rule.weights[static_cast<std::size_t>(i)] = w;
        rule.weights[static_cast<std::size_t>(n - 1 - i)] = w;
    }
    if (n % 2 == 1) rule.nodes[static_cast<std::size_t>(n / 2)] = 0.0;
    return rule;
}

constexpr int kLadderSize = 12;  // orders 1 .. 2048

}  // namespace

EigenSym2 eig_sym2(const SymMatrix2& m) noexcept {
    const double mean = 0.5 * (m.a11 + m.a22);
    const double half_diff = 0.5 * (m.a11 - m.a22);
    const double radius = std::hypot(half_diff, m.a12);
    EigenSym2 e;
    e.lambda1 = mean + radius;
    e.lambda2 = mean - radius;
    if (radius == 0.0) {
        e.v1y = 1.0;
        e.v1z = 0.0;
    } else if (half_diff >= 0.0) {
        const double vy = half_diff + radius;
        const double n = std::hypot(vy, m.a12);
        e.v1y = vy / n;
        e.v1z = m.a12 / n;
    } else {
        const double vz = radius - half_diff;
        const double n = std::hypot(m.a12, vz);
        e.v1y = m.a12 / n;
        e.v1z = vz / n;
    }
    return e;
}

double erf(double x) noexcept {
    if (std::isnan(x)) return x;
    const double ax = std::abs(x);
    if (ax <= 3.0) return erf_series(x);
    const double r = 1.0 - erfc_continued_fraction(ax);
    return x < 0.0 ? -r : r;
}

double erfc(double x) noexcept {
    if (std::isnan(x)) return x;
    if (x < 0.0) return 2.0 - erfc(-x);
    if (x <= 3.0) return 1.0 - erf_series(x);
    return erfc_continued_fraction(x);
}

double bessel_i0(double x) {
    const double ax = std::abs(x);
    if (ax <= kSeriesLimitI0) return i0_series(ax);
    const double half = std::exp(0.5 * ax);
    const double r = half * (half * i0_asymptotic_sum(ax) / std::sqrt(2.0 * std::numbers::pi * ax));
    if (!std::isfinite(r)) {
        throw std::overflow_error("bessel_i0: result not representable for |x| = " +
                                  std::to_string(ax));
    }
    return r;
}

double bessel_i0e(double x) noexcept {
    const double ax = std::abs(x);
    if (ax <= kSeriesLimitI0) return i0_series(ax) * std::exp(-ax);
    return i0_asymptotic_sum(ax) / std::sqrt(2.0 * std::numbers::pi * ax);
}

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw InvalidArgument("normal_quantile: p must lie in (0, 1)");
    }
    if (p > 0.5) return -normal_quantile(1.0 - p);

    // Rational approximation (relative error ~1e-9) refined by one Halley step.
    static constexpr std::array<double, 6> a = {-3.969683028665376e+01, 2.209460984245205e+02,
                                                -2.759285104469687e+02, 1.383577518672690e+02,
                                                -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr std::array<double, 5> b = {-5.447609879822406e+01, 1.615858368580409e+02,
                                                -1.556989798598866e+02, 6.680131188771972e+01,
                                                -1.328068155288572e+01};
    static constexpr std::array<double, 6> c = {-7.784894002430293e-03, -3.223964580411365e-01,
                                                -2.400758277161838e+00, -2.549732539343734e+00,
                                                4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr std::array<double, 4> d = {7.784695709041462e-03, 3.224671290700398e-01,
                                                2.445134137142996e+00, 3.754408661907416e+00};
    constexpr double p_low = 0.02425;

    double x;
    if (p < p_low) {
        const double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else {
        const double q = p - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    }
    const double e = 0.5 * erfc(-x / std::numbers::sqrt2) - p;
    const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * x * x);
    x -= u / (1.0 + 0.5 * x * u);
    return x;
}

GaussLegendreRule gauss_legendre(int order) {
    if (order < 1) throw InvalidArgument("gauss_legendre: order must be >= 1");
    return compute_rule(order);
}

namespace detail {

const GaussLegendreRule& ladder_rule(int order) {
    static const std::array<GaussLegendreRule, kLadderSize> ladder = [] {
        std::array<GaussLegendreRule, kLadderSize> rules;
        for (int k = 0; k < kLadderSize; ++k) rules[static_cast<std::size_t>(k)] = compute_rule(1 << k);
        return rules;
    }();
    if (order >= 1 && std::has_single_bit(static_cast<unsigned>(order)) &&
        order < (1 << kLadderSize)) {
        return ladder[static_cast<std::size_t>(std::countr_zero(static_cast<unsigned>(order)))];
    }
    static std::mutex mutex;
    static std::map<int, std::unique_ptr<GaussLegendreRule>> extra;
    std::lock_guard lock(mutex);
    auto& slot = extra[order];
    if (!slot) slot = std::make_unique<GaussLegendreRule>(gauss_legendre(order));
    return *slot;
}

}  // namespace detail

double integrate(const std::function<double(double)>& f, double a, double b, double rel_tol) {
    double error = 0.0;
    double l1 = 0.0;
    const double value = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
        f, a, b, 20, rel_tol, &error, &l1);
    if (!std::isfinite(value) || error > std::max(rel_tol * std::abs(value), 1e-15 * l1) * 10.0) {
        throw QuadratureFailure("integrate: adaptive Gauss-Kronrod did not converge", value);
    }
    return value;
}

double pairwise_sum(std::span<const double> values) noexcept {
    if (values.size() <= 16) {
        double s = 0.0;
        for (double v : values) s += v;
        return s;
    }
    const std::size_t mid = values.size() / 2;
    return pairwise_sum(values.first(mid)) + pairwise_sum(values.subspan(mid));
}

}  // namespace fso::numerics

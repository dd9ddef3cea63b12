#include "oracles.hpp"

#include <cmath>
#include <numbers>

#include <boost/multiprecision/cpp_bin_float.hpp>

namespace fso::oracles {

namespace {
using big = boost::multiprecision::cpp_bin_float_50;
constexpr int kTerms = 2000;
}  // namespace

double erf_series(double x) {
    const big bx = x;
    const big x2 = bx * bx;
    big power = bx;  // x^(2n+1) (-1)^n / n!
    big sum = 0;
    for (int n = 0; n < kTerms; ++n) {
        sum += power / (2 * n + 1);
        power *= -x2 / (n + 1);
    }
    const big scale = 2 / sqrt(boost::multiprecision::cpp_bin_float_50(std::numbers::pi_v<long double>));
    return static_cast<double>(scale * sum);
}

double bessel_i0_series(double x) {
    const big q = big(x) * big(x) / 4;
    big term = 1;
    big sum = 1;
    for (int k = 1; k < kTerms; ++k) {
        term *= q / (big(k) * k);
        sum += term;
    }
    return static_cast<double>(sum);
}

geometry::FootprintCenter footprint_by_intersection(const geometry::Pose& p) {
    const double dx = std::sin(p.orientation.phi) * std::cos(p.orientation.theta);
    const double dy = std::sin(p.orientation.phi) * std::sin(p.orientation.theta);
    const double dz = std::cos(p.orientation.phi);
    const double t = -p.position.rx / dx;
    return {p.position.ry + t * dy, p.position.rz + t * dz};
}

double intensity_by_cross_product(double y, double z, const geometry::Pose& p,
                                  const beam::BeamParams& b) {
    const geometry::FootprintCenter f = footprint_by_intersection(p);
    const double d[3] = {std::sin(p.orientation.phi) * std::cos(p.orientation.theta),
                         std::sin(p.orientation.phi) * std::sin(p.orientation.theta),
                         std::cos(p.orientation.phi)};
    const double v[3] = {0.0, y - f.fy, z - f.fz};
    const double c[3] = {v[1] * d[2] - v[2] * d[1], v[2] * d[0] - v[0] * d[2],
                         v[0] * d[1] - v[1] * d[0]};
    const double l2 = c[0] * c[0] + c[1] * c[1] + c[2] * c[2];
    const double sin_psi = std::abs(d[0]);
    const double L = p.position.norm();

    // beam width written out independently of beam::beam_width
    const double k = 2.0 * std::numbers::pi / b.lambda;
    const double rho = std::pow(0.55 * b.cn2 * k * k * L, -3.0 / 5.0);
    const double zr = b.lambda * L / (std::numbers::pi * b.w0 * b.w0);
    const double w2 = b.w0 * b.w0 * (1.0 + (1.0 + 2.0 * b.w0 * b.w0 / (rho * rho)) * zr * zr);
    return sin_psi * 2.0 / (std::numbers::pi * w2) * std::exp(-2.0 * l2 / w2);
}

double centered_disk_capture(double a, double w) { return -std::expm1(-2.0 * a * a / (w * w)); }

}  // namespace fso::oracles

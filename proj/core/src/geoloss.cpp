#include "fso/geoloss.hpp"

#include <algorithm>
#include <limits>
#include <numbers>

#include "fso/diagnostics.hpp"
#include "fso/errors.hpp"
#include "fso/numerics.hpp"

namespace fso::geoloss {

namespace {

void check_inputs(const geometry::Pose& p, const DetectorParams& d) {
    if (!(d.a > 0.0)) throw InvalidArgument("detector radius must be positive");
    if (p.position.rx == 0.0) {
        throw DegenerateGeometry("transmitter lies in the detector plane (rx = 0)");
    }
}

void check_far_field(const geometry::Pose& p, const geometry::FootprintCenter& f,
                     const DetectorParams& d) {
    if (p.position.norm() < 100.0 * std::max(f.offset(), d.a)) diagnostics::warn_near_field();
}

// Axis-aligned Gaussian displaced by u along y, integrated over the aperture.
double displaced_ellipse_integral(double peak, double width, double coef_y, double coef_z,
                                  double u, const DetectorParams& d, double rel_tol) {
    const double scale = 2.0 / (width * width);
    auto density = [=](double y, double z) {
        const double dy = y - u;
        return peak * std::exp(-scale * (coef_y * dy * dy + coef_z * z * z));
    };
    return std::clamp(numerics::disk_quadrature(density, d.a, rel_tol), 0.0, 1.0);
}

double bound(const geometry::Pose& p, const beam::BeamParams& b, const DetectorParams& d,
             double rel_tol, bool lower) {
    check_inputs(p, d);
    const beam::ObliqueSpot spot = beam::oblique_spot(p, b);
    check_far_field(p, spot.center, d);
    // 1/rho_min is the steep direction of the contour; the lower bound puts it
    // along the footprint displacement.
    const double steep = 1.0 / spot.ellipse.rho_min;
    const double shallow = 1.0 / spot.ellipse.rho_max;
    return lower ? displaced_ellipse_integral(spot.peak, spot.width, steep, shallow,
                                              spot.center.offset(), d, rel_tol)
                 : displaced_ellipse_integral(spot.peak, spot.width, shallow, steep,
                                              spot.center.offset(), d, rel_tol);
}

double k_factor(double rho, double nu) {
    return std::sqrt(std::numbers::pi) * rho * numerics::erf(nu) /
           (2.0 * nu * std::exp(-nu * nu));
}

}  // namespace

double exact_loss(const beam::ObliqueSpot& spot, const DetectorParams& d, double rel_tol) {
    if (!(d.a > 0.0)) throw InvalidArgument("detector radius must be positive");
    return std::clamp(numerics::disk_quadrature(spot, d.a, rel_tol), 0.0, 1.0);
}

double exact_loss(const geometry::Pose& p, const beam::BeamParams& b, const DetectorParams& d,
                  double rel_tol) {
    check_inputs(p, d);
    const beam::ObliqueSpot spot = beam::oblique_spot(p, b);
    check_far_field(p, spot.center, d);
    return exact_loss(spot, d, rel_tol);
}

double bound_lower(const geometry::Pose& p, const beam::BeamParams& b, const DetectorParams& d,
                   double rel_tol) {
    return bound(p, b, d, rel_tol, true);
}

double bound_upper(const geometry::Pose& p, const beam::BeamParams& b, const DetectorParams& d,
                   double rel_tol) {
    return bound(p, b, d, rel_tol, false);
}

ApproxParams approx_params(const beam::EllipseParams& e, double offset, double width,
                           const DetectorParams& d) {
    if (!(d.a > 0.0)) throw InvalidArgument("detector radius must be positive");
    ApproxParams ap;
    ap.u = offset;
    ap.wL = width;
    const double ratio = d.a / width;
    ap.nu_min = ratio * std::sqrt(std::numbers::pi / (2.0 * e.rho_min));
    ap.nu_max = ratio * std::sqrt(std::numbers::pi / (2.0 * e.rho_max));
    ap.A0 = numerics::erf(ap.nu_min) * numerics::erf(ap.nu_max);
    ap.k_min = k_factor(e.rho_min, ap.nu_min);
    ap.k_max = k_factor(e.rho_max, ap.nu_max);
    ap.k_mean = 0.5 * (ap.k_min + ap.k_max);
    return ap;
}

ApproxParams approx_params(const geometry::Pose& p, const beam::BeamParams& b,
                           const DetectorParams& d) {
    check_inputs(p, d);
    const beam::EllipseParams e = beam::ellipse_params(p.orientation);
    const geometry::FootprintCenter f = geometry::footprint_center(p);
    return approx_params(e, f.offset(), beam::beam_width(b, p.position.norm()), d);
}

ApproxBounds approx_bounds(const ApproxParams& ap) noexcept {
    const double u2 = 2.0 * ap.u * ap.u / (ap.wL * ap.wL);
    return {ap.A0 * std::exp(-u2 / ap.k_min), ap.A0 * std::exp(-u2 / ap.k_max)};
}

double approx_mean(const ApproxParams& ap) noexcept {
    return ap.A0 * std::exp(-2.0 * ap.u * ap.u / (ap.k_mean * ap.wL * ap.wL));
}

double channel_coefficient(const ChannelInputs& c, double hg) {
    if (c.eta < 0.0 || c.hp < 0.0 || c.ha < 0.0 || hg < 0.0) {
        throw InvalidArgument("channel_coefficient: inputs must be non-negative");
    }
    return c.eta * c.hp * c.ha * hg;
}

double loss_db(double h) noexcept {
    if (!(h > 0.0)) return std::numeric_limits<double>::infinity();
    return 0.0 - 10.0 * std::log10(h);  // +0 rather than -0 at h = 1
}

DeterministicLoss evaluate_all(const geometry::Pose& p, const beam::BeamParams& b,
                               const DetectorParams& d, double rel_tol) {
    DeterministicLoss out;
    out.exact = exact_loss(p, b, d, rel_tol);
    out.lower = bound_lower(p, b, d, rel_tol);
    out.upper = bound_upper(p, b, d, rel_tol);
    const ApproxParams ap = approx_params(p, b, d);
    const ApproxBounds ab = approx_bounds(ap);
    out.approx_low = ab.low;
    out.approx_upp = ab.upp;
    out.approx_mean = approx_mean(ap);
    return out;
}

}  // namespace fso::geoloss

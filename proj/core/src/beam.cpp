#include "fso/beam.hpp"

#include <algorithm>
#include <numbers>

#include "fso/diagnostics.hpp"
#include "fso/errors.hpp"

namespace fso::beam {

double BeamParams::wavenumber() const noexcept { return 2.0 * std::numbers::pi / lambda; }

double coherence_length(const BeamParams& b, double distance) {
    if (!(distance > 0.0)) throw InvalidArgument("coherence_length: distance must be positive");
    const double k = b.wavenumber();
    return std::pow(0.55 * b.cn2 * k * k * distance, -0.6);
}

double beam_width(const BeamParams& b, double distance) {
    if (!(distance > 0.0)) throw InvalidArgument("beam_width: distance must be positive");
    const double rho = coherence_length(b, distance);
    const double w02 = b.w0 * b.w0;
    const double diffraction = b.lambda * distance / (std::numbers::pi * w02);
    return b.w0 * std::sqrt(1.0 + (1.0 + 2.0 * w02 / (rho * rho)) * diffraction * diffraction);
}

double intensity_orthogonal(const BeamParams& b, double distance, double l) {
    const double w = beam_width(b, distance);
    return 2.0 / (std::numbers::pi * w * w) * std::exp(-2.0 * l * l / (w * w));
}

EllipseParams ellipse_params(const geometry::Orientation& o) {
    EllipseParams e;
    e.psi = geometry::incidence_angle(o);
    const double sp = std::sin(o.phi);
    const double cp = std::cos(o.phi);
    const double st = std::sin(o.theta);
    const double ct = std::cos(o.theta);
    e.rho_y = cp * cp + sp * sp * ct * ct;
    e.rho_z = sp * sp;
    e.rho_yz = -cp * sp * st;

    // Eigenvalues of [[rho_y, rho_yz], [rho_yz, rho_z]]; their product is
    // sin^2(psi), which is used for the small one to avoid cancellation.
    const double spct = sp * ct;
    const double det = spct * spct;
    const double disc = std::sqrt((e.rho_y - e.rho_z) * (e.rho_y - e.rho_z) + 4.0 * e.rho_yz * e.rho_yz);
    const double big = 0.5 * (e.rho_y + e.rho_z + disc);
    e.rho_min = 1.0 / big;
    e.rho_max = big / det;

    if (e.rho_yz == 0.0) {
        e.contour_rotation = 0.0;
    } else if (e.rho_y == e.rho_z) {
        e.contour_rotation = std::copysign(std::numbers::pi / 4.0, e.rho_yz);
    } else {
        e.contour_rotation = 0.5 * std::atan(2.0 * e.rho_yz / (e.rho_y - e.rho_z));
    }
    return e;
}

ObliqueSpot oblique_spot(const EllipseParams& e, const geometry::FootprintCenter& f,
                         double distance, const BeamParams& b) {
    ObliqueSpot spot;
    spot.ellipse = e;
    spot.center = f;
    spot.width = beam_width(b, distance);
    spot.peak = std::sin(e.psi) * 2.0 / (std::numbers::pi * spot.width * spot.width);
    return spot;
}

ObliqueSpot oblique_spot(const geometry::Pose& p, const BeamParams& b) {
    return oblique_spot(ellipse_params(p.orientation), geometry::footprint_center(p),
                        p.position.norm(), b);
}

double intensity_on_pd(double y, double z, const geometry::Pose& p, const BeamParams& b) {
    const ObliqueSpot spot = oblique_spot(p, b);
    const double reach = std::max(spot.center.offset(), std::hypot(y, z));
    if (p.position.norm() < 100.0 * reach) diagnostics::warn_near_field();
    return spot(y, z);
}

bool far_field_ok(const geometry::Pose& p, double aperture_radius) {
    const geometry::FootprintCenter f = geometry::footprint_center(p);
    return p.position.norm() >= 100.0 * std::max(f.offset(), aperture_radius);
}

}  // namespace fso::beam

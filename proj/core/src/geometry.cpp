#include "fso/geometry.hpp"

#include <algorithm>
#include <numbers>

#include "fso/errors.hpp"

namespace fso::geometry {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

double wrap_angle(double theta) noexcept {
    double t = std::fmod(theta, kTwoPi);
    if (t < 0.0) t += kTwoPi;
    if (t >= kTwoPi) t = 0.0;
    return t;
}

Vec3 direction_from_angles(const Orientation& o) noexcept {
    const double s = std::sin(o.phi);
    return {s * std::cos(o.theta), s * std::sin(o.theta), std::cos(o.phi)};
}

double incidence_angle(const Orientation& o) {
    const double s = std::abs(std::sin(o.phi) * std::cos(o.theta));
    if (s < kDegenerateTol) {
        throw DegenerateGeometry("incidence_angle: beam is parallel to the detector plane");
    }
    return std::asin(std::min(s, 1.0));
}

FootprintCenter footprint_center(const Pose& p) {
    const double cos_t = std::cos(p.orientation.theta);
    const double sin_p = std::sin(p.orientation.phi);
    if (std::abs(cos_t) < kDegenerateTol || std::abs(sin_p) < kDegenerateTol) {
        throw DegenerateGeometry("footprint_center: beam does not cross the detector plane");
    }
    const double cot_p = std::cos(p.orientation.phi) / sin_p;
    const Position& r = p.position;
    return {r.ry - r.rx * std::tan(p.orientation.theta), r.rz - r.rx * cot_p / cos_t};
}

Orientation tracking_orientation(const Position& m) {
    if (m.rx == 0.0) {
        throw DegenerateGeometry("tracking_orientation: mean x coordinate must be non-zero");
    }
    const double range = m.norm();
    const double theta = m.rx > 0.0 ? std::atan(m.ry / m.rx)
                                     : std::numbers::pi + std::atan(m.ry / m.rx);
    // The azimuth above points along +r in the x-y plane, so the polar angle
    // must as well for the line through r and the origin.
    const double phi = std::acos(std::clamp(m.rz / range, -1.0, 1.0));
    return {wrap_angle(theta), phi};
}

Position spherical_mean_position(double range, double alpha, double beta) {
    if (!(range > 0.0)) throw InvalidArgument("spherical_mean_position: range must be positive");
    return {range * std::sin(beta) * std::cos(alpha), range * std::sin(beta) * std::sin(alpha),
            range * std::cos(beta)};
}

}  // namespace fso::geometry

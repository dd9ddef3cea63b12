#pragma once

// Coordinate System 1: detector center at the origin, detector in the y-z
// plane (x = 0). Orientation angles are spherical angles of the beam
// direction measured in a frame parallel to System 1 and centered on the
// transmitter.

#include <cmath>

namespace fso::geometry {

inline constexpr double kDegenerateTol = 1e-12;

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    double norm() const noexcept { return std::sqrt(x * x + y * y + z * z); }
};

struct Position {
    double rx = 0.0;
    double ry = 0.0;
    double rz = 0.0;

    double norm() const noexcept { return std::sqrt(rx * rx + ry * ry + rz * rz); }
    bool operator==(const Position&) const = default;
};

// theta in [0, 2*pi) (azimuth from +x), phi in (0, pi) (polar angle from +z).
struct Orientation {
    double theta = 0.0;
    double phi = 0.0;

    bool operator==(const Orientation&) const = default;
};

struct Pose {
    Position position;
    Orientation orientation;
};

// Point (0, fy, fz) where the beam line crosses the detector plane.
struct FootprintCenter {
    double fy = 0.0;
    double fz = 0.0;

    double offset() const noexcept { return std::hypot(fy, fz); }
    bool operator==(const FootprintCenter&) const = default;
};

// Maps any finite angle into [0, 2*pi).
double wrap_angle(double theta) noexcept;

Vec3 direction_from_angles(const Orientation& o) noexcept;

// Angle between the beam line and the detector plane, arcsin(|sin(phi)cos(theta)|).
double incidence_angle(const Orientation& o);

FootprintCenter footprint_center(const Pose& p);

// Mean orientation that points the beam line through the detector center.
Orientation tracking_orientation(const Position& mean_position);

Position spherical_mean_position(double range, double alpha, double beta);

}  // namespace fso::geometry

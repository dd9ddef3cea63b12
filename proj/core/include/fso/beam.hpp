#pragma once

// Gaussian beam: turbulence-broadened width, intensity in a plane orthogonal
// to the beam and the oblique intensity on the detector plane.

#include "fso/geometry.hpp"

namespace fso::beam {

struct BeamParams {
    double w0 = 1e-3;         // beam waist radius [m]
    double lambda = 1550e-9;  // wavelength [m]
    double cn2 = 1e-14;       // refractive-index structure parameter [m^-2/3]

    double wavenumber() const noexcept;
    bool operator==(const BeamParams&) const = default;
};

// Coefficients of the quadratic form rho_y*y^2 + rho_z*z^2 + 2*rho_yz*y*z that
// gives the squared distance from a detector-plane point to the beam line.
// rho_min and rho_max are the inverse eigenvalues of that form.
struct EllipseParams {
    double rho_y = 1.0;
    double rho_z = 1.0;
    double rho_yz = 0.0;
    double rho_min = 1.0;
    double rho_max = 1.0;
    double psi = 0.0;               // incidence angle
    double contour_rotation = 0.0;  // counterclockwise rotation of the contours
};

double coherence_length(const BeamParams& b, double distance);
double beam_width(const BeamParams& b, double distance);

// Power density at distance l from the beam axis in an orthogonal plane.
double intensity_orthogonal(const BeamParams& b, double distance, double l);

EllipseParams ellipse_params(const geometry::Orientation& o);

// Oblique Gaussian spot on the detector plane; callable as density(y, z).
struct ObliqueSpot {
    EllipseParams ellipse;
    geometry::FootprintCenter center;
    double width = 0.0;  // w(L)
    double peak = 0.0;   // sin(psi) * 2 / (pi w^2)

    double operator()(double y, double z) const noexcept {
        const double dy = y - center.fy;
        const double dz = z - center.fz;
        const double q = ellipse.rho_y * dy * dy + ellipse.rho_z * dz * dz +
                         2.0 * ellipse.rho_yz * dy * dz;
        return peak * std::exp(-2.0 * q / (width * width));
    }
};

ObliqueSpot oblique_spot(const geometry::Pose& p, const BeamParams& b);
ObliqueSpot oblique_spot(const EllipseParams& e, const geometry::FootprintCenter& f,
                         double distance, const BeamParams& b);

double intensity_on_pd(double y, double z, const geometry::Pose& p, const BeamParams& b);

// Far-field condition behind the oblique density: ||r|| >= 100 max(||f||, a).
bool far_field_ok(const geometry::Pose& p, double aperture_radius);

}  // namespace fso::beam

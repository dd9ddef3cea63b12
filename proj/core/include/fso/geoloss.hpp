#pragma once

// Geometric loss of the detector aperture: exact integral, rotated-ellipse
// bounds, closed-form approximations and the end-to-end channel product.

#include "fso/errors.hpp"
#include "fso/beam.hpp"
#include "fso/geometry.hpp"

namespace fso::geoloss {

inline constexpr double kDefaultRelTol = 1e-9;

struct DetectorParams {
    double a = 0.1;  // circular aperture radius [m]

    bool operator==(const DetectorParams&) const = default;
};

struct ApproxParams {
    double A0 = 0.0;
    double k_min = 0.0;
    double k_max = 0.0;
    double k_mean = 0.0;
    double nu_min = 0.0;
    double nu_max = 0.0;
    double u = 0.0;   // footprint offset from the detector center [m]
    double wL = 0.0;  // beam width at the detector [m]
};

struct ChannelInputs {
    double eta = 1.0;  // responsivity
    double hp = 1.0;   // path loss
    double ha = 1.0;   // turbulence loss
};

double exact_loss(const geometry::Pose& p, const beam::BeamParams& b, const DetectorParams& d,
                  double rel_tol = kDefaultRelTol);
double exact_loss(const beam::ObliqueSpot& spot, const DetectorParams& d,
                  double rel_tol = kDefaultRelTol);

double bound_lower(const geometry::Pose& p, const beam::BeamParams& b, const DetectorParams& d,
                   double rel_tol = kDefaultRelTol);
double bound_upper(const geometry::Pose& p, const beam::BeamParams& b, const DetectorParams& d,
                   double rel_tol = kDefaultRelTol);

ApproxParams approx_params(const geometry::Pose& p, const beam::BeamParams& b,
                           const DetectorParams& d);
ApproxParams approx_params(const beam::EllipseParams& e, double offset, double width,
                           const DetectorParams& d);

struct ApproxBounds {
    double low = 0.0;
    double upp = 0.0;
};

ApproxBounds approx_bounds(const ApproxParams& ap) noexcept;
double approx_mean(const ApproxParams& ap) noexcept;

double channel_coefficient(const ChannelInputs& c, double hg);

// -10 log10(h); +infinity for h <= 0.
double loss_db(double h) noexcept;

struct DeterministicLoss {
    double exact = 0.0;
    double lower = 0.0;
    double upper = 0.0;
    double approx_low = 0.0;
    double approx_upp = 0.0;
    double approx_mean = 0.0;
};

DeterministicLoss evaluate_all(const geometry::Pose& p, const beam::BeamParams& b,
                               const DetectorParams& d, double rel_tol = kDefaultRelTol);

}  // namespace fso::geoloss

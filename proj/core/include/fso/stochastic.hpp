#pragma once

// Statistical model of the geometric loss under Gaussian pose jitter around
// a perfectly tracked mean pose.

#include "fso/beam.hpp"
#include "fso/geoloss.hpp"
#include "fso/geometry.hpp"
#include "fso/numerics.hpp"
#include "fso/random.hpp"

namespace fso::stochastic {

struct PoseDistribution {
    geometry::Position mu_r;
    geometry::Orientation mu_omega;
    double sigma_x = 0.0;
    double sigma_y = 0.0;
    double sigma_z = 0.0;
    double sigma_theta = 0.0;
    double sigma_phi = 0.0;

    // Mean orientation from the tracking relation for mu_r.
    static PoseDistribution tracking(const geometry::Position& mu_r, double sigma_x,
                                     double sigma_y, double sigma_z, double sigma_theta,
                                     double sigma_phi);
    // sigma_x = sigma_y = sigma_z = sigma_p, sigma_theta = sigma_phi = sigma_o.
    static PoseDistribution tracking(const geometry::Position& mu_r, double sigma_p,
                                     double sigma_o);

    geometry::Pose mean_pose() const noexcept { return {mu_r, mu_omega}; }
};

// Zero-mean Gaussian perturbations of one pose draw.
struct PoseNoise {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
    double theta = 0.0;
    double phi = 0.0;

    PoseNoise scaled(double t) const noexcept { return {t * x, t * y, t * z, t * theta, t * phi}; }
};

// First-order sensitivities of the footprint center at the mean pose.
struct TrackingConstants {
    double c1 = 0.0;
    double c2 = 0.0;
    double c3 = 0.0;
    double c4 = 0.0;
    double c5 = 0.0;
};

TrackingConstants tracking_constants(const PoseDistribution& d);

numerics::SymMatrix2 covariance_sigma(const PoseDistribution& d);

struct HoytParams {
    double q = 1.0;
    double omega = 0.0;
    double lambda1 = 0.0;
    double lambda2 = 0.0;
};

HoytParams hoyt_params(const numerics::SymMatrix2& sigma);

struct GeoLossPdf {
    HoytParams hoyt;
    double A0 = 0.0;
    double k_mean = 0.0;
    double wL = 0.0;
    double varpi = 0.0;
};

GeoLossPdf make_geo_loss_pdf(const HoytParams& hoyt, double A0, double k_mean, double wL);

// A0 and k_mean frozen at the mean pose, Hoyt parameters from covariance_sigma.
GeoLossPdf geo_loss_pdf(const PoseDistribution& d, const beam::BeamParams& b,
                        const geoloss::DetectorParams& det);

double pdf_hg(double x, const GeoLossPdf& p);
double pdf_hg_rayleigh(double x, double varrho, double A0);
double rayleigh_parameter(double k_mean, double wL, double sigma_p, double sigma_o, double mu_x);

// P(h <= x) and P(lo < h <= hi) under pdf_hg.
double cdf_hg(double x, const GeoLossPdf& p);
double interval_probability(double lo, double hi, const GeoLossPdf& p);

PoseNoise sample_noise(const PoseDistribution& d, random::CounterStream& rng);
geometry::Pose perturbed_pose(const PoseDistribution& d, const PoseNoise& eps) noexcept;
geometry::Pose sample_pose(const PoseDistribution& d, random::CounterStream& rng);

geometry::FootprintCenter linearized_footprint(const PoseDistribution& d, const PoseNoise& eps);

// Draw of the approximate loss A0 exp(-2u^2/(k w^2)) with u the norm of a
// zero-mean Gaussian with covariance eigenvalues (lambda1, lambda2).
double sample_approx_loss(const GeoLossPdf& p, random::CounterStream& rng);

}  // namespace fso::stochastic

#include "fso/stochastic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fso/errors.hpp"

namespace fso::stochastic {

namespace {

constexpr double kTrackingGuard = 1e-9;

void check_sigmas(const PoseDistribution& d) {
    if (d.sigma_x < 0.0 || d.sigma_y < 0.0 || d.sigma_z < 0.0 || d.sigma_theta < 0.0 ||
        d.sigma_phi < 0.0) {
        throw InvalidArgument("pose standard deviations must be non-negative");
    }
}

void check_tracking(const PoseDistribution& d) {
    const geometry::FootprintCenter f = geometry::footprint_center(d.mean_pose());
    if (f.offset() > 1e-9 * std::max(1.0, d.mu_r.norm())) {
        throw InvalidArgument("pose distribution mean does not satisfy perfect tracking");
    }
}

double hoyt_b(const GeoLossPdf& p) { return (1.0 - p.hoyt.q * p.hoyt.q) * p.varpi / (2.0 * p.hoyt.q); }

// Density of s = -ln(h/A0) = 2u^2/(k w^2).
double log_loss_density(double s, const GeoLossPdf& p) {
    const double b = hoyt_b(p);
    return p.varpi * std::exp(-p.hoyt.q * p.varpi * s) * numerics::bessel_i0e(b * s);
}

double log_loss_mass(double s_lo, double s_hi, const GeoLossPdf& p) {
    if (!(s_hi > s_lo)) return 0.0;
    auto f = [&p](double s) { return log_loss_density(s, p); };
    return numerics::integrate(f, s_lo, s_hi, 1e-12);
}

double log_ratio(double x, const GeoLossPdf& p) {
    if (x >= p.A0) return 0.0;
    if (x <= 0.0) return std::numeric_limits<double>::infinity();
    return -std::log(x / p.A0);
}

}  // namespace

PoseDistribution PoseDistribution::tracking(const geometry::Position& mu_r, double sigma_x,
                                            double sigma_y, double sigma_z, double sigma_theta,
                                            double sigma_phi) {
    PoseDistribution d;
    d.mu_r = mu_r;
    d.mu_omega = geometry::tracking_orientation(mu_r);
    d.sigma_x = sigma_x;
    d.sigma_y = sigma_y;
    d.sigma_z = sigma_z;
    d.sigma_theta = sigma_theta;
    d.sigma_phi = sigma_phi;
    check_sigmas(d);
    return d;
}

PoseDistribution PoseDistribution::tracking(const geometry::Position& mu_r, double sigma_p,
                                            double sigma_o) {
    return tracking(mu_r, sigma_p, sigma_p, sigma_p, sigma_o, sigma_o);
}

TrackingConstants tracking_constants(const PoseDistribution& d) {
    const double ct = std::cos(d.mu_omega.theta);
    const double sp = std::sin(d.mu_omega.phi);
    if (std::abs(ct) < kTrackingGuard || std::abs(sp) < kTrackingGuard) {
        throw DegenerateGeometry("tracking constants are not finite at this mean orientation");
    }
    const double tt = std::tan(d.mu_omega.theta);
    const double cot = std::cos(d.mu_omega.phi) / sp;
    const double mx = d.mu_r.rx;
    TrackingConstants c;
    c.c1 = -tt;
    c.c2 = -mx / (ct * ct);
    c.c3 = mx / (sp * sp * ct);
    c.c4 = -mx * cot * tt / ct;
    c.c5 = -cot / ct;
    return c;
}

numerics::SymMatrix2 covariance_sigma(const PoseDistribution& d) {
    check_sigmas(d);
    check_tracking(d);
    const TrackingConstants c = tracking_constants(d);
    const double vx = d.sigma_x * d.sigma_x;
    const double vy = d.sigma_y * d.sigma_y;
    const double vz = d.sigma_z * d.sigma_z;
    const double vt = d.sigma_theta * d.sigma_theta;
    const double vp = d.sigma_phi * d.sigma_phi;
    numerics::SymMatrix2 m;
    m.a11 = vy + c.c1 * c.c1 * vx + c.c2 * c.c2 * vt;
    m.a12 = c.c1 * c.c5 * vx + c.c2 * c.c4 * vt;
    m.a22 = vz + c.c3 * c.c3 * vp + c.c4 * c.c4 * vt + c.c5 * c.c5 * vx;
    return m;
}

HoytParams hoyt_params(const numerics::SymMatrix2& sigma) {
    if (sigma.a11 == 0.0 && sigma.a12 == 0.0 && sigma.a22 == 0.0) {
        throw InvalidArgument("hoyt_params: zero covariance has no distribution");
    }
    if (sigma.a11 < 0.0 || sigma.a22 < 0.0 ||
        sigma.determinant() < -1e-12 * sigma.a11 * sigma.a22) {
        throw InvalidArgument("hoyt_params: covariance is not positive semidefinite");
    }
    const numerics::EigenSym2 e = numerics::eig_sym2(sigma);
    HoytParams h;
    h.lambda1 = e.lambda1;
    h.lambda2 = std::max(e.lambda2, 0.0);
    h.q = std::sqrt(std::min(h.lambda1, h.lambda2) / std::max(h.lambda1, h.lambda2));
    h.omega = h.lambda1 + h.lambda2;
    return h;
}

GeoLossPdf make_geo_loss_pdf(const HoytParams& hoyt, double A0, double k_mean, double wL) {
    if (!(hoyt.q > 0.0)) {
        throw InvalidArgument("geo-loss density needs q > 0 (footprint jitter in both axes)");
    }
    GeoLossPdf p;
    p.hoyt = hoyt;
    p.A0 = A0;
    p.k_mean = k_mean;
    p.wL = wL;
    p.varpi = (1.0 + hoyt.q * hoyt.q) * k_mean * wL * wL / (4.0 * hoyt.q * hoyt.omega);
    return p;
}

GeoLossPdf geo_loss_pdf(const PoseDistribution& d, const beam::BeamParams& b,
                        const geoloss::DetectorParams& det) {
    const HoytParams h = hoyt_params(covariance_sigma(d));
    const geoloss::ApproxParams ap = geoloss::approx_params(d.mean_pose(), b, det);
    return make_geo_loss_pdf(h, ap.A0, ap.k_mean, ap.wL);
}

double pdf_hg(double x, const GeoLossPdf& p) {
    if (!(x > 0.0)) throw InvalidArgument("pdf_hg: x must be positive");
    if (x > p.A0) return 0.0;
    const double t = x / p.A0;
    if (t < 1e-300) return 0.0;
    // (x/A0)^(a-1) I0(b ln(A0/x)) = exp((1 - q varpi) s) i0e(b s) with s = ln(A0/x)
    const double s = -std::log(t);
    return p.varpi / p.A0 * std::exp((1.0 - p.hoyt.q * p.varpi) * s) *
           numerics::bessel_i0e(hoyt_b(p) * s);
}

double pdf_hg_rayleigh(double x, double varrho, double A0) {
    if (!(x > 0.0)) throw InvalidArgument("pdf_hg_rayleigh: x must be positive");
    if (!(varrho > 0.0)) throw InvalidArgument("pdf_hg_rayleigh: varrho must be positive");
    if (x > A0) return 0.0;
    const double t = x / A0;
    if (t < 1e-300) return 0.0;
    return varrho / A0 * std::pow(t, varrho - 1.0);
}

double rayleigh_parameter(double k_mean, double wL, double sigma_p, double sigma_o, double mu_x) {
    return k_mean * wL * wL / (4.0 * (sigma_p * sigma_p + mu_x * mu_x * sigma_o * sigma_o));
}

double cdf_hg(double x, const GeoLossPdf& p) {
    if (x <= 0.0) return 0.0;
    if (x >= p.A0) return 1.0;
    return log_loss_mass(log_ratio(x, p), std::numeric_limits<double>::infinity(), p);
}

double interval_probability(double lo, double hi, const GeoLossPdf& p) {
    if (!(hi > lo)) return 0.0;
    return log_loss_mass(log_ratio(hi, p), log_ratio(lo, p), p);
}

PoseNoise sample_noise(const PoseDistribution& d, random::CounterStream& rng) {
    // Always five draws so streams stay aligned across sigma settings.
    PoseNoise e;
    e.x = d.sigma_x * rng.normal();
    e.y = d.sigma_y * rng.normal();
    e.z = d.sigma_z * rng.normal();
    e.theta = d.sigma_theta * rng.normal();
    e.phi = d.sigma_phi * rng.normal();
    return e;
}

geometry::Pose perturbed_pose(const PoseDistribution& d, const PoseNoise& eps) noexcept {
    geometry::Pose p;
    p.position = {d.mu_r.rx + eps.x, d.mu_r.ry + eps.y, d.mu_r.rz + eps.z};
    p.orientation = {geometry::wrap_angle(d.mu_omega.theta + eps.theta), d.mu_omega.phi + eps.phi};
    return p;
}

geometry::Pose sample_pose(const PoseDistribution& d, random::CounterStream& rng) {
    return perturbed_pose(d, sample_noise(d, rng));
}

geometry::FootprintCenter linearized_footprint(const PoseDistribution& d, const PoseNoise& eps) {
    const TrackingConstants c = tracking_constants(d);
    return {eps.y + c.c1 * eps.x + c.c2 * eps.theta,
            eps.z + c.c3 * eps.phi + c.c4 * eps.theta + c.c5 * eps.x};
}

double sample_approx_loss(const GeoLossPdf& p, random::CounterStream& rng) {
    const double g1 = std::sqrt(p.hoyt.lambda1) * rng.normal();
    const double g2 = std::sqrt(p.hoyt.lambda2) * rng.normal();
    const double u2 = g1 * g1 + g2 * g2;
    return p.A0 * std::exp(-2.0 * u2 / (p.k_mean * p.wL * p.wL));
}

}  // namespace fso::stochastic

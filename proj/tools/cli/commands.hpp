#pragma once

#include "config.hpp"
#include "fso/montecarlo.hpp"
#include "fso/stochastic.hpp"
#include "report.hpp"

namespace fso::cli {

enum ExitCode : int { kOk = 0, kValidationFailure = 1, kConfigError = 2, kNumericalFailure = 3 };

// Deterministic losses (exact, bounds, approximations) over the alpha sweep,
// for the centred footprint and every configured offset.
Report cmd_bounds(const ExperimentConfig& cfg);

// Mean loss of the exact and approximate kernels on paired draws, swept over
// sigma (cm for position, mrad for orientation) and link distance.
Report cmd_average_loss(const ExperimentConfig& cfg, const montecarlo::RunOptions& run = {});

// Histogram of Monte Carlo losses against the analytic density.
Report cmd_pdf(const ExperimentConfig& cfg, const montecarlo::RunOptions& run = {});

struct ValidateOptions {
    bool flip_rho_yz = false;  // fault injection: wrong sign of the cross term
};

// Property checks; the report has one row per check. passed() tells the verdict.
Report cmd_validate(const ExperimentConfig& cfg, const ValidateOptions& opts = {});
bool validation_passed(const Report& r);

// Pose distribution described by the stability section at the configured geometry.
stochastic::PoseDistribution configured_distribution(const ExperimentConfig& cfg);

std::vector<double> default_alpha_sweep();
std::vector<double> default_sigma_sweep();

}  // namespace fso::cli

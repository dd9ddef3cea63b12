#pragma once

// Seeded Monte Carlo over the pose distribution. Trial i always consumes
// the random stream (seed, i), so results do not depend on scheduling.

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "fso/beam.hpp"
#include "fso/geoloss.hpp"
#include "fso/stochastic.hpp"

namespace fso::montecarlo {

enum class LossKernel { exact, approx_mean };

struct TrialPlan {
    std::uint64_t n_trials = 100000;
    std::uint64_t seed = 1;
    stochastic::PoseDistribution distribution;
    beam::BeamParams beam;
    geoloss::DetectorParams detector;
    LossKernel loss_kernel = LossKernel::exact;
    double rel_tol = geoloss::kDefaultRelTol;
};

struct LossStats {
    double mean_linear = 0.0;
    double mean_db = 0.0;     // dB of the mean
    double mean_of_db = 0.0;  // mean of per-sample dB (inf if any sample is 0)
    double std_linear = 0.0;
    std::uint64_t n = 0;
    std::map<double, double> quantiles;  // probability -> loss (linear)
};

struct TrialResult {
    std::vector<double> samples;
    LossStats stats;
    std::uint64_t degenerate_trials = 0;
};

struct RunOptions {
    // 0 picks FSO_GEOLOSS_THREADS, else the hardware concurrency.
    unsigned threads = 0;
};

unsigned resolve_threads(unsigned requested);

TrialResult run_trials(const TrialPlan& plan, const RunOptions& opts = {});

LossStats summarize(std::span<const double> samples);

struct Histogram {
    std::vector<double> edges;
    std::vector<std::uint64_t> counts;
    std::uint64_t total = 0;  // samples inside [edges.front(), edges.back()]
    std::uint64_t underflow = 0;
    std::uint64_t overflow = 0;
};

Histogram build_histogram(std::span<const double> samples, std::size_t n_bins, double lo, double hi);

struct GofResult {
    double statistic = 0.0;
    std::size_t dof = 0;
    double p_value = 0.0;
    std::size_t categories = 0;  // after merging sparse bins
};

// Pearson chi-square of a histogram against pdf_hg. Adjacent bins are merged
// until each expected count is at least min_expected.
GofResult chi_square_gof(const Histogram& h, const stochastic::GeoLossPdf& pdf,
                         double min_expected = 5.0);

// Chi-square survival function.
double chi_square_sf(double statistic, std::size_t dof);

// Spread of the quantities the analytic model freezes at the mean pose.
struct FrozenParameterDiagnostic {
    double cv_A0 = 0.0;
    double cv_k_mean = 0.0;
    double cv_u_squared = 0.0;
};

FrozenParameterDiagnostic frozen_parameter_diagnostic(const TrialPlan& plan);

}  // namespace fso::montecarlo

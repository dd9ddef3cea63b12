#include "fso/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <mutex>
#include <string>
#include <thread>

#include <boost/math/special_functions/gamma.hpp>

#include "fso/errors.hpp"
#include "fso/numerics.hpp"
#include "fso/random.hpp"

namespace fso::montecarlo {

namespace {

constexpr std::uint64_t kChunk = 256;

double evaluate_kernel(const TrialPlan& plan, const geometry::Pose& pose) {
    switch (plan.loss_kernel) {
        case LossKernel::exact:
            return geoloss::exact_loss(pose, plan.beam, plan.detector, plan.rel_tol);
        case LossKernel::approx_mean:
            return geoloss::approx_mean(geoloss::approx_params(pose, plan.beam, plan.detector));
    }
    return 0.0;
}

// Runs body(i) for every i in [0, n) on `threads` workers. The first failure
// (lowest index seen) is rethrown after all workers stop.
template <class Body>
void parallel_for(std::uint64_t n, unsigned threads, Body body) {
    std::atomic<std::uint64_t> next{0};
    std::atomic<bool> stop{false};
    std::mutex error_mutex;
    std::exception_ptr error;
    std::uint64_t error_index = std::numeric_limits<std::uint64_t>::max();

    auto worker = [&] {
        while (!stop.load(std::memory_order_relaxed)) {
            const std::uint64_t begin = next.fetch_add(kChunk, std::memory_order_relaxed);
            if (begin >= n) return;
            const std::uint64_t end = std::min(n, begin + kChunk);
            for (std::uint64_t i = begin; i < end; ++i) {
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (i < error_index) {
                        error_index = i;
                        error = std::current_exception();
                    }
                    stop.store(true, std::memory_order_relaxed);
                    return;
                }
            }
        }
    };

    const unsigned n_workers =
        static_cast<unsigned>(std::min<std::uint64_t>(threads, (n + kChunk - 1) / kChunk));
    if (n_workers <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(n_workers);
        for (unsigned t = 0; t < n_workers; ++t) pool.emplace_back(worker);
    }
    if (error) std::rethrow_exception(error);
}

double quantile_sorted(const std::vector<double>& sorted, double prob) {
    const double pos = prob * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

}  // namespace

unsigned resolve_threads(unsigned requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("FSO_GEOLOSS_THREADS")) {
        char* end = nullptr;
        const unsigned long v = std::strtoul(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(std::min(v, 1024ul));
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

LossStats summarize(std::span<const double> samples) {
    if (samples.empty()) throw InvalidArgument("summarize: no samples");
    LossStats s;
    s.n = samples.size();
    const double n = static_cast<double>(samples.size());
    s.mean_linear = numerics::pairwise_sum(samples) / n;
    s.mean_db = geoloss::loss_db(s.mean_linear);

    std::vector<double> work(samples.size());
    // shifted by the first sample so a constant sequence gives exactly zero
    const double shift = samples[0];
    for (std::size_t i = 0; i < samples.size(); ++i) work[i] = samples[i] - shift;
    const double mean_shifted = numerics::pairwise_sum(work) / n;
    for (double& d : work) d = (d - mean_shifted) * (d - mean_shifted);
    s.std_linear = samples.size() > 1 ? std::sqrt(numerics::pairwise_sum(work) / (n - 1.0)) : 0.0;

    for (std::size_t i = 0; i < samples.size(); ++i) work[i] = geoloss::loss_db(samples[i]);
    s.mean_of_db = numerics::pairwise_sum(work) / n;

    work.assign(samples.begin(), samples.end());
    std::sort(work.begin(), work.end());
    for (double prob : {0.01, 0.05, 0.25, 0.5, 0.75, 0.95, 0.99}) {
        s.quantiles[prob] = quantile_sorted(work, prob);
    }
    return s;
}

TrialResult run_trials(const TrialPlan& plan, const RunOptions& opts) {
    if (plan.n_trials < 1) throw InvalidArgument("run_trials: n_trials must be >= 1");
    TrialResult result;
    result.samples.assign(plan.n_trials, 0.0);
    std::vector<std::uint8_t> degenerate(plan.n_trials, 0);

    parallel_for(plan.n_trials, resolve_threads(opts.threads), [&](std::uint64_t i) {
        random::CounterStream rng(plan.seed, i);
        const geometry::Pose pose = stochastic::sample_pose(plan.distribution, rng);
        try {
            result.samples[i] = evaluate_kernel(plan, pose);
        } catch (const DegenerateGeometry&) {
            result.samples[i] = 0.0;
            degenerate[i] = 1;
        } catch (const QuadratureFailure& e) {
            throw TrialFailure("trial " + std::to_string(i) + ": " + e.what(), i);
        }
    });

    result.degenerate_trials =
        static_cast<std::uint64_t>(std::count(degenerate.begin(), degenerate.end(), 1));
    result.stats = summarize(result.samples);
    return result;
}

Histogram build_histogram(std::span<const double> samples, std::size_t n_bins, double lo, double hi) {
    if (samples.empty()) throw InvalidArgument("build_histogram: no samples");
    if (n_bins < 1) throw InvalidArgument("build_histogram: n_bins must be >= 1");
    if (!(lo < hi)) throw InvalidArgument("build_histogram: empty range");
    Histogram h;
    h.edges.resize(n_bins + 1);
    const double width = (hi - lo) / static_cast<double>(n_bins);
    for (std::size_t i = 0; i <= n_bins; ++i) h.edges[i] = lo + width * static_cast<double>(i);
    h.edges.back() = hi;
    h.counts.assign(n_bins, 0);
    for (double x : samples) {
        if (x < lo) {
            ++h.underflow;
        } else if (x > hi || std::isnan(x)) {
            ++h.overflow;
        } else {
            auto bin = static_cast<std::size_t>((x - lo) / width);
            bin = std::min(bin, n_bins - 1);
            // keep bin membership consistent with the stored edges
            while (bin > 0 && x < h.edges[bin]) --bin;
            while (bin + 1 < n_bins && x >= h.edges[bin + 1]) ++bin;
            ++h.counts[bin];
            ++h.total;
        }
    }
    return h;
}

double chi_square_sf(double statistic, std::size_t dof) {
    if (dof == 0) throw InvalidArgument("chi_square_sf: dof must be positive");
    if (!(statistic > 0.0)) return 1.0;
    if (!std::isfinite(statistic)) return 0.0;
    return boost::math::gamma_q(0.5 * static_cast<double>(dof), 0.5 * statistic);
}

GofResult chi_square_gof(const Histogram& h, const stochastic::GeoLossPdf& pdf, double min_expected) {
    const double n_all = static_cast<double>(h.total + h.underflow + h.overflow);
    if (n_all <= 0.0) throw InvalidArgument("chi_square_gof: empty histogram");

    struct Category {
        double observed = 0.0;
        double expected = 0.0;
    };
    // Out-of-range mass extends the first and last bins, so observed and
    // expected totals always agree.
    const double lo = h.edges.front();
    const double hi = h.edges.back();
    std::vector<Category> merged;
    Category acc{static_cast<double>(h.underflow), n_all * stochastic::cdf_hg(lo, pdf)};
    for (std::size_t i = 0; i < h.counts.size(); ++i) {
        acc.observed += static_cast<double>(h.counts[i]);
        acc.expected += n_all * stochastic::interval_probability(h.edges[i], h.edges[i + 1], pdf);
        if (i + 1 == h.counts.size()) {
            acc.observed += static_cast<double>(h.overflow);
            acc.expected += n_all * (1.0 - stochastic::cdf_hg(hi, pdf));
        }
        if (acc.expected >= min_expected) {
            merged.push_back(acc);
            acc = {};
        }
    }
    if (acc.observed > 0.0 || acc.expected > 0.0) {
        if (merged.empty()) {
            merged.push_back(acc);
        } else {
            merged.back().observed += acc.observed;
            merged.back().expected += acc.expected;
        }
    }

    if (merged.size() < 2 || merged.front().expected < min_expected) {
        throw InconclusiveTest(
            "chi_square_gof: fewer than two categories reach the minimum expected count; "
            "increase the number of trials");
    }

    GofResult r;
    r.categories = merged.size();
    r.dof = merged.size() - 1;
    for (const Category& c : merged) {
        if (c.expected <= 0.0) {
            r.statistic = std::numeric_limits<double>::infinity();
            break;
        }
        const double d = c.observed - c.expected;
        r.statistic += d * d / c.expected;
    }
    r.p_value = chi_square_sf(r.statistic, r.dof);
    return r;
}

FrozenParameterDiagnostic frozen_parameter_diagnostic(const TrialPlan& plan) {
    if (plan.n_trials < 2) throw InvalidArgument("frozen_parameter_diagnostic: need >= 2 trials");
    const std::size_t n = plan.n_trials;
    std::vector<double> a0(n), k(n), u2(n);
    for (std::uint64_t i = 0; i < n; ++i) {
        random::CounterStream rng(plan.seed, i);
        const geometry::Pose pose = stochastic::sample_pose(plan.distribution, rng);
        const geoloss::ApproxParams ap = geoloss::approx_params(pose, plan.beam, plan.detector);
        a0[i] = ap.A0;
        k[i] = ap.k_mean;
        u2[i] = ap.u * ap.u;
    }
    auto cv = [](std::vector<double>& v) {
        const double mean = numerics::pairwise_sum(v) / static_cast<double>(v.size());
        for (double& x : v) x = (x - mean) * (x - mean);
        const double var = numerics::pairwise_sum(v) / static_cast<double>(v.size() - 1);
        return mean != 0.0 ? std::sqrt(var) / std::abs(mean) : 0.0;
    };
    return {cv(a0), cv(k), cv(u2)};
}

}  // namespace fso::montecarlo

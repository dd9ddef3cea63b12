#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "fso/geoloss.hpp"
#include "fso/montecarlo.hpp"
#include "fso/random.hpp"

using namespace fso::montecarlo;
using fso::stochastic::PoseDistribution;
using std::numbers::pi;

namespace {

const auto kOffAxisMean = fso::geometry::spherical_mean_position(1000, pi / 8, 5 * pi / 8);

TrialPlan plan_for(const PoseDistribution& d, std::uint64_t n, LossKernel k = LossKernel::exact) {
    TrialPlan p;
    p.n_trials = n;
    p.seed = 2024;
    p.distribution = d;
    p.loss_kernel = k;
    return p;
}

// Histogram of samples drawn from the analytic model itself.
Histogram synthetic_histogram(const fso::stochastic::GeoLossPdf& pdf, int n, std::uint64_t seed,
                              std::size_t bins) {
    std::vector<double> s(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        fso::random::CounterStream rng(seed, static_cast<std::uint64_t>(i));
        s[static_cast<std::size_t>(i)] = fso::stochastic::sample_approx_loss(pdf, rng);
    }
    const double lo = *std::min_element(s.begin(), s.end());
    return build_histogram(s, bins, lo, pdf.A0);
}

}  // namespace

TEST_SUITE("montecarlo") {

TEST_CASE("zero sigmas reproduce the deterministic loss") {
    const auto d = PoseDistribution::tracking(kOffAxisMean, 0.0, 0.0);
    const auto r = run_trials(plan_for(d, 500));
    const double want = fso::geoloss::exact_loss(d.mean_pose(), {}, {});
    for (double s : r.samples) CHECK(s == want);
    CHECK(r.stats.std_linear == 0.0);
    CHECK(r.stats.mean_linear == doctest::Approx(want).epsilon(1e-15));
    CHECK(r.stats.n == 500);
}

TEST_CASE("samples are identical across thread counts") {
    const auto d = PoseDistribution::tracking(kOffAxisMean, 0.01, 2e-4);
    for (LossKernel k : {LossKernel::exact, LossKernel::approx_mean}) {
        const auto plan = plan_for(d, 3001, k);
        const auto one = run_trials(plan, {1});
        for (unsigned t : {2u, 4u, 8u}) {
            const auto many = run_trials(plan, {t});
            CHECK(many.samples == one.samples);
            CHECK(many.stats.mean_linear == one.stats.mean_linear);
            CHECK(many.stats.std_linear == one.stats.std_linear);
            CHECK(many.stats.quantiles == one.stats.quantiles);
        }
    }
}

TEST_CASE("trial i depends only on (seed, i)") {
    const auto d = PoseDistribution::tracking(kOffAxisMean, 0.01, 2e-4);
    const auto small = run_trials(plan_for(d, 100));
    const auto large = run_trials(plan_for(d, 1000));
    for (std::size_t i = 0; i < 100; ++i) CHECK(small.samples[i] == large.samples[i]);
}

TEST_CASE("thread count resolution") {
    CHECK(resolve_threads(3) == 3);
    setenv("FSO_GEOLOSS_THREADS", "5", 1);
    CHECK(resolve_threads(0) == 5);
    unsetenv("FSO_GEOLOSS_THREADS");
    CHECK(resolve_threads(0) >= 1);
}

TEST_CASE("quadrature failures abort with the lowest failing trial index") {
    // a 100 m aperture with footprints metres off centre cannot be resolved at
    // the largest quadrature order
    const auto d = PoseDistribution::tracking(kOffAxisMean, 10.0, 0.0);
    auto plan = plan_for(d, 64);
    plan.detector.a = 100.0;
    auto failing_index = [&](unsigned threads) -> std::uint64_t {
        try {
            run_trials(plan, {threads});
        } catch (const fso::TrialFailure& e) {
            return e.trial_index();
        }
        FAIL("expected a trial failure");
        return 0;
    };
    const auto serial = failing_index(1);
    CHECK(failing_index(4) == serial);
    CHECK(failing_index(8) == serial);
}

TEST_CASE("approx kernel tracks the exact kernel at the off-axis reference point") {
    const auto d = PoseDistribution::tracking(kOffAxisMean, 0.0, 5e-4);
    const auto ex = run_trials(plan_for(d, 20000, LossKernel::exact));
    const auto ap = run_trials(plan_for(d, 20000, LossKernel::approx_mean));
    CHECK(std::abs(ex.stats.mean_db - ap.stats.mean_db) <= 0.5);
}

TEST_CASE("mean loss grows with distance and orientation noise is worse than position noise") {
    for (double sigma : {0.2, 0.5, 1.0}) {
        double prev = 0.0;
        for (double L : {800.0, 1000.0, 1500.0}) {
            const auto mu = fso::geometry::spherical_mean_position(L, pi / 8, 5 * pi / 8);
            const double db = run_trials(plan_for(PoseDistribution::tracking(mu, 0.0, sigma * 1e-3), 4000))
                                  .stats.mean_db;
            CHECK(db > prev);
            prev = db;
        }
        const double pos = run_trials(plan_for(PoseDistribution::tracking(kOffAxisMean, sigma * 1e-2, 0.0), 4000))
                               .stats.mean_db;
        const double ori = run_trials(plan_for(PoseDistribution::tracking(kOffAxisMean, 0.0, sigma * 1e-3), 4000))
                               .stats.mean_db;
        CHECK(ori >= pos);
    }
}

TEST_CASE("summarize") {
    std::vector<double> v{0.1, 0.2, 0.3, 0.4};
    const auto s = summarize(v);
    CHECK(s.mean_linear == doctest::Approx(0.25));
    CHECK(s.mean_db == doctest::Approx(-10 * std::log10(0.25)));
    CHECK(s.std_linear > 0.0);
    double prev = -1.0;
    for (const auto& [p, q] : s.quantiles) {
        CHECK(q >= prev);
        prev = q;
    }
    v.push_back(0.0);
    CHECK(std::isinf(summarize(v).mean_of_db));
}

TEST_CASE("build_histogram examples") {
    std::vector<double> u(100000);
    fso::random::CounterStream rng(1, 1);
    for (double& x : u) x = rng.uniform();
    const auto h = build_histogram(u, 20, 0.0, 1.0);
    CHECK(h.counts.size() + 1 == h.edges.size());
    std::uint64_t sum = 0;
    const double p = 1.0 / 20, n = 100000;
    for (auto c : h.counts) {
        sum += c;
        CHECK(std::abs(c - n * p) < 5 * std::sqrt(n * p * (1 - p)));
    }
    CHECK(sum == h.total);

    const std::vector<double> same(50, 0.3);
    const auto one = build_histogram(same, 10, 0.0, 1.0);
    CHECK(std::count(one.counts.begin(), one.counts.end(), 0u) == 9);
    CHECK(one.total == 50);

    const auto edge = build_histogram(std::vector<double>{-1.0, 0.0, 0.5, 1.0, 2.0}, 4, 0.0, 1.0);
    CHECK(edge.underflow == 1);
    CHECK(edge.overflow == 1);
    CHECK(edge.total == 3);
    CHECK(edge.counts.back() == 1);

    CHECK_THROWS_AS(build_histogram(std::vector<double>{}, 5, 0.0, 1.0), fso::InvalidArgument);
    CHECK_THROWS_AS(build_histogram(same, 5, 1.0, 1.0), fso::InvalidArgument);
}

TEST_CASE("chi-square null calibration") {
    const auto d = PoseDistribution::tracking(kOffAxisMean, 0.0, 1e-4);
    const auto pdf = fso::stochastic::geo_loss_pdf(d, {}, {});
    int pass = 0;
    for (std::uint64_t run = 0; run < 100; ++run) {
        const auto g = chi_square_gof(synthetic_histogram(pdf, 20000, 1000 + run, 40), pdf);
        if (g.p_value > 0.01) ++pass;
    }
    CHECK(pass >= 98);
}

TEST_CASE("chi-square detects a doubled orientation sigma") {
    const auto truth = PoseDistribution::tracking(kOffAxisMean, 0.0, 1e-4);
    const auto wrong = PoseDistribution::tracking(kOffAxisMean, 0.0, 2e-4);
    const auto pdf = fso::stochastic::geo_loss_pdf(truth, {}, {});
    const auto samples = run_trials(plan_for(wrong, 20000)).samples;
    const double lo = *std::min_element(samples.begin(), samples.end());
    const double hi = std::max(*std::max_element(samples.begin(), samples.end()), pdf.A0);
    const auto g = chi_square_gof(build_histogram(samples, 50, lo, hi), pdf);
    CHECK(g.p_value < 0.001);
}

TEST_CASE("chi-square bookkeeping") {
    const auto d = PoseDistribution::tracking(kOffAxisMean, 0.0, 1e-4);
    const auto pdf = fso::stochastic::geo_loss_pdf(d, {}, {});
    const auto h = synthetic_histogram(pdf, 5000, 7, 30);
    const auto g = chi_square_gof(h, pdf);
    CHECK(g.dof + 1 == g.categories);
    CHECK(g.categories <= 30);
    CHECK(g.p_value >= 0.0);
    CHECK(g.p_value <= 1.0);
    CHECK_THROWS_AS(chi_square_gof(synthetic_histogram(pdf, 6, 7, 30), pdf), fso::InconclusiveTest);
    CHECK(chi_square_sf(0.0, 3) == 1.0);
    CHECK(chi_square_sf(7.814727903251178, 3) == doctest::Approx(0.05).epsilon(1e-9));
}

}  // TEST_SUITE

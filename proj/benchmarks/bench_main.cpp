#include <numbers>

#include <benchmark/benchmark.h>

#include "fso/geoloss.hpp"
#include "fso/montecarlo.hpp"
#include "fso/numerics.hpp"

using namespace fso;
using std::numbers::pi;

namespace {

geometry::Pose tracked_pose(double alpha, double beta, double fy) {
    const auto mu = geometry::spherical_mean_position(1000, alpha, beta);
    return {{mu.rx, mu.ry + fy, mu.rz}, geometry::tracking_orientation(mu)};
}

void BM_Erf(benchmark::State& state) {
    double x = 0.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(numerics::erf(x));
        x = x > 5.0 ? 0.0 : x + 0.01;
    }
}
BENCHMARK(BM_Erf);

void BM_BesselI0e(benchmark::State& state) {
    double x = 0.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(numerics::bessel_i0e(x));
        x = x > 50.0 ? 0.0 : x + 0.1;
    }
}
BENCHMARK(BM_BesselI0e);

// argument: footprint offset in mm
void BM_ExactLoss(benchmark::State& state) {
    const auto p = tracked_pose(pi / 8, 5 * pi / 8, state.range(0) * 1e-3);
    const beam::BeamParams b;
    const geoloss::DetectorParams d;
    geoloss::exact_loss(p, b, d);  // builds the cached quadrature rules
    for (auto _ : state) benchmark::DoNotOptimize(geoloss::exact_loss(p, b, d));
}
BENCHMARK(BM_ExactLoss)->Arg(0)->Arg(50)->Arg(200);

void BM_ApproxMean(benchmark::State& state) {
    const auto p = tracked_pose(pi / 8, 5 * pi / 8, 0.05);
    const beam::BeamParams b;
    const geoloss::DetectorParams d;
    for (auto _ : state) benchmark::DoNotOptimize(geoloss::approx_mean(geoloss::approx_params(p, b, d)));
}
BENCHMARK(BM_ApproxMean);

void BM_RunTrials(benchmark::State& state) {
    montecarlo::TrialPlan plan;
    plan.n_trials = 2000;
    plan.distribution = stochastic::PoseDistribution::tracking(
        geometry::spherical_mean_position(1000, pi / 8, 5 * pi / 8), 0.01, 2e-4);
    plan.loss_kernel = state.range(0) == 0 ? montecarlo::LossKernel::exact : montecarlo::LossKernel::approx_mean;
    for (auto _ : state) benchmark::DoNotOptimize(montecarlo::run_trials(plan, {1}));
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(plan.n_trials));
}
BENCHMARK(BM_RunTrials)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();

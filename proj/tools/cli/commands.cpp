#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fso/geoloss.hpp"
#include "fso/geometry.hpp"

namespace fso::cli {

namespace {

constexpr double kPi = std::numbers::pi;

geometry::Position mean_position(const ExperimentConfig& cfg, double range) {
    return geometry::spherical_mean_position(range, cfg.geometry.alpha_rad, cfg.geometry.beta_rad);
}

std::string kernel_name(montecarlo::LossKernel k) {
    return k == montecarlo::LossKernel::exact ? "exact" : "approx_mean";
}

}  // namespace

std::vector<double> default_alpha_sweep() {
    std::vector<double> v;
    for (int i = 0; i <= 8; ++i) v.push_back(i * kPi / 32.0);
    return v;
}

std::vector<double> default_sigma_sweep() { return {0.2, 0.4, 0.6, 0.8, 1.0}; }

stochastic::PoseDistribution configured_distribution(const ExperimentConfig& cfg) {
    const auto& s = cfg.stability;
    return stochastic::PoseDistribution::tracking(
        mean_position(cfg, cfg.geometry.range_m), s.sigma_x_m.value_or(s.sigma_p_m),
        s.sigma_y_m.value_or(s.sigma_p_m), s.sigma_z_m.value_or(s.sigma_p_m),
        s.sigma_theta_rad.value_or(s.sigma_o_rad), s.sigma_phi_rad.value_or(s.sigma_o_rad));
}

Report cmd_bounds(const ExperimentConfig& cfg) {
    validate_config(cfg);
    if (!cfg.sweep.variable.empty() && cfg.sweep.variable != "alpha") {
        throw ConfigError("sweep.variable: bounds sweeps alpha, got '" + cfg.sweep.variable + "'");
    }
    std::vector<double> alphas = cfg.sweep.values.empty() ? default_alpha_sweep() : cfg.sweep.values;
    std::sort(alphas.begin(), alphas.end());

    std::vector<geometry::FootprintCenter> offsets{{0.0, 0.0}};
    for (const auto& f : cfg.offsets) {
        if (std::find(offsets.begin(), offsets.end(), f) == offsets.end()) offsets.push_back(f);
    }

    Report r;
    r.command = "bounds";
    r.config = cfg;
    r.add_meta("beta_rad", cfg.geometry.beta_rad);
    r.add_meta("R_m", cfg.geometry.range_m);

    Table t;
    t.name = "bounds";
    t.columns = {{"alpha", "rad"},        {"offset_fy", "m"},  {"offset_fz", "m"},
                 {"psi", "rad"},          {"wL", "m"},         {"exact", "dB"},
                 {"bound_lower", "dB"},   {"bound_upper", "dB"}, {"approx_low", "dB"},
                 {"approx_upp", "dB"},    {"approx_mean", "dB"}, {"exact_linear", ""}};

    for (double alpha : alphas) {
        ExperimentConfig at = cfg;
        at.geometry.alpha_rad = alpha;
        const geometry::Position mu = mean_position(at, cfg.geometry.range_m);
        const geometry::Orientation o = geometry::tracking_orientation(mu);
        for (const auto& f : offsets) {
            const geometry::Pose p{{mu.rx, mu.ry + f.fy, mu.rz + f.fz}, o};
            const auto loss = geoloss::evaluate_all(p, cfg.beam, cfg.detector, cfg.rel_tol);
            const double psi = geometry::incidence_angle(o);
            t.rows.push_back({alpha, f.fy, f.fz, psi, beam::beam_width(cfg.beam, p.position.norm()),
                              geoloss::loss_db(loss.exact), geoloss::loss_db(loss.lower),
                              geoloss::loss_db(loss.upper), geoloss::loss_db(loss.approx_low),
                              geoloss::loss_db(loss.approx_upp), geoloss::loss_db(loss.approx_mean),
                              loss.exact});
        }
    }
    r.tables.push_back(std::move(t));
    return r;
}

Report cmd_average_loss(const ExperimentConfig& cfg, const montecarlo::RunOptions& run) {
    validate_config(cfg);
    if (!cfg.sweep.variable.empty() && cfg.sweep.variable != "sigma") {
        throw ConfigError("sweep.variable: average-loss sweeps sigma, got '" + cfg.sweep.variable + "'");
    }
    if (cfg.sweep.sigma_kinds.empty()) throw ConfigError("sweep.sigma_kinds: must not be empty");
    std::vector<double> sigmas = cfg.sweep.values.empty() ? default_sigma_sweep() : cfg.sweep.values;
    std::sort(sigmas.begin(), sigmas.end());
    const std::vector<double> distances =
        cfg.sweep.distances_m.empty() ? std::vector<double>{cfg.geometry.range_m} : cfg.sweep.distances_m;

    Report r;
    r.command = "average-loss";
    r.config = cfg;
    r.add_meta("n_trials", std::to_string(cfg.n_trials));

    Table t;
    t.name = "average_loss";
    t.columns = {{"sigma_kind", ""},         {"sigma", ""},
                 {"sigma_unit", ""},         {"L", "m"},
                 {"exact_mean", "dB"},       {"approx_mean", "dB"},
                 {"difference", "dB"},       {"exact_mean_linear", ""},
                 {"approx_mean_linear", ""}, {"exact_mean_of_db", "dB"},
                 {"degenerate_trials", ""}};

    for (SigmaKind kind : cfg.sweep.sigma_kinds) {
        for (double L : distances) {
            for (double sigma : sigmas) {
                const bool pos = kind == SigmaKind::position;
                const double sigma_p = pos ? sigma * 1e-2 : 0.0;
                const double sigma_o = pos ? 0.0 : sigma * 1e-3;

                montecarlo::TrialPlan plan;
                plan.n_trials = cfg.n_trials;
                plan.seed = cfg.seed;
                plan.distribution =
                    stochastic::PoseDistribution::tracking(mean_position(cfg, L), sigma_p, sigma_o);
                plan.beam = cfg.beam;
                plan.detector = cfg.detector;
                plan.rel_tol = cfg.rel_tol;

                plan.loss_kernel = montecarlo::LossKernel::exact;
                const auto exact = montecarlo::run_trials(plan, run);
                plan.loss_kernel = montecarlo::LossKernel::approx_mean;
                const auto approx = montecarlo::run_trials(plan, run);

                t.rows.push_back({std::string(to_string(kind)), sigma, std::string(pos ? "cm" : "mrad"),
                                  L, exact.stats.mean_db, approx.stats.mean_db,
                                  exact.stats.mean_db - approx.stats.mean_db, exact.stats.mean_linear,
                                  approx.stats.mean_linear, exact.stats.mean_of_db,
                                  static_cast<std::int64_t>(exact.degenerate_trials +
                                                            approx.degenerate_trials)});
            }
        }
    }
    r.tables.push_back(std::move(t));
    return r;
}

Report cmd_pdf(const ExperimentConfig& cfg, const montecarlo::RunOptions& run) {
    validate_config(cfg);
    montecarlo::TrialPlan plan;
    plan.n_trials = cfg.n_trials;
    plan.seed = cfg.seed;
    plan.distribution = configured_distribution(cfg);
    plan.beam = cfg.beam;
    plan.detector = cfg.detector;
    plan.rel_tol = cfg.rel_tol;
    plan.loss_kernel = montecarlo::LossKernel::exact;

    const auto pdf = stochastic::geo_loss_pdf(plan.distribution, cfg.beam, cfg.detector);
    const auto result = montecarlo::run_trials(plan, run);
    const auto [min_it, max_it] = std::minmax_element(result.samples.begin(), result.samples.end());
    const double lo = *min_it;
    double hi = std::max(*max_it, pdf.A0);
    if (!(hi > lo)) hi = lo + std::max(1e-12, 1e-9 * std::abs(lo));
    const auto hist = montecarlo::build_histogram(result.samples, cfg.pdf_bins, lo, hi);

    Report r;
    r.command = "pdf";
    r.config = cfg;
    r.add_meta("kernel", kernel_name(plan.loss_kernel));
    r.add_meta("n_trials", std::to_string(cfg.n_trials));
    r.add_meta("A0", pdf.A0);
    r.add_meta("k_mean", pdf.k_mean);
    r.add_meta("wL_m", pdf.wL);
    r.add_meta("hoyt_q", pdf.hoyt.q);
    r.add_meta("hoyt_omega_m2", pdf.hoyt.omega);
    r.add_meta("varpi", pdf.varpi);
    r.add_meta("mean_loss_dB", result.stats.mean_db);
    r.add_meta("loss_p99_dB", geoloss::loss_db(result.stats.quantiles.at(0.01)));
    r.add_meta("samples_above_A0",
               std::to_string(std::count_if(result.samples.begin(), result.samples.end(),
                                            [&](double x) { return x > pdf.A0; })));
    r.add_meta("degenerate_trials", std::to_string(result.degenerate_trials));
    try {
        const auto gof = montecarlo::chi_square_gof(hist, pdf);
        r.add_meta("chi2", gof.statistic);
        r.add_meta("chi2_dof", std::to_string(gof.dof));
        r.add_meta("chi2_categories", std::to_string(gof.categories));
        r.add_meta("chi2_p_value", gof.p_value);
    } catch (const InconclusiveTest& e) {
        r.add_meta("chi2", std::string("inconclusive: ") + e.what());
    }

    Table t;
    t.name = "histogram";
    t.columns = {{"bin_lo", ""},           {"bin_hi", ""},
                 {"count", ""},            {"empirical_density", ""},
                 {"analytic_density", ""}, {"analytic_bin_density", ""}};
    const double n = static_cast<double>(result.samples.size());
    for (std::size_t i = 0; i < hist.counts.size(); ++i) {
        const double a = hist.edges[i];
        const double b = hist.edges[i + 1];
        const double width = b - a;
        const double mid = 0.5 * (a + b);
        t.rows.push_back({a, b, static_cast<std::int64_t>(hist.counts[i]),
                          static_cast<double>(hist.counts[i]) / (n * width),
                          stochastic::pdf_hg(mid, pdf),
                          stochastic::interval_probability(a, b, pdf) / width});
    }
    r.tables.push_back(std::move(t));

    Table q;
    q.name = "quantiles";
    q.columns = {{"probability", ""}, {"loss_linear", ""}, {"loss", "dB"}};
    for (const auto& [prob, value] : result.stats.quantiles) {
        q.rows.push_back({prob, value, geoloss::loss_db(value)});
    }
    r.tables.push_back(std::move(q));
    return r;
}

}  // namespace fso::cli

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "commands.hpp"

namespace {

struct Options {
    std::string config_path;
    std::string out_path;
    std::string format;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> trials;
    std::optional<double> tol;
    unsigned threads = 0;
    std::vector<std::string> overrides;
    bool flip_rho_yz = false;
};

void add_common(CLI::App* cmd, Options& o) {
    cmd->add_option("-c,--config", o.config_path, "Experiment config file");
    cmd->add_option("-o,--out", o.out_path, "Output file (default: output.path or stdout)");
    cmd->add_option("-f,--format", o.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--seed", o.seed, "Monte Carlo seed");
    cmd->add_option("--trials", o.trials, "Monte Carlo trials per point");
    cmd->add_option("--tol", o.tol, "Quadrature relative tolerance");
    cmd->add_option("--threads", o.threads,
                    "Worker threads (0: FSO_GEOLOSS_THREADS or hardware concurrency)");
    cmd->add_option("--set", o.overrides, "Override a config key (key=value), repeatable");
}

fso::cli::ExperimentConfig build_config(const Options& o) {
    using namespace fso::cli;
    ExperimentConfig cfg = o.config_path.empty() ? ExperimentConfig{} : load_config(o.config_path);
    for (const auto& s : o.overrides) apply_override(cfg, s);
    if (o.seed) cfg.seed = *o.seed;
    if (o.trials) cfg.n_trials = *o.trials;
    if (o.tol) cfg.rel_tol = *o.tol;
    if (!o.format.empty()) apply_override(cfg, "output.format=" + o.format);
    if (!o.out_path.empty()) cfg.output_path = o.out_path;
    validate_config(cfg);
    return cfg;
}

void emit(const fso::cli::Report& r) {
    const std::string text = fso::cli::render(r, r.config.format);
    if (r.config.output_path.empty() || r.config.output_path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(r.config.output_path, std::ios::binary);
    if (!out) throw fso::cli::ConfigError("output.path: cannot write " + r.config.output_path);
    out << text;
}

}  // namespace

int main(int argc, char** argv) {
    using namespace fso::cli;
    CLI::App app{"Geometric loss of oblique FSO links with pointing error"};
    app.set_version_flag("--version", std::string(kToolName) + " " + kToolVersion);
    app.require_subcommand(1);

    Options o;
    auto* bounds = app.add_subcommand("bounds", "Exact loss, bounds and approximations versus alpha");
    auto* average = app.add_subcommand("average-loss", "Mean loss versus orientation / position deviation");
    auto* pdf = app.add_subcommand("pdf", "Loss histogram against the analytic density");
    auto* validate = app.add_subcommand("validate", "Run the numerical property checks");
    for (auto* cmd : {bounds, average, pdf, validate}) add_common(cmd, o);
    validate->add_flag("--inject-rho-yz-flip", o.flip_rho_yz,
                       "Fault injection: flip the sign of the cross term in the exact integrand");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfigError;
    }

    try {
        const ExperimentConfig cfg = build_config(o);
        const fso::montecarlo::RunOptions run{o.threads};
        if (bounds->parsed()) {
            emit(cmd_bounds(cfg));
        } else if (average->parsed()) {
            emit(cmd_average_loss(cfg, run));
        } else if (pdf->parsed()) {
            emit(cmd_pdf(cfg, run));
        } else {
            const Report r = cmd_validate(cfg, {o.flip_rho_yz});
            emit(r);
            if (!validation_passed(r)) {
                std::cerr << "validation failed:";
                for (const auto& [k, v] : r.metadata) {
                    if (k == "failures") std::cerr << ' ' << v;
                }
                std::cerr << '\n';
                return kValidationFailure;
            }
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const fso::InvalidArgument& e) {
        std::cerr << "invalid argument: " << e.what() << '\n';
        return kConfigError;
    } catch (const fso::TrialFailure& e) {
        std::cerr << "numerical failure in trial " << e.trial_index() << ": " << e.what() << '\n';
        return kNumericalFailure;
    } catch (const fso::QuadratureFailure& e) {
        std::cerr << "numerical failure: " << e.what() << " (best estimate " << e.best_estimate()
                  << "); try a looser --tol\n";
        return kNumericalFailure;
    } catch (const fso::Error& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kNumericalFailure;
    }
    return kOk;
}

#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "commands.hpp"
#include "config.hpp"
#include "doctest.h"
#include "json.hpp"
#include "report.hpp"

using namespace fso::cli;
using std::numbers::pi;

namespace {

const Table& table(const Report& r, const std::string& name) {
    for (const auto& t : r.tables) {
        if (t.name == name) return t;
    }
    throw std::runtime_error("no table " + name);
}

std::size_t column(const Table& t, const std::string& name) {
    for (std::size_t i = 0; i < t.columns.size(); ++i) {
        if (t.columns[i].name == name) return i;
    }
    throw std::runtime_error("no column " + name);
}

double num(const Cell& c) { return std::get<double>(c); }

std::string meta(const Report& r, const std::string& key) {
    for (const auto& [k, v] : r.metadata) {
        if (k == key) return v;
    }
    throw std::runtime_error("no metadata " + key);
}

std::string config_error(const std::string& text) {
    try {
        parse_config(text, "test.conf");
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("defaults are the reference parameters") {
    const ExperimentConfig c;
    CHECK(c.beam.w0 == 1e-3);
    CHECK(c.beam.lambda == 1550e-9);
    CHECK(c.beam.cn2 == 1e-14);
    CHECK(c.detector.a == 0.1);
    CHECK(c.geometry.range_m == 1000.0);
    CHECK(c.geometry.beta_rad == pi / 2);
    CHECK(c.n_trials == 100000);
    CHECK(c.rel_tol == 1e-9);
    CHECK(parse_config("") == c);
    CHECK_NOTHROW(validate_config(c));
}

TEST_CASE("parsing with comments, whitespace and degree keys") {
    const auto c = parse_config(R"(
# geometry
geometry.R_m = 1500          # metres
geometry.alpha_deg = 22.5
   geometry.beta_rad=1.9634954084936207
stability.sigma_o_deg = 0.0057295779513082
stability.sigma_x_m = 0.02
sweep.variable = sigma
sweep.values = 0.2, 0.5,1.0
sweep.sigma_kinds = orientation
sweep.distances_m = 800,1000
bounds.offsets_m = 0.05:0, 0:-0.05
mc.n_trials = 1e4
mc.seed = 77
output.format = json
)");
    CHECK(c.geometry.range_m == 1500);
    CHECK(c.geometry.alpha_rad == doctest::Approx(pi / 8));
    CHECK(c.geometry.beta_rad == 1.9634954084936207);
    CHECK(c.stability.sigma_o_rad == doctest::Approx(1e-4));
    CHECK(c.stability.sigma_x_m.value() == 0.02);
    CHECK_FALSE(c.stability.sigma_y_m.has_value());
    CHECK(c.sweep.values == std::vector<double>{0.2, 0.5, 1.0});
    CHECK(c.sweep.sigma_kinds == std::vector<SigmaKind>{SigmaKind::orientation});
    CHECK(c.sweep.distances_m.size() == 2);
    REQUIRE(c.offsets.size() == 2);
    CHECK(c.offsets[1].fz == -0.05);
    CHECK(c.n_trials == 10000);
    CHECK(c.seed == 77);
    CHECK(c.format == OutputFormat::json);

    const auto deg = parse_config("sweep.values_deg = 0, 45\n");
    CHECK(deg.sweep.values[1] == doctest::Approx(pi / 4));
}

TEST_CASE("config errors name the line and the key") {
    auto msg = config_error("geometry.R_m = 10\n\nbeam.w0_m = abc\n");
    CHECK(msg.find("test.conf:3") != std::string::npos);
    CHECK(msg.find("beam.w0_m") != std::string::npos);
    msg = config_error("geometry.gamma = 1\n");
    CHECK(msg.find("test.conf:1") != std::string::npos);
    CHECK(msg.find("geometry.gamma") != std::string::npos);
    CHECK(config_error("just text\n").find("test.conf:1") != std::string::npos);
    CHECK(config_error("detector.a_deg = 3\n").find("unknown key") != std::string::npos);
    CHECK(config_error("output.format = xml\n").find("output.format") != std::string::npos);
    CHECK(config_error("mc.n_trials = -3\n").find("mc.n_trials") != std::string::npos);
    CHECK(config_error("bounds.offsets_m = 0.1\n").find("fy:fz") != std::string::npos);
}

TEST_CASE("validation errors name the field") {
    auto check_field = [](ExperimentConfig c, const std::string& field) {
        try {
            validate_config(c);
            FAIL("expected a config error for " << field);
        } catch (const ConfigError& e) {
            CHECK(std::string(e.what()).find(field) != std::string::npos);
        }
    };
    ExperimentConfig c;
    c.geometry.range_m = -1;
    check_field(c, "geometry.R_m");
    c = {};
    c.beam.w0 = 0;
    check_field(c, "beam.w0_m");
    c = {};
    c.detector.a = 0;
    check_field(c, "detector.a_m");
    c = {};
    c.stability.sigma_o_rad = -1e-4;
    check_field(c, "stability.sigma_o_rad");
    c = {};
    c.rel_tol = 2;
    check_field(c, "quadrature.rel_tol");
    c = {};
    c.sweep.distances_m = {100, -5};
    check_field(c, "sweep.distances_m");
    c = {};
    c.n_trials = 0;
    check_field(c, "mc.n_trials");
}

TEST_CASE("overrides") {
    ExperimentConfig c;
    apply_override(c, "geometry.alpha_deg=45");
    apply_override(c, " mc.seed = 9 ");
    CHECK(c.geometry.alpha_rad == doctest::Approx(pi / 4));
    CHECK(c.seed == 9);
    CHECK_THROWS_AS(apply_override(c, "nonsense"), ConfigError);
    CHECK_THROWS_AS(apply_override(c, "geometry.gamma=1"), ConfigError);
}

TEST_CASE("effective config round trip") {
    const ExperimentConfig defaults;
    CHECK(parse_config(effective_config(defaults)) == defaults);

    ExperimentConfig c;
    c.geometry = {1234.5, 0.1 + 1e-17, 2.0 / 3.0};
    c.beam = {1.1e-3, 1.31e-6, 3.3e-15};
    c.detector.a = 0.07;
    c.stability.sigma_p_m = 0.013;
    c.stability.sigma_o_rad = 1.0 / 3.0 * 1e-4;
    c.stability.sigma_theta_rad = 2e-4;
    c.stability.sigma_z_m = 0.0;
    c.sweep.variable = "sigma";
    c.sweep.values = {0.1, 0.30000000000000004, 1e-300};
    c.sweep.distances_m = {800, 1500};
    c.sweep.sigma_kinds = {SigmaKind::orientation, SigmaKind::position};
    c.offsets = {{0.05, -0.0}, {1e-9, 0.25}};
    c.n_trials = 123457;
    c.seed = 18446744073709551615ull;
    c.pdf_bins = 33;
    c.output_path = "out/results.csv";
    c.format = OutputFormat::json;
    c.rel_tol = 3e-10;
    const auto text = effective_config(c);
    CHECK(parse_config(text) == c);
    CHECK(effective_config(parse_config(text)) == text);
    CHECK(config_hash(parse_config(text)) == config_hash(c));

    ExperimentConfig other = c;
    other.seed = 1;
    CHECK(config_hash(other) != config_hash(c));
}

TEST_CASE("CSV and JSON renderings") {
    Report r;
    r.command = "demo";
    r.config.seed = 5;
    r.add_meta("note", std::string("x"));
    Table t;
    t.name = "t";
    t.columns = {{"loss", "dB"}, {"label", ""}, {"count", ""}};
    t.rows.push_back({INFINITY, std::string("a,b"), std::int64_t{3}});
    t.rows.push_back({1.5, std::string("c"), std::int64_t{4}});
    r.tables.push_back(t);

    const auto csv = to_csv(r);
    CHECK(csv.find("# tool=fso-geoloss 1.0.0\n") == 0);
    CHECK(csv.find("# seed=5\n") != std::string::npos);
    CHECK(csv.find("# config_hash=" + config_hash(r.config)) != std::string::npos);
    CHECK(csv.find("loss_dB,label,count\n") != std::string::npos);
    CHECK(csv.find("inf,\"a,b\",3\n") != std::string::npos);
    CHECK(parse_config(embedded_config(csv)) == r.config);

    const auto j = nlohmann::json::parse(to_json(r));
    CHECK(j["command"] == "demo");
    CHECK(j["tables"][0]["rows"][0][0] == "inf");
    CHECK(j["tables"][0]["rows"][1][0] == 1.5);
    CHECK(j["tables"][0]["columns"][0]["unit"] == "dB");
    CHECK(j["config"]["mc.seed"] == "5");
}

TEST_CASE("cmd_bounds") {
    ExperimentConfig c;
    c.sweep.values = {pi / 4, 0.0, pi / 8};
    c.offsets = {{0.05, 0.0}};
    const auto r = cmd_bounds(c);
    const auto& t = table(r, "bounds");
    REQUIRE(t.rows.size() == 6);
    const auto ia = column(t, "alpha"), ie = column(t, "exact"), il = column(t, "bound_lower"),
               iu = column(t, "bound_upper"), ial = column(t, "approx_low"), iau = column(t, "approx_upp"),
               iam = column(t, "approx_mean"), ify = column(t, "offset_fy");
    for (std::size_t i = 1; i < t.rows.size(); ++i) CHECK(num(t.rows[i][ia]) >= num(t.rows[i - 1][ia]));

    // alpha = 0: exact and bounds coincide, and the three closed forms coincide
    for (std::size_t i = 0; i < 2; ++i) {
        const auto& row = t.rows[i];
        CHECK(num(row[il]) == doctest::Approx(num(row[ie])).epsilon(1e-8));
        CHECK(num(row[iu]) == doctest::Approx(num(row[ie])).epsilon(1e-8));
        CHECK(num(row[ial]) == num(row[iam]));
        CHECK(num(row[iau]) == num(row[iam]));
        CHECK(std::abs(num(row[iam]) - num(row[ie])) <= 0.3);
    }
    // dB inverts the ordering
    for (const auto& row : t.rows) {
        CHECK(num(row[il]) >= num(row[ie]) - 1e-7);
        CHECK(num(row[ie]) >= num(row[iu]) - 1e-7);
    }
    double at0 = 0, at45 = 0;
    for (const auto& row : t.rows) {
        if (num(row[ify]) != 0.0) continue;
        if (num(row[ia]) == 0.0) at0 = num(row[ie]);
        if (num(row[ia]) == pi / 4) at45 = num(row[ie]);
    }
    CHECK(at45 - at0 > 0.0);
    CHECK(at45 - at0 <= 1.5);

    ExperimentConfig wrong = c;
    wrong.sweep.variable = "sigma";
    CHECK_THROWS_AS(cmd_bounds(wrong), ConfigError);
}

TEST_CASE("cmd_average_loss") {
    ExperimentConfig c;
    c.geometry.alpha_rad = pi / 8;
    c.geometry.beta_rad = 5 * pi / 8;
    c.sweep.variable = "sigma";
    c.sweep.values = {0.0, 0.5};
    c.sweep.distances_m = {800, 1000, 1500};
    c.n_trials = 2000;
    const auto r = cmd_average_loss(c);
    const auto& t = table(r, "average_loss");
    REQUIRE(t.rows.size() == 12);
    const auto is = column(t, "sigma"), iL = column(t, "L"), ie = column(t, "exact_mean"),
               ia = column(t, "approx_mean");
    for (const auto& row : t.rows) {
        CHECK(std::abs(num(row[ie]) - num(row[ia])) <= 0.5);
        if (num(row[is]) == 0.0) {
            const auto mu = fso::geometry::spherical_mean_position(num(row[iL]), pi / 8, 5 * pi / 8);
            const double det = fso::geoloss::exact_loss({mu, fso::geometry::tracking_orientation(mu)}, {}, {});
            CHECK(num(row[ie]) == doctest::Approx(fso::geoloss::loss_db(det)).epsilon(1e-12));
        }
    }
    // rows for one kind: L-major then sigma; check increase with L at sigma = 0.5
    double prev = 0;
    for (const auto& row : t.rows) {
        if (std::get<std::string>(row[0]) != "orientation" || num(row[is]) != 0.5) continue;
        CHECK(num(row[ie]) > prev);
        prev = num(row[ie]);
    }
}

TEST_CASE("cmd_pdf reports the density overlay and the fit") {
    ExperimentConfig c;
    c.stability.sigma_o_rad = 1e-4;
    c.n_trials = 20000;
    c.pdf_bins = 30;
    const auto r = cmd_pdf(c);
    const auto& h = table(r, "histogram");
    CHECK(h.rows.size() == 30);
    double mass = 0;
    for (const auto& row : h.rows) {
        mass += num(row[column(h, "empirical_density")]) * (num(row[1]) - num(row[0]));
        CHECK(num(row[column(h, "analytic_density")]) >= 0.0);
    }
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(std::stod(meta(r, "chi2_p_value")) >= 0.0);

    ExperimentConfig wide = c;
    wide.stability.sigma_o_rad = 2e-4;
    CHECK(std::stod(meta(cmd_pdf(wide), "loss_p99_dB")) > std::stod(meta(r, "loss_p99_dB")));

    ExperimentConfig tilted = c;
    tilted.geometry.alpha_rad = pi / 8;
    tilted.geometry.beta_rad = 5 * pi / 8;
    CHECK(std::stod(meta(cmd_pdf(tilted), "A0")) < std::stod(meta(r, "A0")));
}

TEST_CASE("cmd_validate") {
    const ExperimentConfig c;
    const auto ok = cmd_validate(c);
    CHECK(validation_passed(ok));
    CHECK(meta(ok, "failures").empty());

    const auto broken = cmd_validate(c, {true});
    CHECK_FALSE(validation_passed(broken));
    CHECK(meta(broken, "failures").find("bound_ordering") != std::string::npos);

    ExperimentConfig loose;
    loose.rel_tol = 1e-3;
    CHECK(validation_passed(cmd_validate(loose)));
}

TEST_CASE("reports are reproducible for a fixed config and seed") {
    ExperimentConfig c;
    c.stability.sigma_o_rad = 1e-4;
    c.n_trials = 3000;
    const auto a = to_csv(cmd_pdf(c, {1}));
    const auto b = to_csv(cmd_pdf(c, {3}));
    CHECK(a == b);
}

}  // TEST_SUITE

#include "config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <system_error>

namespace fso::cli {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> parts;
    if (trim(s).empty()) return parts;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        parts.push_back(trim(s.substr(start, pos - start)));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return parts;
}

double parse_double(std::string_view s) {
    s = trim(s);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
        throw ConfigError("expected a number, got '" + std::string(s) + "'");
    }
    return v;
}

std::uint64_t parse_count(std::string_view s) {
    s = trim(s);
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (!s.empty() && ec == std::errc{} && ptr == s.data() + s.size()) return v;
    // allow 1e5 and friends
    const double d = parse_double(s);
    if (!(d >= 0.0) || d != std::floor(d) || d > 9007199254740992.0) {
        throw ConfigError("expected a non-negative integer, got '" + std::string(s) + "'");
    }
    return static_cast<std::uint64_t>(d);
}

std::vector<double> parse_list(std::string_view s, double scale) {
    std::vector<double> out;
    for (auto part : split(s, ',')) out.push_back(parse_double(part) * scale);
    return out;
}

SigmaKind parse_kind(std::string_view s) {
    if (s == "position") return SigmaKind::position;
    if (s == "orientation") return SigmaKind::orientation;
    throw ConfigError("unknown sigma kind '" + std::string(s) +
                      "' (expected position or orientation)");
}

std::string join(const std::vector<double>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ',';
        out += format_double(v[i]);
    }
    return out;
}

struct KeySpec {
    const char* key;
    bool angle;  // accepts the _deg spelling
    std::function<void(ExperimentConfig&, std::string_view, double)> set;
    std::function<std::optional<std::string>(const ExperimentConfig&)> get;
};

template <class Member>
KeySpec scalar(const char* key, bool angle, Member member) {
    return {key, angle,
            [member](ExperimentConfig& c, std::string_view v, double scale) {
                std::invoke(member, c) = parse_double(v) * scale;
            },
            [member](const ExperimentConfig& c) -> std::optional<std::string> {
                return format_double(std::invoke(member, c));
            }};
}

template <class Member>
KeySpec optional_scalar(const char* key, bool angle, Member member) {
    return {key, angle,
            [member](ExperimentConfig& c, std::string_view v, double scale) {
                std::invoke(member, c) = parse_double(v) * scale;
            },
            [member](const ExperimentConfig& c) -> std::optional<std::string> {
                const auto& o = std::invoke(member, c);
                if (!o) return std::nullopt;
                return format_double(*o);
            }};
}

const std::vector<KeySpec>& key_table() {
    static const std::vector<KeySpec> table = [] {
        std::vector<KeySpec> t;
        t.push_back(scalar("geometry.R_m", false, [](auto& c) -> auto& { return c.geometry.range_m; }));
        t.push_back(scalar("geometry.alpha_rad", true, [](auto& c) -> auto& { return c.geometry.alpha_rad; }));
        t.push_back(scalar("geometry.beta_rad", true, [](auto& c) -> auto& { return c.geometry.beta_rad; }));
        t.push_back(scalar("beam.w0_m", false, [](auto& c) -> auto& { return c.beam.w0; }));
        t.push_back(scalar("beam.lambda_m", false, [](auto& c) -> auto& { return c.beam.lambda; }));
        t.push_back(scalar("beam.cn2", false, [](auto& c) -> auto& { return c.beam.cn2; }));
        t.push_back(scalar("detector.a_m", false, [](auto& c) -> auto& { return c.detector.a; }));
        t.push_back(scalar("stability.sigma_p_m", false, [](auto& c) -> auto& { return c.stability.sigma_p_m; }));
        t.push_back(scalar("stability.sigma_o_rad", true, [](auto& c) -> auto& { return c.stability.sigma_o_rad; }));
        t.push_back(optional_scalar("stability.sigma_x_m", false, [](auto& c) -> auto& { return c.stability.sigma_x_m; }));
        t.push_back(optional_scalar("stability.sigma_y_m", false, [](auto& c) -> auto& { return c.stability.sigma_y_m; }));
        t.push_back(optional_scalar("stability.sigma_z_m", false, [](auto& c) -> auto& { return c.stability.sigma_z_m; }));
        t.push_back(optional_scalar("stability.sigma_theta_rad", true, [](auto& c) -> auto& { return c.stability.sigma_theta_rad; }));
        t.push_back(optional_scalar("stability.sigma_phi_rad", true, [](auto& c) -> auto& { return c.stability.sigma_phi_rad; }));

        t.push_back({"sweep.variable", false,
                     [](ExperimentConfig& c, std::string_view v, double) {
                         if (v != "alpha" && v != "sigma" && !v.empty()) {
                             throw ConfigError("expected alpha or sigma, got '" + std::string(v) + "'");
                         }
                         c.sweep.variable = std::string(v);
                     },
                     [](const ExperimentConfig& c) -> std::optional<std::string> { return c.sweep.variable; }});
        t.push_back({"sweep.values", true,
                     [](ExperimentConfig& c, std::string_view v, double scale) {
                         c.sweep.values = parse_list(v, scale);
                     },
                     [](const ExperimentConfig& c) -> std::optional<std::string> { return join(c.sweep.values); }});
        t.push_back({"sweep.distances_m", false,
                     [](ExperimentConfig& c, std::string_view v, double) {
                         c.sweep.distances_m = parse_list(v, 1.0);
                     },
                     [](const ExperimentConfig& c) -> std::optional<std::string> { return join(c.sweep.distances_m); }});
        t.push_back({"sweep.sigma_kinds", false,
                     [](ExperimentConfig& c, std::string_view v, double) {
                         c.sweep.sigma_kinds.clear();
                         for (auto part : split(v, ',')) c.sweep.sigma_kinds.push_back(parse_kind(part));
                     },
                     [](const ExperimentConfig& c) -> std::optional<std::string> {
                         std::string out;
                         for (std::size_t i = 0; i < c.sweep.sigma_kinds.size(); ++i) {
                             if (i) out += ',';
                             out += to_string(c.sweep.sigma_kinds[i]);
                         }
                         return out;
                     }});
        t.push_back({"bounds.offsets_m", false,
                     [](ExperimentConfig& c, std::string_view v, double) {
                         c.offsets.clear();
                         for (auto part : split(v, ',')) {
                             const auto colon = part.find(':');
                             if (colon == std::string_view::npos) {
                                 throw ConfigError("offset '" + std::string(part) + "' must be fy:fz");
                             }
                             c.offsets.push_back({parse_double(part.substr(0, colon)),
                                                  parse_double(part.substr(colon + 1))});
                         }
                     },
                     [](const ExperimentConfig& c) -> std::optional<std::string> {
                         std::string out;
                         for (std::size_t i = 0; i < c.offsets.size(); ++i) {
                             if (i) out += ',';
                             out += format_double(c.offsets[i].fy) + ":" + format_double(c.offsets[i].fz);
                         }
                         return out;
                     }});
        t.push_back({"mc.n_trials", false,
                     [](ExperimentConfig& c, std::string_view v, double) { c.n_trials = parse_count(v); },
                     [](const ExperimentConfig& c) -> std::optional<std::string> { return std::to_string(c.n_trials); }});
        t.push_back({"mc.seed", false,
                     [](ExperimentConfig& c, std::string_view v, double) { c.seed = parse_count(v); },
                     [](const ExperimentConfig& c) -> std::optional<std::string> { return std::to_string(c.seed); }});
        t.push_back({"pdf.n_bins", false,
                     [](ExperimentConfig& c, std::string_view v, double) { c.pdf_bins = parse_count(v); },
                     [](const ExperimentConfig& c) -> std::optional<std::string> { return std::to_string(c.pdf_bins); }});
        t.push_back({"output.path", false,
                     [](ExperimentConfig& c, std::string_view v, double) { c.output_path = std::string(v); },
                     [](const ExperimentConfig& c) -> std::optional<std::string> { return c.output_path; }});
        t.push_back({"output.format", false,
                     [](ExperimentConfig& c, std::string_view v, double) {
                         if (v == "csv") c.format = OutputFormat::csv;
                         else if (v == "json") c.format = OutputFormat::json;
                         else throw ConfigError("expected csv or json, got '" + std::string(v) + "'");
                     },
                     [](const ExperimentConfig& c) -> std::optional<std::string> { return std::string(to_string(c.format)); }});
        t.push_back(scalar("quadrature.rel_tol", false, [](auto& c) -> auto& { return c.rel_tol; }));
        return t;
    }();
    return table;
}

void assign(ExperimentConfig& cfg, std::string_view key, std::string_view value) {
    double scale = 1.0;
    std::string name(key);
    constexpr std::string_view deg = "_deg";
    if (key.ends_with(deg)) {
        name = std::string(key.substr(0, key.size() - deg.size()));
        if (name != "sweep.values") name += "_rad";
        scale = std::numbers::pi / 180.0;
    }
    for (const auto& spec : key_table()) {
        if (name != spec.key) continue;
        if (scale != 1.0 && !spec.angle) break;
        spec.set(cfg, value, scale);
        return;
    }
    throw ConfigError("unknown key '" + std::string(key) + "'");
}

}  // namespace

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

std::string_view to_string(SigmaKind k) noexcept {
    return k == SigmaKind::position ? "position" : "orientation";
}

std::string_view to_string(OutputFormat f) noexcept { return f == OutputFormat::csv ? "csv" : "json"; }

ExperimentConfig parse_config(std::string_view text, std::string_view source) {
    ExperimentConfig cfg;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto end = text.find('\n', start);
        std::string_view line = text.substr(start, end == std::string_view::npos ? text.npos : end - start);
        start = end == std::string_view::npos ? text.size() + 1 : end + 1;
        ++line_no;

        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        const std::string where = std::string(source) + ":" + std::to_string(line_no) + ": ";
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError(where + "expected key = value, got '" + std::string(line) + "'");
        }
        const auto key = trim(line.substr(0, eq));
        try {
            assign(cfg, key, trim(line.substr(eq + 1)));
        } catch (const ConfigError& e) {
            throw ConfigError(where + std::string(key) + ": " + e.what());
        }
    }
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path + ": cannot open config file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path);
}

void apply_override(ExperimentConfig& cfg, std::string_view assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string_view::npos) {
        throw ConfigError("--set " + std::string(assignment) + ": expected key=value");
    }
    const auto key = trim(assignment.substr(0, eq));
    try {
        assign(cfg, key, trim(assignment.substr(eq + 1)));
    } catch (const ConfigError& e) {
        throw ConfigError("--set " + std::string(key) + ": " + e.what());
    }
}

void validate_config(const ExperimentConfig& c) {
    auto require = [](bool ok, const char* field, const std::string& what) {
        if (!ok) throw ConfigError(std::string(field) + ": " + what);
    };
    auto finite_positive = [&](double v, const char* field) {
        require(std::isfinite(v) && v > 0.0, field, "must be positive and finite, got " + format_double(v));
    };
    auto finite_non_negative = [&](double v, const char* field) {
        require(std::isfinite(v) && v >= 0.0, field, "must be >= 0 and finite, got " + format_double(v));
    };
    finite_positive(c.geometry.range_m, "geometry.R_m");
    require(std::isfinite(c.geometry.alpha_rad), "geometry.alpha_rad", "must be finite");
    require(std::isfinite(c.geometry.beta_rad), "geometry.beta_rad", "must be finite");
    finite_positive(c.beam.w0, "beam.w0_m");
    finite_positive(c.beam.lambda, "beam.lambda_m");
    finite_non_negative(c.beam.cn2, "beam.cn2");
    finite_positive(c.detector.a, "detector.a_m");
    finite_non_negative(c.stability.sigma_p_m, "stability.sigma_p_m");
    finite_non_negative(c.stability.sigma_o_rad, "stability.sigma_o_rad");
    if (c.stability.sigma_x_m) finite_non_negative(*c.stability.sigma_x_m, "stability.sigma_x_m");
    if (c.stability.sigma_y_m) finite_non_negative(*c.stability.sigma_y_m, "stability.sigma_y_m");
    if (c.stability.sigma_z_m) finite_non_negative(*c.stability.sigma_z_m, "stability.sigma_z_m");
    if (c.stability.sigma_theta_rad) finite_non_negative(*c.stability.sigma_theta_rad, "stability.sigma_theta_rad");
    if (c.stability.sigma_phi_rad) finite_non_negative(*c.stability.sigma_phi_rad, "stability.sigma_phi_rad");
    for (double v : c.sweep.values) require(std::isfinite(v), "sweep.values", "entries must be finite");
    if (c.sweep.variable == "sigma") {
        for (double v : c.sweep.values) finite_non_negative(v, "sweep.values");
    }
    for (double v : c.sweep.distances_m) finite_positive(v, "sweep.distances_m");
    for (const auto& f : c.offsets) {
        require(std::isfinite(f.fy) && std::isfinite(f.fz), "bounds.offsets_m", "entries must be finite");
    }
    require(c.n_trials >= 1, "mc.n_trials", "must be >= 1");
    require(c.pdf_bins >= 1, "pdf.n_bins", "must be >= 1");
    require(c.rel_tol > 0.0 && c.rel_tol < 1.0, "quadrature.rel_tol", "must lie in (0, 1)");
}

std::string effective_config(const ExperimentConfig& cfg) {
    std::string out;
    for (const auto& spec : key_table()) {
        const auto v = spec.get(cfg);
        if (!v) continue;
        out += spec.key;
        out += '=';
        out += *v;
        out += '\n';
    }
    return out;
}

std::string config_hash(const ExperimentConfig& cfg) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char ch : effective_config(cfg)) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace fso::cli

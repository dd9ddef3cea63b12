#pragma once

// Experiment configuration: flat "section.key = value" text files.
// Keys ending in _deg are converted to radians on load.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fso/beam.hpp"
#include "fso/errors.hpp"
#include "fso/geoloss.hpp"
#include "fso/geometry.hpp"

namespace fso::cli {

class ConfigError : public Error {
public:
    using Error::Error;
};

enum class OutputFormat { csv, json };
enum class SigmaKind { position, orientation };  // swept in cm / mrad

struct GeometryConfig {
    double range_m = 1000.0;
    double alpha_rad = 0.0;
    double beta_rad = 1.5707963267948966;
    bool operator==(const GeometryConfig&) const = default;
};

struct StabilityConfig {
    double sigma_p_m = 0.0;
    double sigma_o_rad = 0.0;
    std::optional<double> sigma_x_m;
    std::optional<double> sigma_y_m;
    std::optional<double> sigma_z_m;
    std::optional<double> sigma_theta_rad;
    std::optional<double> sigma_phi_rad;
    bool operator==(const StabilityConfig&) const = default;
};

struct SweepConfig {
    std::string variable;  // "alpha", "sigma" or empty for the command default
    std::vector<double> values;
    std::vector<double> distances_m;
    std::vector<SigmaKind> sigma_kinds{SigmaKind::position, SigmaKind::orientation};
    bool operator==(const SweepConfig&) const = default;
};

struct ExperimentConfig {
    GeometryConfig geometry;
    beam::BeamParams beam;
    geoloss::DetectorParams detector;
    StabilityConfig stability;
    SweepConfig sweep;
    std::vector<geometry::FootprintCenter> offsets;  // extra footprint offsets for bounds
    std::uint64_t n_trials = 100000;
    std::uint64_t seed = 1;
    std::size_t pdf_bins = 50;
    std::string output_path;
    OutputFormat format = OutputFormat::csv;
    double rel_tol = 1e-9;

    bool operator==(const ExperimentConfig&) const = default;
};

// Parses config text on top of the defaults. Errors name the line and key.
ExperimentConfig parse_config(std::string_view text, std::string_view source = "config");
ExperimentConfig load_config(const std::string& path);

// Applies one "key=value" override (as given to --set).
void apply_override(ExperimentConfig& cfg, std::string_view assignment);

// Range checks; errors name the offending field.
void validate_config(const ExperimentConfig& cfg);

// Canonical "key=value" lines; parse_config(effective_config(c)) == c.
std::string effective_config(const ExperimentConfig& cfg);

// FNV-1a 64 of the effective config, as 16 hex digits.
std::string config_hash(const ExperimentConfig& cfg);

std::string format_double(double v);

std::string_view to_string(SigmaKind k) noexcept;
std::string_view to_string(OutputFormat f) noexcept;

}  // namespace fso::cli

#pragma once

// Tabular results and their CSV / JSON renderings.

#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "config.hpp"

namespace fso::cli {

inline constexpr const char* kToolName = "fso-geoloss";
inline constexpr const char* kToolVersion = "1.0.0";

struct Column {
    std::string name;
    std::string unit;  // empty for dimensionless
};

using Cell = std::variant<double, std::int64_t, std::string>;

struct Table {
    std::string name;
    std::vector<Column> columns;
    std::vector<std::vector<Cell>> rows;
};

struct Report {
    std::string command;
    ExperimentConfig config;
    std::vector<std::pair<std::string, std::string>> metadata;
    std::vector<Table> tables;

    void add_meta(std::string key, std::string value) {
        metadata.emplace_back(std::move(key), std::move(value));
    }
    void add_meta(std::string key, double value) { add_meta(std::move(key), format_double(value)); }
};

// Lines starting with "#" carry the metadata; lines starting with "#@ " hold
// the effective configuration and can be fed back to parse_config.
std::string to_csv(const Report& r);
std::string to_json(const Report& r);
std::string render(const Report& r, OutputFormat f);

// Collects the "#@ " lines of a CSV report.
std::string embedded_config(const std::string& csv);

}  // namespace fso::cli

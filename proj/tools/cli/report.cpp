#include "report.hpp"

#include <cmath>
#include <sstream>

#include "json.hpp"

namespace fso::cli {

namespace {

std::string header_name(const Column& c) { return c.unit.empty() ? c.name : c.name + "_" + c.unit; }

std::string cell_text(const Cell& c) {
    if (const auto* d = std::get_if<double>(&c)) return format_double(*d);
    if (const auto* i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
    return std::get<std::string>(c);
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    return out + "\"";
}

nlohmann::ordered_json cell_json(const Cell& c) {
    if (const auto* d = std::get_if<double>(&c)) {
        if (!std::isfinite(*d)) return format_double(*d);
        return *d;
    }
    if (const auto* i = std::get_if<std::int64_t>(&c)) return *i;
    return std::get<std::string>(c);
}

}  // namespace

std::string to_csv(const Report& r) {
    std::ostringstream out;
    out << "# tool=" << kToolName << ' ' << kToolVersion << '\n';
    out << "# command=" << r.command << '\n';
    out << "# seed=" << r.config.seed << '\n';
    out << "# config_hash=" << config_hash(r.config) << '\n';
    for (const auto& [k, v] : r.metadata) out << "# " << k << '=' << v << '\n';
    std::istringstream cfg(effective_config(r.config));
    for (std::string line; std::getline(cfg, line);) out << "#@ " << line << '\n';

    for (std::size_t t = 0; t < r.tables.size(); ++t) {
        const Table& table = r.tables[t];
        if (t > 0) out << '\n';
        out << "# table=" << table.name << '\n';
        for (std::size_t c = 0; c < table.columns.size(); ++c) {
            if (c) out << ',';
            out << csv_field(header_name(table.columns[c]));
        }
        out << '\n';
        for (const auto& row : table.rows) {
            for (std::size_t c = 0; c < row.size(); ++c) {
                if (c) out << ',';
                out << csv_field(cell_text(row[c]));
            }
            out << '\n';
        }
    }
    return out.str();
}

std::string to_json(const Report& r) {
    nlohmann::ordered_json j;
    j["tool"] = kToolName;
    j["version"] = kToolVersion;
    j["command"] = r.command;
    j["seed"] = r.config.seed;
    j["config_hash"] = config_hash(r.config);

    nlohmann::ordered_json cfg = nlohmann::ordered_json::object();
    std::istringstream lines(effective_config(r.config));
    for (std::string line; std::getline(lines, line);) {
        const auto eq = line.find('=');
        cfg[line.substr(0, eq)] = line.substr(eq + 1);
    }
    j["config"] = cfg;

    nlohmann::ordered_json meta = nlohmann::ordered_json::object();
    for (const auto& [k, v] : r.metadata) meta[k] = v;
    j["metadata"] = meta;

    nlohmann::ordered_json tables = nlohmann::ordered_json::array();
    for (const auto& table : r.tables) {
        nlohmann::ordered_json t;
        t["name"] = table.name;
        nlohmann::ordered_json cols = nlohmann::ordered_json::array();
        for (const auto& c : table.columns) cols.push_back({{"name", c.name}, {"unit", c.unit}});
        t["columns"] = cols;
        nlohmann::ordered_json rows = nlohmann::ordered_json::array();
        for (const auto& row : table.rows) {
            nlohmann::ordered_json jr = nlohmann::ordered_json::array();
            for (const auto& c : row) jr.push_back(cell_json(c));
            rows.push_back(jr);
        }
        t["rows"] = rows;
        tables.push_back(t);
    }
    j["tables"] = tables;
    return j.dump(2) + "\n";
}

std::string render(const Report& r, OutputFormat f) { return f == OutputFormat::csv ? to_csv(r) : to_json(r); }

std::string embedded_config(const std::string& csv) {
    std::istringstream in(csv);
    std::string out;
    for (std::string line; std::getline(in, line);) {
        if (line.rfind("#@ ", 0) == 0) out += line.substr(3) + '\n';
    }
    return out;
}

}  // namespace fso::cli

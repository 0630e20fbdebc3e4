#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "dynball/exponents.hpp"

namespace dynball {

struct CheckRow {
    std::string name;
    std::string description;
    std::string op;  // operation + inputs that produced the number
    double measured = 0.0;
    double expected = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

// Numeric table for plotting; emitted as one CSV per table.
struct Table {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

struct ExperimentReport {
    std::string name;
    std::uint64_t seed = 0;
    double wall_time_s = 0.0;
    std::vector<CheckRow> checks;
    std::vector<Table> artifacts;

    bool overall_pass() const;
    CheckRow& add_check(std::string name, std::string description, std::string op,
                        double measured, double expected, double tolerance);
};

// Standard grid artifact: columns n, delta, sup_log_delta, candidates,
// s_n_over_n (the last filled only on the row's chosen delta).
Table grid_table(const std::string& name, const ExponentEstimate& est);

// Effective configuration echoed into every report: ordered key/value
// pairs whose serialization re-parses to the same run.
using ConfigEcho = std::vector<std::pair<std::string, std::string>>;

// JSON document with stable top-level schema {config, checks, artifacts,
// timing}.
std::string report_to_json(const ExperimentReport& r, const ConfigEcho& config);

// RFC-4180 CSV; config echoed as rows of type "config", checks as rows of
// type "check".
std::string report_to_csv(const ExperimentReport& r, const ConfigEcho& config);

std::string table_to_csv(const Table& t);

// Write-then-rename so the file appears complete or not at all.
void atomic_write(const std::string& path, const std::string& content);

}  // namespace dynball

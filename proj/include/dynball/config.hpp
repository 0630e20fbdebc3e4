#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dynball/experiments.hpp"

namespace dynball {

// One run of one experiment: everything needed to reproduce it bit for bit.
// Parsed from a flat "key = value" document with a closed key set; unknown
// or duplicate keys are fatal.
struct RunConfig {
    std::string experiment;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int threads = 1;
    int verbosity = 1;
    std::string output_path = "report.json";
    std::string output_format = "json";  // json | csv

    std::string map = "";                // experiment-dependent default
    double map_theta = 0.73;
    double map_alpha = 0.7071067811865475;
    double map_beta = 0.5773502691896258;
    double map_k_param = 1.5;
    double map_twist1 = 3.0;
    double map_twist2 = 2.4;

    Schedule schedule = Schedule::defaults();

    int quadrature_samples = 400;
    std::string quadrature_source = "uniform";  // uniform | grid

    int points = 0;  // 0 -> per-experiment default
    int m_max = 5;
    int horizon = 30;

    double family_k = 1.0;
    std::vector<int> family_n_list = {1, 2, 3, 4};

    double tol_example = 0.02;
    double tol_invariance = 0.05;
    double tol_agreement_abs = 0.05;
    double tol_agreement_rel = 0.05;
    double tol_lambda_rel = 0.10;
};

// Command-line overrides applied on top of the parsed document before
// validation.
struct ConfigOverrides {
    std::optional<std::uint64_t> seed;
    std::optional<std::string> output_path;
    std::optional<std::string> output_format;
    std::optional<int> threads;
};

// Parse a config document. 'source_name' is used in error messages only.
// Throws ConfigError with line context on any violation (including a
// missing seed).
RunConfig parse_config(const std::string& text, const std::string& source_name = "config",
                       const ConfigOverrides& overrides = {});

RunConfig load_config_file(const std::string& path, const ConfigOverrides& overrides = {});

// Canonical serialization; parse_config(serialize_config(c)) == c.
std::string serialize_config(const RunConfig& c);

// Ordered key/value pairs for the report echo (same content as
// serialize_config).
ConfigEcho config_echo(const RunConfig& c);

// Build the configured map ("" -> error). Recognized names match zoo labels.
MapObject map_from_config(const RunConfig& c, const std::string& name);

// Dispatch, write the report (plus one CSV per artifact table next to it),
// and return the process exit code: 0 pass, 1 check failures, 2 errors.
int run(const RunConfig& c);

// Experiment catalog: name, one-line description, and the claim each one
// exercises.
std::string list_experiments();

}  // namespace dynball

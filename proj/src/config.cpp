#include "dynball/config.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "dynball/parallel.hpp"

namespace dynball {

namespace {

const std::set<std::string> kKnownKeys = {
    "experiment", "seed", "threads", "verbosity", "output.path", "output.format",
    "map", "map.theta", "map.alpha", "map.beta", "map.K", "map.twist1", "map.twist2",
    "schedule.n_values", "schedule.delta_values", "schedule.directions",
    "schedule.tail_window", "schedule.ladder_count", "schedule.ladder_top_fraction",
    "schedule.ladder_factor", "schedule.ladder_floor",
    "quadrature.samples", "quadrature.source",
    "points", "m_max", "horizon",
    "family.k", "family.n_list",
    "tolerance.example", "tolerance.invariance", "tolerance.agreement_abs", "tolerance.agreement_rel",
    "tolerance.lambda_rel",
};

const std::set<std::string> kExperiments = {"example", "agreement", "invariance",
                                            "lambda_jump", "oseledets"};

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double parse_double(const std::string& v, const std::string& key, int line) {
    char* end = nullptr;
    const double x = std::strtod(v.c_str(), &end);
    if (end == v.c_str() || *end != '\0')
        throw ConfigError("key '" + key + "': expected a number, got '" + v + "'", line);
    return x;
}

long long parse_int(const std::string& v, const std::string& key, int line) {
    char* end = nullptr;
    const long long x = std::strtoll(v.c_str(), &end, 10);
    if (end == v.c_str() || *end != '\0')
        throw ConfigError("key '" + key + "': expected an integer, got '" + v + "'", line);
    return x;
}

std::vector<std::string> split_list(const std::string& v) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : v) {
        if (c == ',' || c == ' ' || c == '\t') {
            if (!cur.empty()) parts.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) parts.push_back(cur);
    return parts;
}

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

template <typename T, typename Fmt>
std::string join(const std::vector<T>& xs, Fmt fmt) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) out += ",";
        out += fmt(xs[i]);
    }
    return out;
}

}  // namespace

RunConfig parse_config(const std::string& text, const std::string& source_name,
                       const ConfigOverrides& overrides) {
    RunConfig c;
    std::map<std::string, std::pair<std::string, int>> pairs;

    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        const std::string line = trim(raw);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("expected 'key = value' in " + source_name, line_no);
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (!kKnownKeys.count(key)) throw ConfigError("unknown key '" + key + "'", line_no);
        if (pairs.count(key)) throw ConfigError("duplicate key '" + key + "'", line_no);
        if (value.empty()) throw ConfigError("key '" + key + "' has no value", line_no);
        pairs[key] = {value, line_no};
    }

    if (overrides.seed) pairs["seed"] = {std::to_string(*overrides.seed), 0};
    if (overrides.output_path) pairs["output.path"] = {*overrides.output_path, 0};
    if (overrides.output_format) pairs["output.format"] = {*overrides.output_format, 0};
    if (overrides.threads) pairs["threads"] = {std::to_string(*overrides.threads), 0};

    auto get = [&](const char* key) -> std::optional<std::pair<std::string, int>> {
        const auto it = pairs.find(key);
        if (it == pairs.end()) return std::nullopt;
        return it->second;
    };

    if (auto p = get("experiment")) {
        if (!kExperiments.count(p->first))
            throw ConfigError("unknown experiment '" + p->first + "'", p->second);
        c.experiment = p->first;
    } else {
        throw ConfigError("missing required key 'experiment'");
    }
    if (auto p = get("seed")) {
        const long long s = parse_int(p->first, "seed", p->second);
        if (s < 0) throw ConfigError("seed must be nonnegative", p->second);
        c.seed = static_cast<std::uint64_t>(s);
        c.seed_set = true;
    }
    if (auto p = get("threads")) {
        c.threads = static_cast<int>(parse_int(p->first, "threads", p->second));
        if (c.threads < 1) throw ConfigError("threads must be >= 1", p->second);
    } else {
        c.threads = default_thread_count();
    }
    if (auto p = get("verbosity"))
        c.verbosity = static_cast<int>(parse_int(p->first, "verbosity", p->second));
    if (auto p = get("output.path")) c.output_path = p->first;
    if (auto p = get("output.format")) {
        if (p->first != "json" && p->first != "csv")
            throw ConfigError("output.format must be json or csv", p->second);
        c.output_format = p->first;
    }

    if (auto p = get("map")) c.map = p->first;
    if (auto p = get("map.theta")) c.map_theta = parse_double(p->first, "map.theta", p->second);
    if (auto p = get("map.alpha")) c.map_alpha = parse_double(p->first, "map.alpha", p->second);
    if (auto p = get("map.beta")) c.map_beta = parse_double(p->first, "map.beta", p->second);
    if (auto p = get("map.K")) c.map_k_param = parse_double(p->first, "map.K", p->second);
    if (auto p = get("map.twist1")) c.map_twist1 = parse_double(p->first, "map.twist1", p->second);
    if (auto p = get("map.twist2")) c.map_twist2 = parse_double(p->first, "map.twist2", p->second);

    if (auto p = get("schedule.n_values")) {
        c.schedule.n_values.clear();
        for (const auto& s : split_list(p->first))
            c.schedule.n_values.push_back(
                static_cast<int>(parse_int(s, "schedule.n_values", p->second)));
    }
    if (auto p = get("schedule.delta_values")) {
        c.schedule.delta_values.clear();
        for (const auto& s : split_list(p->first))
            c.schedule.delta_values.push_back(parse_double(s, "schedule.delta_values", p->second));
    }
    if (auto p = get("schedule.directions"))
        c.schedule.directions =
            static_cast<int>(parse_int(p->first, "schedule.directions", p->second));
    if (auto p = get("schedule.tail_window"))
        c.schedule.tail_window =
            static_cast<int>(parse_int(p->first, "schedule.tail_window", p->second));
    if (auto p = get("schedule.ladder_count"))
        c.schedule.ladder.count =
            static_cast<int>(parse_int(p->first, "schedule.ladder_count", p->second));
    if (auto p = get("schedule.ladder_top_fraction"))
        c.schedule.ladder.top_fraction =
            parse_double(p->first, "schedule.ladder_top_fraction", p->second);
    if (auto p = get("schedule.ladder_factor"))
        c.schedule.ladder.factor = parse_double(p->first, "schedule.ladder_factor", p->second);
    if (auto p = get("schedule.ladder_floor"))
        c.schedule.ladder.min_offset = parse_double(p->first, "schedule.ladder_floor", p->second);

    if (auto p = get("quadrature.samples"))
        c.quadrature_samples =
            static_cast<int>(parse_int(p->first, "quadrature.samples", p->second));
    if (auto p = get("quadrature.source")) {
        if (p->first != "uniform" && p->first != "grid")
            throw ConfigError("quadrature.source must be uniform or grid", p->second);
        c.quadrature_source = p->first;
    }

    if (auto p = get("points"))
        c.points = static_cast<int>(parse_int(p->first, "points", p->second));
    if (auto p = get("m_max")) c.m_max = static_cast<int>(parse_int(p->first, "m_max", p->second));
    if (auto p = get("horizon"))
        c.horizon = static_cast<int>(parse_int(p->first, "horizon", p->second));

    if (auto p = get("family.k")) c.family_k = parse_double(p->first, "family.k", p->second);
    if (auto p = get("family.n_list")) {
        c.family_n_list.clear();
        for (const auto& s : split_list(p->first))
            c.family_n_list.push_back(static_cast<int>(parse_int(s, "family.n_list", p->second)));
    }

    if (auto p = get("tolerance.example"))
        c.tol_example = parse_double(p->first, "tolerance.example", p->second);
    if (auto p = get("tolerance.invariance"))
        c.tol_invariance = parse_double(p->first, "tolerance.invariance", p->second);
    if (auto p = get("tolerance.agreement_abs"))
        c.tol_agreement_abs = parse_double(p->first, "tolerance.agreement_abs", p->second);
    if (auto p = get("tolerance.agreement_rel"))
        c.tol_agreement_rel = parse_double(p->first, "tolerance.agreement_rel", p->second);
    if (auto p = get("tolerance.lambda_rel"))
        c.tol_lambda_rel = parse_double(p->first, "tolerance.lambda_rel", p->second);

    if (!c.seed_set)
        throw ConfigError("missing required key 'seed' (every run must be reproducible)");

    try {
        c.schedule.validate();
    } catch (const Error& e) {
        throw ConfigError(e.what());
    }
    if (c.quadrature_samples < 100)
        throw ConfigError("quadrature.samples must be >= 100");
    return c;
}

RunConfig load_config_file(const std::string& path, const ConfigOverrides& overrides) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot read config file: " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_config(ss.str(), path, overrides);
}

ConfigEcho config_echo(const RunConfig& c) {
    ConfigEcho e;
    e.emplace_back("experiment", c.experiment);
    e.emplace_back("seed", std::to_string(c.seed));
    e.emplace_back("threads", std::to_string(c.threads));
    e.emplace_back("verbosity", std::to_string(c.verbosity));
    e.emplace_back("output.path", c.output_path);
    e.emplace_back("output.format", c.output_format);
    if (!c.map.empty()) e.emplace_back("map", c.map);
    e.emplace_back("map.theta", fmt_double(c.map_theta));
    e.emplace_back("map.alpha", fmt_double(c.map_alpha));
    e.emplace_back("map.beta", fmt_double(c.map_beta));
    e.emplace_back("map.K", fmt_double(c.map_k_param));
    e.emplace_back("map.twist1", fmt_double(c.map_twist1));
    e.emplace_back("map.twist2", fmt_double(c.map_twist2));
    e.emplace_back("schedule.n_values",
                   join(c.schedule.n_values, [](int v) { return std::to_string(v); }));
    e.emplace_back("schedule.delta_values", join(c.schedule.delta_values, fmt_double));
    e.emplace_back("schedule.directions", std::to_string(c.schedule.directions));
    e.emplace_back("schedule.tail_window", std::to_string(c.schedule.tail_window));
    e.emplace_back("schedule.ladder_count", std::to_string(c.schedule.ladder.count));
    e.emplace_back("schedule.ladder_top_fraction", fmt_double(c.schedule.ladder.top_fraction));
    e.emplace_back("schedule.ladder_factor", fmt_double(c.schedule.ladder.factor));
    e.emplace_back("schedule.ladder_floor", fmt_double(c.schedule.ladder.min_offset));
    e.emplace_back("quadrature.samples", std::to_string(c.quadrature_samples));
    e.emplace_back("quadrature.source", c.quadrature_source);
    if (c.points > 0) e.emplace_back("points", std::to_string(c.points));
    e.emplace_back("m_max", std::to_string(c.m_max));
    e.emplace_back("horizon", std::to_string(c.horizon));
    e.emplace_back("family.k", fmt_double(c.family_k));
    e.emplace_back("family.n_list",
                   join(c.family_n_list, [](int v) { return std::to_string(v); }));
    e.emplace_back("tolerance.example", fmt_double(c.tol_example));
    e.emplace_back("tolerance.invariance", fmt_double(c.tol_invariance));
    e.emplace_back("tolerance.agreement_abs", fmt_double(c.tol_agreement_abs));
    e.emplace_back("tolerance.agreement_rel", fmt_double(c.tol_agreement_rel));
    e.emplace_back("tolerance.lambda_rel", fmt_double(c.tol_lambda_rel));
    return e;
}

std::string serialize_config(const RunConfig& c) {
    std::string out;
    for (const auto& [k, v] : config_echo(c)) out += k + " = " + v + "\n";
    return out;
}

MapObject map_from_config(const RunConfig& c, const std::string& name) {
    if (name == "identity") return make_identity(Domain::flat_torus(1.0));
    if (name == "rotation") return make_rotation(c.map_theta);
    if (name == "translation") return make_torus_translation(c.map_alpha, c.map_beta);
    if (name == "cat") return make_cat_map();
    if (name == "standard") return make_standard_map(c.map_k_param);
    if (name == "example") return make_example_map();
    if (name == "standin") return make_disc_standin(c.map_twist1, c.map_twist2);
    if (name == "diag") return make_plane_diag_map();
    throw ConfigError("unknown map '" + name + "'");
}

std::string list_experiments() {
    return
        "example      three distinct line divergence rates at a single non-smooth point\n"
        "             (log 2, -log 2, log 3), with the top estimate matching their max;\n"
        "             shows a continuous map carrying more rates than the dimension.\n"
        "agreement    ball-divergence exponents match derivative-cocycle exponents at\n"
        "             random points of differentiable maps (the two definitions\n"
        "             coincide under differentiability).\n"
        "invariance   the top estimate is constant along orbits, with subadditivity\n"
        "             spot-checks of the sampled suprema.\n"
        "lambda_jump  disc families approach the identity in C0 distance while the\n"
        "             integrated top exponent stays bounded away from zero: the\n"
        "             integrated-exponent functional is not upper-semicontinuous.\n"
        "oseledets    growth trichotomy along estimated expanding/contracting\n"
        "             directions: +chi along e_u and generic vectors, -chi along e_s.\n";
}

namespace {

ExperimentReport dispatch(const RunConfig& c) {
    if (c.experiment == "example") {
        return run_example_experiment(c.schedule, c.tol_example);
    }
    if (c.experiment == "agreement") {
        AgreementOptions opt;
        opt.schedule = c.schedule;
        opt.seed = c.seed;
        opt.threads = c.threads;
        opt.points_per_map = c.points > 0 ? c.points : 20;
        opt.tol_abs = c.tol_agreement_abs;
        opt.tol_rel = c.tol_agreement_rel;
        if (!c.map.empty()) {
            opt.maps.push_back(map_from_config(c, c.map));
        } else {
            opt.maps.push_back(make_cat_map());
            opt.maps.push_back(make_standard_map(0.5));
            opt.maps.push_back(make_standard_map(1.5));
            opt.maps.push_back(make_plane_diag_map());
            opt.maps.push_back(make_rotation(c.map_theta));
            opt.maps.push_back(make_torus_translation(c.map_alpha, c.map_beta));
            opt.maps.push_back(make_identity(Domain::flat_torus(1.0)));
        }
        return run_agreement_experiment(opt);
    }
    if (c.experiment == "invariance") {
        InvarianceOptions opt;
        opt.schedule = c.schedule;
        opt.seed = c.seed;
        opt.threads = c.threads;
        opt.points = c.points > 0 ? c.points : 10;
        opt.m_max = c.m_max;
        opt.tolerance = c.tol_invariance;
        const MapObject m = map_from_config(c, c.map.empty() ? "cat" : c.map);
        return run_invariance_experiment(m, opt);
    }
    if (c.experiment == "lambda_jump") {
        LambdaJumpOptions opt;
        opt.schedule = c.schedule;
        opt.seed = c.seed;
        opt.threads = c.threads;
        opt.n_list = c.family_n_list;
        opt.k = c.family_k;
        opt.base = make_disc_standin(c.map_twist1, c.map_twist2);
        opt.quadrature_samples = c.quadrature_samples;
        opt.quadrature_source = c.quadrature_source == "grid" ? Quadrature::Source::RegularGrid
                                                              : Quadrature::Source::UniformRandom;
        opt.constancy_tol = c.tol_lambda_rel;
        return run_lambda_jump_experiment(opt);
    }
    if (c.experiment == "oseledets") {
        OseledetsOptions opt;
        opt.seed = c.seed;
        opt.points = c.points > 0 ? c.points : 10;
        opt.horizon = c.horizon;
        const MapObject m = map_from_config(c, c.map.empty() ? "cat" : c.map);
        return run_oseledets_experiment(m, opt);
    }
    throw ConfigError("unknown experiment '" + c.experiment + "'");
}

std::string artifact_path(const std::string& report_path, const std::string& table) {
    const std::filesystem::path p(report_path);
    std::filesystem::path stem = p;
    stem.replace_extension();
    return stem.string() + "." + table + ".csv";
}

}  // namespace

int run(const RunConfig& c) {
    try {
        ExperimentReport rep = dispatch(c);
        rep.seed = c.seed;
        const ConfigEcho echo = config_echo(c);
        const std::string doc =
            c.output_format == "json" ? report_to_json(rep, echo) : report_to_csv(rep, echo);
        atomic_write(c.output_path, doc);
        for (const Table& t : rep.artifacts)
            atomic_write(artifact_path(c.output_path, t.name), table_to_csv(t));

        if (c.verbosity >= 1) {
            for (const CheckRow& row : rep.checks) {
                std::printf("[%s] %s: measured=%.6g expected=%.6g tol=%.6g\n",
                            row.pass ? "PASS" : "FAIL", row.name.c_str(), row.measured,
                            row.expected, row.tolerance);
            }
            std::printf("%s: %s (%.2fs), report written to %s\n", rep.name.c_str(),
                        rep.overall_pass() ? "PASS" : "FAIL", rep.wall_time_s,
                        c.output_path.c_str());
        }
        return rep.overall_pass() ? 0 : 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}

}  // namespace dynball

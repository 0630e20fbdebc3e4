#include "dynball/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>

#include "json.hpp"

namespace dynball {

bool ExperimentReport::overall_pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckRow& c) { return c.pass; });
}

CheckRow& ExperimentReport::add_check(std::string name, std::string description, std::string op,
                                      double measured, double expected, double tolerance) {
    CheckRow row;
    row.name = std::move(name);
    row.description = std::move(description);
    row.op = std::move(op);
    row.measured = measured;
    row.expected = expected;
    row.tolerance = tolerance;
    row.pass = std::abs(measured - expected) <= tolerance;
    checks.push_back(std::move(row));
    return checks.back();
}

Table grid_table(const std::string& name, const ExponentEstimate& est) {
    Table t;
    t.name = name;
    t.columns = {"n", "delta", "sup_log_delta", "candidates", "s_n_over_n"};
    for (const GridCell& cell : est.grid) {
        if (!cell.nonempty()) continue;
        double ratio = 0.0;
        bool chosen = false;
        for (const RowSummary& row : est.rows) {
            if (row.n == cell.n && row.nonempty && row.delta_used == cell.delta) {
                ratio = row.s / row.n;
                chosen = true;
            }
        }
        t.rows.push_back({static_cast<double>(cell.n), cell.delta, cell.sup_log,
                          static_cast<double>(cell.retained),
                          chosen ? ratio : std::numeric_limits<double>::quiet_NaN()});
    }
    return t;
}

namespace {

using ojson = nlohmann::ordered_json;

ojson number_or_null(double v) {
    if (std::isfinite(v)) return v;
    return nullptr;
}

}  // namespace

std::string report_to_json(const ExperimentReport& r, const ConfigEcho& config) {
    ojson doc;
    ojson cfg;
    for (const auto& [k, v] : config) cfg[k] = v;
    doc["config"] = cfg;

    ojson checks = ojson::array();
    for (const CheckRow& c : r.checks) {
        ojson row;
        row["name"] = c.name;
        row["description"] = c.description;
        row["op"] = c.op;
        row["measured"] = number_or_null(c.measured);
        row["expected"] = number_or_null(c.expected);
        row["tolerance"] = number_or_null(c.tolerance);
        row["pass"] = c.pass;
        checks.push_back(row);
    }
    doc["checks"] = checks;

    ojson tables = ojson::array();
    for (const Table& t : r.artifacts) {
        ojson rows = ojson::array();
        for (const auto& row : t.rows) {
            ojson jr = ojson::array();
            for (double v : row) jr.push_back(number_or_null(v));
            rows.push_back(jr);
        }
        ojson jt;
        jt["name"] = t.name;
        jt["columns"] = t.columns;
        jt["rows"] = rows;
        tables.push_back(jt);
    }
    doc["artifacts"] = tables;
    doc["timing"] = {{"wall_time_s", r.wall_time_s}};
    return doc.dump(2) + "\n";
}

namespace {

// RFC-4180: quote fields containing comma, quote or line breaks.
std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += "\"";
    return out;
}

std::string csv_number(double v) {
    if (!std::isfinite(v)) return "";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

std::string report_to_csv(const ExperimentReport& r, const ConfigEcho& config) {
    std::string out = "type,name,description,op,measured,expected,tolerance,pass\r\n";
    for (const auto& [k, v] : config)
        out += "config," + csv_field(k) + "," + csv_field(v) + ",,,,,\r\n";
    for (const CheckRow& c : r.checks) {
        out += "check," + csv_field(c.name) + "," + csv_field(c.description) + "," +
               csv_field(c.op) + "," + csv_number(c.measured) + "," + csv_number(c.expected) +
               "," + csv_number(c.tolerance) + "," + (c.pass ? "true" : "false") + "\r\n";
    }
    return out;
}

std::string table_to_csv(const Table& t) {
    std::string out;
    for (std::size_t i = 0; i < t.columns.size(); ++i) {
        if (i) out += ",";
        out += csv_field(t.columns[i]);
    }
    out += "\r\n";
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ",";
            out += csv_number(row[i]);
        }
        out += "\r\n";
    }
    return out;
}

void atomic_write(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    if (target.has_parent_path() && !target.parent_path().empty() &&
        !fs::exists(target.parent_path()))
        throw Error("output directory does not exist: " + target.parent_path().string());
    const fs::path tmp = target.string() + ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw Error("cannot open output file: " + tmp.string());
        f << content;
        if (!f.good()) {
            f.close();
            fs::remove(tmp);
            throw Error("failed writing output file: " + tmp.string());
        }
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp);
        throw Error("failed to move report into place: " + ec.message());
    }
}

}  // namespace dynball

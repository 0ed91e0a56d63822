#include "qfractal/results_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "qfractal/error.hpp"

namespace qfractal {

namespace {

using nlohmann::json;

std::string num(double v, const char* f = "%.17g") {
    if (std::isnan(v)) return "";
    char buf[48];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else if (c == '\n' || c == '\r') out += ' ';
        else out += c;
    }
    return out + "\"";
}

json jnum(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

void metadata_lines(std::ostringstream& o, const std::map<std::string, std::string>& meta) {
    for (const auto& [k, v] : meta) {
        std::istringstream lines(v);
        std::string line;
        bool any = false;
        while (std::getline(lines, line)) {
            o << "# " << k << ": " << line << "\n";
            any = true;
        }
        if (!any) o << "# " << k << ":\n";
    }
}

std::string window_text(const ResultRow& r) {
    if (!r.ok()) return "";
    return to_string(r.estimate.window.policy) + " " + std::to_string(r.estimate.window.j_min) + ".." +
           std::to_string(r.estimate.window.j_max);
}

}  // namespace

std::string format_table_csv(const ResultTable& table) {
    std::ostringstream o;
    metadata_lines(o, table.metadata);
    const auto& cols = result_columns();
    for (std::size_t i = 0; i < cols.size(); ++i) o << (i ? "," : "") << cols[i];
    o << "\n";
    for (const auto& r : table.rows) {
        const auto& e = r.estimate;
        const bool ok = r.ok();
        o << csv_field(r.probe_label) << ',' << num(r.probe) << ',' << to_string(r.family) << ',' << r.truncation
          << ',' << num(e.dimension, "%.3f") << ',' << num(e.dimension_err, "%.3f") << ',' << num(e.slope) << ','
          << num(e.slope_stderr) << ',' << num(e.hurst) << ',' << num(e.r2) << ',' << (ok ? std::to_string(e.window.j_min) : "")
          << ',' << (ok ? std::to_string(e.window.j_max) : "") << ',' << window_text(r) << ',' << num(r.captured_norm)
          << ',' << r.integrator_steps << ',' << num(r.min_density) << ',' << r.status << ',' << csv_field(r.error)
          << "\n";
    }
    return o.str();
}

std::string format_table_json(const ResultTable& table) {
    json j;
    j["schema"] = "qfractal.result_table/1";
    j["metadata"] = table.metadata;
    j["columns"] = result_columns();
    json rows = json::array();
    for (const auto& r : table.rows) {
        const auto& e = r.estimate;
        json row;
        row["probe_label"] = r.probe_label;
        row["probe"] = jnum(r.probe);
        row["family"] = to_string(r.family);
        row["N"] = r.truncation;
        row["D"] = jnum(e.dimension);
        row["D_err"] = jnum(e.dimension_err);
        row["slope"] = jnum(e.slope);
        row["slope_stderr"] = jnum(e.slope_stderr);
        row["H"] = jnum(e.hurst);
        row["r2"] = jnum(e.r2);
        row["j_min"] = r.ok() ? json(e.window.j_min) : json(nullptr);
        row["j_max"] = r.ok() ? json(e.window.j_max) : json(nullptr);
        row["window"] = window_text(r);
        row["captured_norm"] = jnum(r.captured_norm);
        row["integrator_steps"] = r.integrator_steps;
        row["min_density"] = jnum(r.min_density);
        row["status"] = r.status;
        row["error"] = r.error;
        rows.push_back(std::move(row));
    }
    j["rows"] = std::move(rows);
    return j.dump(2) + "\n";
}

std::string format_convergence_csv(const std::vector<ConvergenceSeries>& series) {
    std::vector<int> ns;
    for (const auto& s : series) ns.insert(ns.end(), s.truncations.begin(), s.truncations.end());
    std::sort(ns.begin(), ns.end());
    ns.erase(std::unique(ns.begin(), ns.end()), ns.end());
    std::ostringstream o;
    o << "N";
    for (const auto& s : series) o << ',' << csv_field(s.probe_label + ":" + to_string(s.family));
    o << "\n";
    for (int n : ns) {
        o << n;
        for (const auto& s : series) {
            o << ',';
            for (std::size_t i = 0; i < s.truncations.size(); ++i) {
                if (s.truncations[i] == n) o << num(s.dimensions[i], "%.3f");
            }
        }
        o << "\n";
    }
    return o.str();
}

std::string format_carpet_csv(const CarpetExport& c) {
    std::ostringstream o;
    o << "x/t";
    for (double t : c.carpet.t) o << ',' << num(t);
    o << "\n";
    for (std::size_t ix = 0; ix < c.carpet.x.size(); ++ix) {
        o << num(c.carpet.x[ix]);
        for (std::size_t it = 0; it < c.carpet.t.size(); ++it) o << ',' << num(c.exported(ix, it));
        o << "\n";
    }
    return o.str();
}

std::string format_carpet_metadata_json(const CarpetExport& c) { return json(c.metadata).dump(2) + "\n"; }

std::string format_carpet_json(const CarpetExport& c) {
    json j;
    j["schema"] = "qfractal.carpet/1";
    j["metadata"] = c.metadata;
    j["x"] = c.carpet.x;
    j["t"] = c.carpet.t;
    json rows = json::array();
    for (std::size_t ix = 0; ix < c.carpet.x.size(); ++ix) {
        std::vector<double> row(c.carpet.t.size());
        for (std::size_t it = 0; it < row.size(); ++it) row[it] = c.exported(ix, it);
        rows.push_back(std::move(row));
    }
    j["density"] = std::move(rows);
    return j.dump() + "\n";
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::error_code ec;
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write '" + path.string() + "'");
    out << text;
    if (!out) throw ConfigError("write failed for '" + path.string() + "'");
}

std::filesystem::path write_table(const ResultTable& table, const std::filesystem::path& dir, OutputFormat format) {
    const auto path = dir / (table.scenario + (format == OutputFormat::csv ? ".csv" : ".json"));
    write_text_file(path, format == OutputFormat::csv ? format_table_csv(table) : format_table_json(table));
    return path;
}

std::filesystem::path write_convergence(const ResultTable& table, const std::filesystem::path& dir) {
    const auto path = dir / (table.scenario + "_convergence.csv");
    write_text_file(path, format_convergence_csv(convergence_series(table)));
    return path;
}

std::filesystem::path write_carpet(const CarpetExport& carpet, const std::filesystem::path& dir, OutputFormat format) {
    if (format == OutputFormat::json) {
        const auto path = dir / "carpet.json";
        write_text_file(path, format_carpet_json(carpet));
        return path;
    }
    const auto path = dir / "carpet.csv";
    write_text_file(path, format_carpet_csv(carpet));
    write_text_file(dir / "carpet.meta.json", format_carpet_metadata_json(carpet));
    return path;
}

}  // namespace qfractal

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <sys/wait.h>

#include "doctest.h"
#include "json.hpp"
#include "qfractal/error.hpp"
#include "qfractal/pipeline.hpp"
#include "qfractal/results_io.hpp"

using namespace qfractal;
namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::string without_timestamp(const std::string& csv) {
    std::istringstream in(csv);
    std::string line, out;
    while (std::getline(in, line)) {
        if (line.rfind("# timestamp:", 0) == 0) continue;
        out += line + "\n";
    }
    return out;
}

std::vector<std::vector<std::string>> csv_rows(const std::string& csv) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(csv);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> cells;
        std::string cell;
        bool quoted = false;
        for (char c : line) {
            if (c == '"') quoted = !quoted;
            else if (c == ',' && !quoted) {
                cells.push_back(cell);
                cell.clear();
            } else cell += c;
        }
        cells.push_back(cell);
        rows.push_back(cells);
    }
    return rows;
}

fs::path scratch_dir(const std::string& name) {
    const auto p = fs::temp_directory_path() / ("qfractal_test_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

ScenarioConfig small_time_scan() {
    auto c = default_scenario(ScenarioKind::time);
    c.name = "small";
    c.probes = {"-0.25", "0.5", "-0.1"};  // 0.5 is the wall: error rows
    c.truncations = {100, 200};
    c.dyadic_exponent = 12;
    c.families = {Family::haar, Family::db4};
    return c;
}

}  // namespace

TEST_SUITE("pipeline") {
    TEST_CASE("one row per (probe, family, N), sorted, failures isolated") {
        const auto t = run_table(small_time_scan());
        REQUIRE(t.rows.size() == 3 * 2 * 2);
        CHECK(t.failed() == 4);
        for (std::size_t i = 1; i < t.rows.size(); ++i) {
            const auto& a = t.rows[i - 1];
            const auto& b = t.rows[i];
            const bool ordered = a.probe < b.probe || (a.probe == b.probe && (a.family < b.family ||
                                                                              (a.family == b.family && a.truncation < b.truncation)));
            CHECK(ordered);
        }
        for (const auto& r : t.rows) {
            if (r.probe_label == "0.5") {
                CHECK_FALSE(r.ok());
                CHECK(r.error.rfind("degenerate-signal", 0) == 0);
                CHECK(std::isnan(r.estimate.dimension));
            } else {
                CHECK(r.ok());
                CHECK(r.estimate.dimension > 1.5);
                CHECK(r.estimate.dimension < 2.0);
                CHECK(r.captured_norm > 0.9);
            }
        }
        CHECK(t.metadata.at("kind") == "time");
        CHECK(t.metadata.count("timestamp") == 1);
        CHECK(t.metadata.at("version") == QFRACTAL_VERSION);
    }

    TEST_CASE("malformed probes and carpet misuse are config errors") {
        auto c = small_time_scan();
        c.probes = {"-0.25", "x0"};
        CHECK_THROWS_AS(run_table(c), ConfigError);
        CHECK_THROWS_AS(run_table(default_scenario(ScenarioKind::carpet)), ConfigError);
    }

    TEST_CASE("deterministic CSV apart from the timestamp") {
        const auto c = small_time_scan();
        const auto a = format_table_csv(run_table(c));
        const auto b = format_table_csv(run_table(c));
        CHECK(without_timestamp(a) == without_timestamp(b));
        CHECK(a.find("# timestamp:") != std::string::npos);
    }

    TEST_CASE("CSV and JSON share one schema") {
        const auto t = run_table(small_time_scan());
        const auto rows = csv_rows(format_table_csv(t));
        REQUIRE(rows.size() == t.rows.size() + 1);
        CHECK(rows[0] == result_columns());
        for (std::size_t i = 1; i < rows.size(); ++i) {
            CHECK(rows[i].size() == result_columns().size());
            if (rows[i][16] == "ok") {
                // 3 decimals for D and D_err
                CHECK(rows[i][4].size() - rows[i][4].find('.') - 1 == 3);
                CHECK(rows[i][5].size() - rows[i][5].find('.') - 1 == 3);
            }
        }
        const auto j = nlohmann::json::parse(format_table_json(t));
        CHECK(j.at("schema") == "qfractal.result_table/1");
        CHECK(j.at("columns").get<std::vector<std::string>>() == result_columns());
        REQUIRE(j.at("rows").size() == t.rows.size());
        for (std::size_t i = 0; i < t.rows.size(); ++i) {
            const auto& row = j.at("rows")[i];
            for (const auto& col : result_columns()) CHECK(row.contains(col));
            if (t.rows[i].ok()) {
                CHECK(row.at("D").get<double>() == t.rows[i].estimate.dimension);  // full precision
            } else {
                CHECK(row.at("D").is_null());
            }
        }
    }

    TEST_CASE("trajectory and space kinds use the same schema") {
        auto tr = default_scenario(ScenarioKind::trajectory);
        tr.probes = {"-1/3", "0"};  // x0 = 0 sits on the symmetry axis: constant path
        tr.truncations = {100};
        tr.dyadic_exponent = 12;
        tr.families = {Family::db4};
        const auto t = run_table(tr);
        REQUIRE(t.rows.size() == 2);
        const auto rows = csv_rows(format_table_csv(t));
        CHECK(rows[0] == result_columns());
        CHECK(t.rows[0].ok());
        CHECK(t.rows[0].integrator_steps > 0);
        CHECK(t.rows[0].min_density > 0.0);
        CHECK(t.rows[1].probe == 0.0);

        auto sp = default_scenario(ScenarioKind::space);
        sp.truncations = {400};
        sp.dyadic_exponent = 12;
        const auto s = run_table(sp);
        CHECK(csv_rows(format_table_csv(s))[0] == result_columns());
        for (const auto& r : s.rows) CHECK(r.ok());
    }

    TEST_CASE("convergence sweep fills the default N list and builds series") {
        auto c = small_time_scan();
        c.probes = {"-0.25"};
        c.truncations.clear();
        c.families = {Family::db4};
        const auto t = run_convergence_sweep(c);
        CHECK(t.rows.size() == default_truncation_sweep().size());
        const auto series = convergence_series(t);
        REQUIRE(series.size() == 1);
        CHECK(series[0].truncations == default_truncation_sweep());
        const auto csv = format_convergence_csv(series);
        CHECK(csv.rfind("N,-0.25:db4\n25,", 0) == 0);
    }

    TEST_CASE("rational study needs a symmetric state") {
        auto c = default_scenario(ScenarioKind::rational_study);
        c.truncations = {200};
        c.dyadic_exponent = 12;
        c.families = {Family::haar};
        const auto t = rational_time_study(c);
        CHECK(t.rows.size() == 5);
        c.state = asymmetric_single_square();
        CHECK_THROWS_AS(rational_time_study(c), ConfigError);
    }

    TEST_CASE("carpet export: axes, clipping only in the exported copy, files") {
        auto c = default_scenario(ScenarioKind::carpet);
        c.truncations = {100};
        c.nx = 65;
        c.nt = 9;
        c.clip = 0.6;
        const auto ex = make_carpet(c);
        CHECK(ex.carpet.x.size() == 65);
        CHECK(ex.carpet.t.size() == 9);
        CHECK(ex.metadata.at("clip") == "0.59999999999999998");
        double raw_max = 0.0, out_max = 0.0;
        for (std::size_t i = 0; i < 65; ++i) {
            for (std::size_t k = 0; k < 9; ++k) {
                raw_max = std::max(raw_max, ex.carpet.at(i, k));
                out_max = std::max(out_max, ex.exported(i, k));
            }
        }
        CHECK(raw_max == ex.max_density);
        CHECK(out_max == doctest::Approx(0.6 * raw_max));

        const auto dir = scratch_dir("carpet");
        const auto path = write_carpet(ex, dir, OutputFormat::csv);
        CHECK(path.filename() == "carpet.csv");
        CHECK(fs::exists(dir / "carpet.meta.json"));
        const auto rows = csv_rows(read_file(path));
        REQUIRE(rows.size() == 66);
        CHECK(rows[0].size() == 10);
        CHECK(std::stod(rows[0][1]) == 0.0);
        CHECK(std::stod(rows[0][9]) == doctest::Approx(1.0 / (2.0 * std::numbers::pi)));
        CHECK(std::stod(rows[1][0]) == -0.5);
        CHECK(std::stod(rows[65][0]) == 0.5);
        const auto jpath = write_carpet(ex, dir, OutputFormat::json);
        const auto j = nlohmann::json::parse(read_file(jpath));
        CHECK(j.at("density").size() == 65);
        CHECK(j.at("density")[0].size() == 9);
    }

    TEST_CASE("write_table names files after the scenario") {
        const auto dir = scratch_dir("tables");
        const auto t = run_table(small_time_scan());
        CHECK(write_table(t, dir, OutputFormat::csv) == dir / "small.csv");
        CHECK(write_table(t, dir, OutputFormat::json) == dir / "small.json");
        CHECK(write_convergence(t, dir) == dir / "small_convergence.csv");
        CHECK(fs::file_size(dir / "small.csv") > 0);
    }

    TEST_CASE("error tags") {
        CHECK(error_tag(ZeroEnergyError("x")) == "zero-energy");
        CHECK(error_tag(InvalidStartError("x")) == "invalid-start");
        CHECK(error_tag(ConfigError("x")) == "config");
        CHECK(error_tag(std::runtime_error("x")) == "internal");
    }
}

TEST_SUITE("cli") {
    int run(const std::string& args) {
        const std::string cmd = std::string(QFRACTAL_CLI) + " " + args + " > /dev/null 2>&1";
        const int status = std::system(cmd.c_str());
        return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    }

    TEST_CASE("exit codes") {
        const auto dir = scratch_dir("cli");
        std::ofstream(dir / "bad.cfg") << "[scenario]\nkind = time\nprobes = -0.25\nwibble = 3\n";
        std::ofstream(dir / "wall.cfg") << "[scenario]\nname = wall\nkind = time\nprobes = 0.5\nN = 50\nM = 10\n";
        std::ofstream(dir / "ok.cfg") << "[scenario]\nname = ok\nkind = time\nprobes = -0.25\nN = 50, 100\nM = 10\n"
                                         "families = haar\n";
        const std::string out = " --out " + (dir / "out").string();
        CHECK(run("--help") == 0);
        CHECK(run("frobnicate") == 1);
        CHECK(run("time --config " + (dir / "bad.cfg").string() + out) == 1);
        CHECK(run("time --config " + (dir / "missing.cfg").string() + out) == 1);
        CHECK(run("space --config " + (dir / "ok.cfg").string() + out) == 1);  // kind mismatch
        CHECK(run("time --config " + (dir / "ok.cfg").string() + " --levels-drop 2" + out) == 1);
        CHECK(run("time --config " + (dir / "ok.cfg").string() + " --families sym4" + out) == 1);
        CHECK(run("time --config " + (dir / "wall.cfg").string() + out) == 2);
        CHECK(run("time --config " + (dir / "ok.cfg").string() + out) == 0);
        CHECK(fs::exists(dir / "out" / "ok.csv"));
        CHECK(fs::exists(dir / "out" / "ok_convergence.csv"));
        CHECK(run("sweep --config " + (dir / "ok.cfg").string() + " --format json --families haar,db4 --levels-drop 2,2" +
                  out) == 0);
        const auto j = nlohmann::json::parse(read_file(dir / "out" / "ok.json"));
        CHECK(j.at("rows").size() == 4);
        CHECK(run("sweep" + out) == 1);
    }
}

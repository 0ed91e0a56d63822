#include "qfractal/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "qfractal/error.hpp"
#include "qfractal/expression.hpp"

namespace qfractal {

std::string to_string(ScenarioKind kind) {
    switch (kind) {
        case ScenarioKind::space: return "space";
        case ScenarioKind::time: return "time";
        case ScenarioKind::trajectory: return "trajectory";
        case ScenarioKind::carpet: return "carpet";
        case ScenarioKind::rational_study: return "rational-study";
    }
    return "unknown";
}

ScenarioKind parse_scenario_kind(std::string_view tag) {
    if (tag == "space") return ScenarioKind::space;
    if (tag == "time") return ScenarioKind::time;
    if (tag == "trajectory") return ScenarioKind::trajectory;
    if (tag == "carpet") return ScenarioKind::carpet;
    if (tag == "rational-study" || tag == "rational_study") return ScenarioKind::rational_study;
    throw ConfigError("unknown scenario kind '" + std::string(tag) +
                      "' (expected space, time, trajectory, carpet or rational-study)");
}

std::string to_string(OutputFormat format) { return format == OutputFormat::csv ? "csv" : "json"; }

OutputFormat parse_output_format(std::string_view tag) {
    if (tag == "csv") return OutputFormat::csv;
    if (tag == "json") return OutputFormat::json;
    throw ConfigError("unknown output format '" + std::string(tag) + "' (expected csv or json)");
}

std::vector<int> default_truncation_sweep() { return {25, 50, 100, 200, 400, 800, 1600, 2000}; }

namespace {

std::string trim(std::string_view s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return std::string(s.substr(a, b - a));
}

std::vector<std::string> split_list(std::string_view s) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        const std::size_t comma = s.find(',', start);
        const std::string item = trim(s.substr(start, comma == std::string_view::npos ? s.npos : comma - start));
        if (!item.empty()) out.push_back(item);
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

class Reader {
public:
    explicit Reader(int line) : line_(line) {}

    [[noreturn]] void fail(const std::string& msg) const {
        throw ConfigError("config line " + std::to_string(line_) + ": " + msg);
    }

    double number(const std::string& v) const {
        try {
            return evaluate_expression(v);
        } catch (const ConfigError& e) {
            fail(e.what());
        }
    }

    long integer(const std::string& v) const {
        const double d = number(v);
        if (d != std::floor(d) || std::abs(d) > 1e15) fail("expected an integer, got '" + v + "'");
        return static_cast<long>(d);
    }

    bool boolean(const std::string& v) const {
        if (v == "true" || v == "yes" || v == "on" || v == "1") return true;
        if (v == "false" || v == "no" || v == "off" || v == "0") return false;
        fail("expected true/false, got '" + v + "'");
    }

    std::pair<int, int> pair(const std::string& v) const {
        const auto items = split_list(v);
        if (items.size() != 2) fail("expected two comma-separated integers, got '" + v + "'");
        return {static_cast<int>(integer(items[0])), static_cast<int>(integer(items[1]))};
    }

private:
    int line_;
};

InitialStateSpec preset_state(const std::string& name) {
    if (name == "symmetric") return symmetric_two_square();
    if (name == "asymmetric") return asymmetric_single_square();
    if (name == "full-width") return full_width_square();
    throw ConfigError("unknown state preset '" + name + "' (expected symmetric, asymmetric or full-width)");
}

}  // namespace

ScenarioConfig parse_config(std::string_view text) {
    ScenarioConfig cfg;
    std::string section;
    bool saw_preset = false;
    bool saw_square = false;
    std::optional<std::string> description;

    std::istringstream in{std::string(text)};
    std::string raw;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const Reader r(line_no);
        const auto hash = raw.find('#');
        const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') r.fail("unterminated section header");
            section = trim(line.substr(1, line.size() - 2));
            if (section != "state" && section != "scenario" && section != "output") {
                r.fail("unknown section [" + section + "]");
            }
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) r.fail("expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (section.empty()) r.fail("key '" + key + "' outside any section");
        if (value.empty()) r.fail("empty value for '" + key + "'");

        try {
            if (section == "state") {
                if (key == "preset") {
                    if (saw_square) r.fail("preset and square lines are exclusive");
                    cfg.state = preset_state(value);
                    cfg.preset = value;
                    saw_preset = true;
                } else if (key == "square") {
                    if (saw_preset) r.fail("preset and square lines are exclusive");
                    if (!saw_square) cfg.state.squares.clear();
                    saw_square = true;
                    cfg.preset = "custom";
                    const auto items = split_list(value);
                    if (items.size() < 3 || items.size() > 4) {
                        r.fail("square expects 'center, width, re[, im]'");
                    }
                    Square sq;
                    sq.center = r.number(items[0]);
                    sq.width = r.number(items[1]);
                    sq.amplitude = {r.number(items[2]), items.size() == 4 ? r.number(items[3]) : 0.0};
                    cfg.state.squares.push_back(sq);
                } else if (key == "description") {
                    description = value;
                } else if (key == "L") {
                    cfg.well.length = r.number(value);
                } else if (key == "hbar") {
                    cfg.well.hbar = r.number(value);
                } else if (key == "mass") {
                    cfg.well.mass = r.number(value);
                } else if (key == "renormalize") {
                    cfg.renormalize = r.boolean(value);
                } else {
                    r.fail("unknown key '" + key + "' in [state]");
                }
            } else if (section == "scenario") {
                if (key == "name") {
                    cfg.name = value;
                } else if (key == "kind") {
                    cfg.kind = parse_scenario_kind(value);
                } else if (key == "probes" || key == "probe") {
                    cfg.probes = split_list(value);
                } else if (key == "N") {
                    cfg.truncations.clear();
                    for (const auto& item : split_list(value)) cfg.truncations.push_back(static_cast<int>(r.integer(item)));
                } else if (key == "families") {
                    cfg.families.clear();
                    for (const auto& item : split_list(value)) cfg.families.push_back(parse_family(item));
                } else if (key == "M") {
                    cfg.dyadic_exponent = static_cast<int>(r.integer(value));
                } else if (key == "levels") {
                    cfg.window.levels = static_cast<int>(r.integer(value));
                } else if (key == "window") {
                    cfg.window.policy = parse_window_policy(value);
                } else if (key == "drop") {
                    const auto [c, f] = r.pair(value);
                    cfg.window.drop_coarse = c;
                    cfg.window.drop_fine = f;
                } else if (key == "range") {
                    const auto [a, b] = r.pair(value);
                    cfg.window.j_min = a;
                    cfg.window.j_max = b;
                } else if (key == "resolution_floor") {
                    cfg.window.resolution_floor = r.boolean(value);
                } else if (key == "detrend") {
                    cfg.window.detrend = r.boolean(value);
                } else if (key == "duration") {
                    cfg.duration = value;
                } else if (key == "nx") {
                    cfg.nx = static_cast<std::size_t>(r.integer(value));
                } else if (key == "nt") {
                    cfg.nt = static_cast<std::size_t>(r.integer(value));
                } else if (key == "clip") {
                    cfg.clip = r.number(value);
                } else if (key == "seed") {
                    cfg.seed = static_cast<std::uint64_t>(r.integer(value));
                } else if (key == "rtol") {
                    cfg.integrator.rtol = r.number(value);
                } else if (key == "atol") {
                    cfg.integrator.atol = r.number(value);
                } else {
                    r.fail("unknown key '" + key + "' in [scenario]");
                }
            } else {
                if (key == "dir") {
                    cfg.output_dir = value;
                } else if (key == "format") {
                    cfg.format = parse_output_format(value);
                } else {
                    r.fail("unknown key '" + key + "' in [output]");
                }
            }
        } catch (const ConfigError& e) {
            const std::string what = e.what();
            if (what.rfind("config line", 0) == 0) throw;
            r.fail(what);
        }
    }
    if (description) cfg.state.description = *description;
    return cfg;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    try {
        return parse_config(ss.str());
    } catch (const ConfigError& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

void ScenarioConfig::validate() const {
    try {
        well.validate();
        state.validate();
    } catch (const Error& e) {
        throw ConfigError(std::string("state: ") + e.what());
    }
    if (name.empty() || name.find_first_of("/\\") != std::string::npos) {
        throw ConfigError("scenario name must be a non-empty file stem");
    }
    if (kind == ScenarioKind::carpet) {
        if (nx < 3 || nt < 2) throw ConfigError("carpet needs nx >= 3 and nt >= 2");
        if (clip && !(*clip > 0.0 && *clip <= 1.0)) throw ConfigError("clip must lie in (0, 1]");
        if (truncations.size() != 1) throw ConfigError("carpet takes exactly one N");
    } else {
        if (dyadic_exponent < 8 || dyadic_exponent > 22) throw ConfigError("M must lie in [8, 22]");
        if (families.empty()) throw ConfigError("families list is empty");
        if (probes.empty()) throw ConfigError("kind " + to_string(kind) + " needs a probe list");
        if (truncations.empty()) throw ConfigError("N list is empty");
    }
    for (std::size_t i = 0; i < truncations.size(); ++i) {
        if (truncations[i] < 1) throw ConfigError("N values must be >= 1");
        if (i > 0 && truncations[i] <= truncations[i - 1]) throw ConfigError("N list must be strictly ascending");
    }
    if (window.drop_coarse && *window.drop_coarse < 0) throw ConfigError("drop counts must be >= 0");
    if (window.drop_fine && *window.drop_fine < 0) throw ConfigError("drop counts must be >= 0");
    if (window.policy == WindowPolicy::explicit_range && !(window.j_min && window.j_max)) {
        throw ConfigError("window = explicit needs range = j_min, j_max");
    }
    if (!(integrator.rtol > 0.0) || !(integrator.atol > 0.0)) throw ConfigError("rtol and atol must be > 0");
}

std::string to_config_text(const ScenarioConfig& c) {
    std::ostringstream o;
    o << "[state]\n";
    if (c.preset != "custom") {
        o << "preset = " << c.preset << "\n";
    } else {
        for (const auto& s : c.state.squares) {
            o << "square = " << fmt(s.center) << ", " << fmt(s.width) << ", " << fmt(s.amplitude.real()) << ", "
              << fmt(s.amplitude.imag()) << "\n";
        }
    }
    if (!c.state.description.empty()) o << "description = " << c.state.description << "\n";
    o << "L = " << fmt(c.well.length) << "\nhbar = " << fmt(c.well.hbar) << "\nmass = " << fmt(c.well.mass)
      << "\nrenormalize = " << (c.renormalize ? "true" : "false") << "\n\n[scenario]\n";
    o << "name = " << c.name << "\nkind = " << to_string(c.kind) << "\n";
    if (!c.probes.empty()) {
        o << "probes = ";
        for (std::size_t i = 0; i < c.probes.size(); ++i) o << (i ? ", " : "") << c.probes[i];
        o << "\n";
    }
    if (!c.truncations.empty()) {
        o << "N = ";
        for (std::size_t i = 0; i < c.truncations.size(); ++i) o << (i ? ", " : "") << c.truncations[i];
        o << "\n";
    }
    o << "families = ";
    for (std::size_t i = 0; i < c.families.size(); ++i) o << (i ? ", " : "") << to_string(c.families[i]);
    o << "\nM = " << c.dyadic_exponent << "\n";
    if (c.window.levels) o << "levels = " << c.window.levels << "\n";
    if (c.window.policy) o << "window = " << to_string(*c.window.policy) << "\n";
    if (c.window.drop_coarse && c.window.drop_fine) {
        o << "drop = " << *c.window.drop_coarse << ", " << *c.window.drop_fine << "\n";
    }
    if (c.window.j_min && c.window.j_max) o << "range = " << *c.window.j_min << ", " << *c.window.j_max << "\n";
    if (c.window.resolution_floor) o << "resolution_floor = " << (*c.window.resolution_floor ? "true" : "false") << "\n";
    if (c.window.detrend) o << "detrend = " << (*c.window.detrend ? "true" : "false") << "\n";
    if (c.duration) o << "duration = " << *c.duration << "\n";
    if (c.kind == ScenarioKind::carpet) {
        o << "nx = " << c.nx << "\nnt = " << c.nt << "\n";
        if (c.clip) o << "clip = " << fmt(*c.clip) << "\n";
    }
    if (c.kind == ScenarioKind::trajectory) {
        o << "rtol = " << fmt(c.integrator.rtol) << "\natol = " << fmt(c.integrator.atol) << "\n";
    }
    o << "seed = " << c.seed << "\n\n[output]\nformat = " << to_string(c.format) << "\n";
    return o.str();
}

ScenarioConfig default_scenario(ScenarioKind kind) {
    ScenarioConfig c;
    c.kind = kind;
    switch (kind) {
        case ScenarioKind::space:
            c.name = "space";
            c.probes = {"T/sqrt(2)"};
            c.truncations = {2000};
            break;
        case ScenarioKind::time:
            c.name = "time";
            c.probes = {"-0.25"};
            c.truncations = {1600};
            break;
        case ScenarioKind::trajectory:
            c.name = "trajectory";
            c.probes = {"-1/3"};
            c.truncations = {800};
            break;
        case ScenarioKind::carpet:
            c.name = "carpet";
            c.truncations = {400};
            break;
        case ScenarioKind::rational_study:
            c.name = "rational-study";
            c.probes = {"5T/7", "29T/41", "T/sqrt(2)", "70T/99", "12T/17"};
            c.truncations = {2000};
            break;
    }
    return c;
}

EstimatorOptions estimator_options(const ScenarioConfig& config, int truncation) {
    EstimatorOptions o;
    o.levels = config.window.levels;
    const int M = config.dyadic_exponent;
    WindowRequest& w = o.window;
    bool floor = false;
    switch (config.kind) {
        case ScenarioKind::space:
        case ScenarioKind::rational_study:
            w.drop_coarse = 3;
            w.drop_fine = 2;
            floor = true;
            break;
        case ScenarioKind::trajectory:
            w.drop_coarse = 5;
            w.drop_fine = 1;
            break;
        default:
            w.drop_coarse = 2;
            w.drop_fine = 2;
            break;
    }
    if (config.window.policy) w.policy = *config.window.policy;
    if (config.window.drop_coarse) w.drop_coarse = *config.window.drop_coarse;
    if (config.window.drop_fine) w.drop_fine = *config.window.drop_fine;
    if (config.window.j_min) w.j_min = *config.window.j_min;
    if (config.window.j_max) w.j_max = *config.window.j_max;
    if (config.window.resolution_floor) floor = *config.window.resolution_floor;
    if (config.window.detrend) o.remove_endpoint_trend = *config.window.detrend;
    if (floor && truncation > 0) {
        // levels finer than ~2^M / N samples per mode see only the smooth truncated series
        const double cut = M - std::log2(static_cast<double>(truncation));
        w.level_floor = std::max(1, static_cast<int>(std::ceil(cut - 1e-9)));
    }
    return o;
}

}  // namespace qfractal

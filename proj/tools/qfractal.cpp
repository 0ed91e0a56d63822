#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "qfractal/config.hpp"
#include "qfractal/error.hpp"
#include "qfractal/pipeline.hpp"
#include "qfractal/results_io.hpp"
#include "qfractal/validate.hpp"

namespace {

using namespace qfractal;

enum Exit { kOk = 0, kConfig = 1, kNumerical = 2, kValidation = 3 };

struct CommonFlags {
    std::string config;
    std::string out;
    std::string format;
    std::vector<std::string> families;
    std::string levels_drop;
    std::optional<std::uint64_t> seed;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
    cmd->add_option("--config", f.config, "scenario config file");
    cmd->add_option("--out", f.out, "output directory");
    cmd->add_option("--format", f.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--families", f.families, "wavelet families, e.g. haar,db4")->delimiter(',');
    cmd->add_option("--levels-drop", f.levels_drop, "coarse,fine levels dropped from the fit");
    cmd->add_option("--seed", f.seed, "random seed");
}

ScenarioConfig resolve(const CommonFlags& f, ScenarioKind kind, bool need_file) {
    ScenarioConfig cfg;
    if (!f.config.empty()) {
        cfg = load_config(f.config);
        if (kind != cfg.kind && !(kind == ScenarioKind::rational_study && cfg.kind == ScenarioKind::space)) {
            throw ConfigError("config kind '" + to_string(cfg.kind) + "' does not match subcommand '" +
                              to_string(kind) + "'");
        }
        cfg.kind = kind;
    } else {
        if (need_file) throw ConfigError("this subcommand needs --config");
        cfg = default_scenario(kind);
    }
    if (!f.out.empty()) cfg.output_dir = f.out;
    if (!f.format.empty()) cfg.format = parse_output_format(f.format);
    if (!f.families.empty()) {
        cfg.families.clear();
        for (const auto& t : f.families) cfg.families.push_back(parse_family(t));
    }
    if (!f.levels_drop.empty()) {
        const auto comma = f.levels_drop.find(',');
        if (comma == std::string::npos) throw ConfigError("--levels-drop expects 'coarse,fine'");
        try {
            std::size_t used = 0;
            const std::string a = f.levels_drop.substr(0, comma), b = f.levels_drop.substr(comma + 1);
            cfg.window.drop_coarse = std::stoi(a, &used);
            if (used != a.size()) throw std::invalid_argument(a);
            cfg.window.drop_fine = std::stoi(b, &used);
            if (used != b.size()) throw std::invalid_argument(b);
        } catch (const std::logic_error&) {
            throw ConfigError("--levels-drop expects two integers 'coarse,fine', got '" + f.levels_drop + "'");
        }
    }
    if (f.seed) cfg.seed = *f.seed;
    return cfg;
}

void print_table(const ResultTable& t) {
    std::printf("%-14s %-6s %6s  %-15s %s\n", "probe", "family", "N", "D", "window");
    for (const auto& r : t.rows) {
        if (r.ok()) {
            std::printf("%-14s %-6s %6d  %.3f +- %.3f   %d..%d\n", r.probe_label.c_str(), to_string(r.family).c_str(),
                        r.truncation, r.estimate.dimension, r.estimate.dimension_err, r.estimate.window.j_min,
                        r.estimate.window.j_max);
        } else {
            std::printf("%-14s %-6s %6d  error: %s\n", r.probe_label.c_str(), to_string(r.family).c_str(),
                        r.truncation, r.error.c_str());
        }
    }
}

int finish_table(const ResultTable& t, const ScenarioConfig& cfg, bool convergence) {
    const auto path = write_table(t, cfg.output_dir, cfg.format);
    print_table(t);
    std::printf("wrote %s\n", path.string().c_str());
    if (convergence) std::printf("wrote %s\n", write_convergence(t, cfg.output_dir).string().c_str());
    if (t.failed() > 0) {
        std::fprintf(stderr, "%zu of %zu rows failed\n", t.failed(), t.rows.size());
        return kNumerical;
    }
    return kOk;
}

int run_validate(const CommonFlags& f) {
    ValidateOptions opt;
    if (f.seed) opt.seed = *f.seed;
    const ValidateReport rep = run_validation(opt);
    std::cout << format_report(rep);
    if (!f.out.empty()) {
        const bool json_out = f.format == "json";
        std::string text;
        if (json_out) {
            nlohmann::json j = nlohmann::json::array();
            for (const auto& c : rep.checks) {
                j.push_back({{"name", c.name},
                             {"passed", c.passed},
                             {"measured", std::isfinite(c.measured) ? nlohmann::json(c.measured) : nlohmann::json()},
                             {"tolerance", c.tolerance},
                             {"detail", c.detail}});
            }
            text = j.dump(2) + "\n";
        } else {
            text = "check,passed,measured,tolerance,detail\n";
            for (const auto& c : rep.checks) {
                char buf[64];
                std::snprintf(buf, sizeof buf, "%.17g,%.3g", c.measured, c.tolerance);
                text += c.name + "," + (c.passed ? "true" : "false") + "," + buf + ",\"" + c.detail + "\"\n";
            }
        }
        const auto path = std::filesystem::path(f.out) / (json_out ? "validate.json" : "validate.csv");
        write_text_file(path, text);
    }
    return rep.passed() ? kOk : kValidation;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quantum-fractal toolkit: infinite-well carpets, profiles, flux trajectories and wavelet dimensions"};
    app.set_version_flag("--version", std::string(QFRACTAL_VERSION));
    app.require_subcommand(1);

    CommonFlags flags;
    struct Sub {
        const char* name;
        const char* help;
    };
    const Sub subs[] = {
        {"carpet", "density over one revival period on an (x, t) grid"},
        {"space", "dimension of space profiles rho(x, t) at the probe times"},
        {"time", "dimension of time profiles rho(x, t) at the probe positions"},
        {"trajectory", "dimension of flux trajectories from the probe starting points"},
        {"sweep", "convergence of D with the truncation N (kind from the config)"},
        {"rational-study", "space-profile dimensions at rational and irrational fractions of T"},
        {"validate", "transform, physics and calibration self-checks"},
    };
    for (const auto& s : subs) add_common(app.add_subcommand(s.name, s.help), flags);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kConfig;
    }

    const std::string cmd = app.get_subcommands().front()->get_name();
    try {
        if (cmd == "validate") return run_validate(flags);
        if (cmd == "carpet") {
            const ScenarioConfig cfg = resolve(flags, ScenarioKind::carpet, false);
            const CarpetExport c = make_carpet(cfg);
            const auto path = write_carpet(c, cfg.output_dir, cfg.format);
            std::printf("wrote %s (%zu x %zu, T = %s)\n", path.string().c_str(), c.carpet.x.size(), c.carpet.t.size(),
                        c.metadata.at("period").c_str());
            return kOk;
        }
        if (cmd == "sweep") {
            if (flags.config.empty()) throw ConfigError("sweep needs --config");
            const ScenarioKind kind = load_config(flags.config).kind;
            if (kind == ScenarioKind::carpet) throw ConfigError("sweep does not apply to carpet scenarios");
            const ScenarioConfig cfg = resolve(flags, kind, true);
            return finish_table(run_convergence_sweep(cfg), cfg, true);
        }
        if (cmd == "rational-study") {
            const ScenarioConfig cfg = resolve(flags, ScenarioKind::rational_study, false);
            return finish_table(rational_time_study(cfg), cfg, false);
        }
        const ScenarioKind kind = parse_scenario_kind(cmd);
        const ScenarioConfig cfg = resolve(flags, kind, false);
        return finish_table(run_table(cfg), cfg, cfg.truncations.size() > 1);
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kConfig;
    } catch (const DomainError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kConfig;
    } catch (const ValidationError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kConfig;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return kNumerical;
    }
}

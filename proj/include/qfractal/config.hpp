#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qfractal/dimension.hpp"
#include "qfractal/trajectory.hpp"
#include "qfractal/wavelet.hpp"
#include "qfractal/well.hpp"

namespace qfractal {

enum class ScenarioKind { space, time, trajectory, carpet, rational_study };

std::string to_string(ScenarioKind kind);
ScenarioKind parse_scenario_kind(std::string_view tag);

enum class OutputFormat { csv, json };

std::string to_string(OutputFormat format);
OutputFormat parse_output_format(std::string_view tag);

/// Window settings from the config; unset fields fall back to per-kind defaults.
struct WindowSettings {
    std::optional<WindowPolicy> policy;
    std::optional<int> drop_coarse;
    std::optional<int> drop_fine;
    std::optional<int> j_min;
    std::optional<int> j_max;
    std::optional<bool> resolution_floor;
    std::optional<bool> detrend;
    int levels = 0;
};

struct ScenarioConfig {
    std::string name = "scenario";
    ScenarioKind kind = ScenarioKind::space;

    WellConfig well;
    InitialStateSpec state = symmetric_two_square();
    std::string preset = "symmetric";
    bool renormalize = false;

    /// Probe expressions as written ("T/sqrt(2)", "-0.25"); resolved per state
    /// once its recurrence period is known.
    std::vector<std::string> probes;
    std::vector<int> truncations;
    std::vector<Family> families{std::begin(kAllFamilies), std::end(kAllFamilies)};
    int dyadic_exponent = 14;
    WindowSettings window;

    std::optional<std::string> duration;  // trajectory override, expression in T
    IntegratorOptions integrator;

    std::size_t nx = 512;
    std::size_t nt = 512;
    std::optional<double> clip;  // fraction of the max density kept in exports

    std::uint64_t seed = 20240611;

    std::filesystem::path output_dir = ".";
    OutputFormat format = OutputFormat::csv;

    /// Throws ConfigError when the kind's required fields are missing or out of range.
    void validate() const;
};

/// Parses the flat "key = value" format with [state], [scenario] and [output]
/// sections. '#' starts a comment. Errors carry the line number.
ScenarioConfig parse_config(std::string_view text);
ScenarioConfig load_config(const std::filesystem::path& path);

/// Writes a config back in the same format (used as the scenario echo in outputs).
std::string to_config_text(const ScenarioConfig& config);

/// Defaults used when a subcommand runs without --config.
ScenarioConfig default_scenario(ScenarioKind kind);

/// Truncations swept when a sweep config gives no N list.
std::vector<int> default_truncation_sweep();

/// Estimator options for one signal of this scenario at truncation N.
EstimatorOptions estimator_options(const ScenarioConfig& config, int truncation);

}  // namespace qfractal

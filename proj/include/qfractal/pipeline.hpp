#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qfractal/config.hpp"
#include "qfractal/dimension.hpp"
#include "qfractal/profiles.hpp"

namespace qfractal {

/// One (probe, family, N) estimate. Failed rows keep status "error" and an
/// error tag; their numeric fields are NaN.
struct ResultRow {
    std::string probe_label;
    double probe = 0.0;
    Family family = Family::haar;
    int truncation = 0;
    DimensionEstimate estimate;
    double captured_norm = 0.0;
    std::size_t integrator_steps = 0;
    double min_density = 0.0;
    std::string status = "ok";
    std::string error;

    bool ok() const { return status == "ok"; }
};

struct ResultTable {
    std::string scenario;
    ScenarioKind kind = ScenarioKind::space;
    std::vector<ResultRow> rows;
    /// scenario echo, version, timestamp and anything kind-specific.
    std::map<std::string, std::string> metadata;

    std::size_t failed() const;
};

/// Column names of the CSV/JSON row schema, shared by every kind.
const std::vector<std::string>& result_columns();

/// D versus N for one (probe, family).
struct ConvergenceSeries {
    std::string probe_label;
    Family family = Family::haar;
    std::vector<int> truncations;
    std::vector<double> dimensions;  // NaN for failed rows
};

/// Every probe x family x N combination; signals are built once per (probe, N)
/// and shared across families. Work items run in parallel; rows come back
/// sorted by (probe, family, N). Per-row failures are recorded, never thrown.
ResultTable run_table(const ScenarioConfig& config);

/// run_table over the config's N list (or the default sweep when empty).
ResultTable run_convergence_sweep(const ScenarioConfig& config);
std::vector<ConvergenceSeries> convergence_series(const ResultTable& table);

/// Space-profile dimensions at the commensurate and irrational fractions of
/// the recurrence time (defaults: 5T/7, 29T/41, T/sqrt(2), 70T/99, 12T/17).
/// Requires a parity-symmetric state.
ResultTable rational_time_study(const ScenarioConfig& config);

struct CarpetExport {
    Carpet carpet;
    std::optional<double> clip;
    double max_density = 0.0;
    std::map<std::string, std::string> metadata;

    /// Value written to files: min(rho, clip * max) when clipping is set.
    double exported(std::size_t ix, std::size_t it) const;
};

CarpetExport make_carpet(const ScenarioConfig& config);

/// Builds the scenario's state at truncation N (renormalized if requested).
SpectralState build_state(const ScenarioConfig& config, int truncation);

/// Short machine tag for an exception ("zero-energy", "invalid-start", ...).
std::string error_tag(const std::exception& e);

}  // namespace qfractal

#include "qfractal/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <limits>
#include <numeric>

#include "qfractal/error.hpp"
#include "qfractal/expression.hpp"
#include "qfractal/trajectory.hpp"

namespace qfractal {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

ResultRow failed_row(const std::string& label, double probe, Family family, int n, const std::exception& e) {
    ResultRow row;
    row.probe_label = label;
    row.probe = probe;
    row.family = family;
    row.truncation = n;
    row.estimate.slope = row.estimate.slope_stderr = row.estimate.intercept = kNaN;
    row.estimate.hurst = row.estimate.dimension = row.estimate.dimension_err = row.estimate.r2 = kNaN;
    row.estimate.family = family;
    row.captured_norm = kNaN;
    row.min_density = kNaN;
    row.status = "error";
    row.error = error_tag(e) + ": " + e.what();
    return row;
}

// Signal plus the bookkeeping that goes into every row built from it.
struct ProbeSignal {
    std::optional<SampledSignal> signal;
    std::size_t steps = 0;
    double min_density = kNaN;
};

ProbeSignal probe_signal(const ScenarioConfig& cfg, const SpectralState& state, double probe, double period) {
    ProbeSignal out;
    const int M = cfg.dyadic_exponent;
    switch (cfg.kind) {
        case ScenarioKind::space:
        case ScenarioKind::rational_study:
            out.signal.emplace(space_profile(state, probe, M));
            break;
        case ScenarioKind::time:
            out.signal.emplace(time_profile(state, probe, M, period));
            break;
        case ScenarioKind::trajectory: {
            const double duration =
                cfg.duration ? evaluate_expression(*cfg.duration, {period, cfg.well.length}) : period;
            if (!(duration > 0.0)) throw ConfigError("trajectory duration must be > 0");
            const Trajectory tr = integrate_trajectory(state, probe, duration, M, cfg.integrator);
            out.steps = tr.stats.steps;
            out.min_density = tr.stats.min_density;
            out.signal.emplace(trajectory_signal(tr));
            return out;
        }
        case ScenarioKind::carpet:
            throw ConfigError("carpet scenarios produce a grid, not a result table");
    }
    const auto& v = out.signal->values();
    out.min_density = *std::min_element(v.begin(), v.end());
    return out;
}

}  // namespace

std::size_t ResultTable::failed() const {
    return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [](const ResultRow& r) { return !r.ok(); }));
}

const std::vector<std::string>& result_columns() {
    static const std::vector<std::string> cols = {
        "probe_label", "probe",   "family", "N",     "D",     "D_err",
        "slope",       "slope_stderr", "H", "r2",    "j_min", "j_max",
        "window",      "captured_norm", "integrator_steps", "min_density", "status", "error"};
    return cols;
}

std::string error_tag(const std::exception& e) {
    if (dynamic_cast<const IntegrationStalledError*>(&e)) return "integration-stalled";
    if (dynamic_cast<const NodeProximityError*>(&e)) return "node-proximity";
    if (dynamic_cast<const InvalidStartError*>(&e)) return "invalid-start";
    if (dynamic_cast<const StationaryStateError*>(&e)) return "stationary-state";
    if (dynamic_cast<const DegenerateSignalError*>(&e)) return "degenerate-signal";
    if (dynamic_cast<const InsufficientScalesError*>(&e)) return "insufficient-scales";
    if (dynamic_cast<const ZeroEnergyError*>(&e)) return "zero-energy";
    if (dynamic_cast<const NumericalError*>(&e)) return "numerical";
    if (dynamic_cast<const ConfigError*>(&e)) return "config";
    if (dynamic_cast<const DomainError*>(&e)) return "domain";
    if (dynamic_cast<const ValidationError*>(&e)) return "validation";
    return "internal";
}

SpectralState build_state(const ScenarioConfig& config, int truncation) {
    return square_coefficients(config.state, config.well, truncation, config.renormalize);
}

ResultTable run_table(const ScenarioConfig& config) {
    config.validate();
    if (config.kind == ScenarioKind::carpet) throw ConfigError("use make_carpet for carpet scenarios");

    // states and periods up front; malformed probes are config errors, not row errors
    std::vector<SpectralState> states;
    std::vector<double> periods;
    for (int n : config.truncations) {
        states.push_back(build_state(config, n));
        periods.push_back(recurrence_period(states.back()));
    }
    for (const auto& p : config.probes) evaluate_expression(p, {1.0, config.well.length});
    if (config.duration) evaluate_expression(*config.duration, {1.0, config.well.length});

    const std::size_t np = config.probes.size();
    const std::size_t nn = config.truncations.size();
    const std::size_t items = np * nn;
    std::vector<std::vector<ResultRow>> slots(items);
    std::vector<double> probe_values(items, kNaN);

#pragma omp parallel for schedule(dynamic, 1)
    for (std::size_t item = 0; item < items; ++item) {
        const std::size_t ip = item / nn;
        const std::size_t in = item % nn;
        const std::string& label = config.probes[ip];
        const int n = config.truncations[in];
        const SpectralState& state = states[in];
        auto& out = slots[item];
        double probe = kNaN;
        try {
            probe = evaluate_expression(label, {periods[in], config.well.length});
            probe_values[item] = probe;
            const ProbeSignal ps = probe_signal(config, state, probe, periods[in]);
            const EstimatorOptions opts = estimator_options(config, n);
            for (Family f : config.families) {
                try {
                    ResultRow row;
                    row.probe_label = label;
                    row.probe = probe;
                    row.family = f;
                    row.truncation = n;
                    row.estimate = estimate_dimension(*ps.signal, f, opts);
                    row.captured_norm = state.captured_norm();
                    row.integrator_steps = ps.steps;
                    row.min_density = ps.min_density;
                    out.push_back(std::move(row));
                } catch (const std::exception& e) {
                    out.push_back(failed_row(label, probe, f, n, e));
                }
            }
        } catch (const std::exception& e) {
            out.clear();
            for (Family f : config.families) out.push_back(failed_row(label, probe, f, n, e));
        }
    }

    ResultTable table;
    table.scenario = config.name;
    table.kind = config.kind;
    for (auto& s : slots) {
        for (auto& r : s) table.rows.push_back(std::move(r));
    }
    // probe order: numeric value, then position in the config
    auto probe_rank = [&](const ResultRow& r) {
        const auto it = std::find(config.probes.begin(), config.probes.end(), r.probe_label);
        return static_cast<std::size_t>(it - config.probes.begin());
    };
    std::stable_sort(table.rows.begin(), table.rows.end(), [&](const ResultRow& a, const ResultRow& b) {
        const double pa = std::isnan(a.probe) ? std::numeric_limits<double>::infinity() : a.probe;
        const double pb = std::isnan(b.probe) ? std::numeric_limits<double>::infinity() : b.probe;
        if (pa != pb) return pa < pb;
        const auto ra = probe_rank(a), rb = probe_rank(b);
        if (ra != rb) return ra < rb;
        if (a.family != b.family) return a.family < b.family;
        return a.truncation < b.truncation;
    });

    table.metadata["scenario"] = config.name;
    table.metadata["kind"] = to_string(config.kind);
    table.metadata["version"] = QFRACTAL_VERSION;
    table.metadata["timestamp"] = utc_timestamp();
    table.metadata["config"] = to_config_text(config);
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", periods.back());
    table.metadata["period"] = buf;
    table.metadata["M"] = std::to_string(config.dyadic_exponent);
    return table;
}

ResultTable run_convergence_sweep(const ScenarioConfig& config) {
    ScenarioConfig c = config;
    if (c.truncations.empty()) c.truncations = default_truncation_sweep();
    return run_table(c);
}

std::vector<ConvergenceSeries> convergence_series(const ResultTable& table) {
    std::vector<ConvergenceSeries> out;
    for (const auto& r : table.rows) {
        auto it = std::find_if(out.begin(), out.end(), [&](const ConvergenceSeries& s) {
            return s.probe_label == r.probe_label && s.family == r.family;
        });
        if (it == out.end()) {
            out.push_back({r.probe_label, r.family, {}, {}});
            it = out.end() - 1;
        }
        it->truncations.push_back(r.truncation);
        it->dimensions.push_back(r.ok() ? r.estimate.dimension : kNaN);
    }
    return out;
}

ResultTable rational_time_study(const ScenarioConfig& config) {
    ScenarioConfig c = config;
    c.kind = ScenarioKind::rational_study;
    if (c.probes.empty()) c.probes = default_scenario(ScenarioKind::rational_study).probes;
    if (c.truncations.empty()) c.truncations = {2000};
    c.validate();
    const SpectralState probe_state = build_state(c, std::min(c.truncations.back(), 64));
    double cmax = 0.0;
    for (const auto& z : probe_state.coefficients()) cmax = std::max(cmax, std::abs(z));
    for (int n = 2; n <= probe_state.truncation(); n += 2) {
        if (std::abs(probe_state.coefficient(n)) > 1e-12 * cmax) {
            throw ConfigError("rational-time study needs a parity-symmetric state (c_n = 0 for even n)");
        }
    }
    return run_table(c);
}

double CarpetExport::exported(std::size_t ix, std::size_t it) const {
    const double v = carpet.at(ix, it);
    return clip ? std::min(v, *clip * max_density) : v;
}

CarpetExport make_carpet(const ScenarioConfig& config) {
    ScenarioConfig c = config;
    c.kind = ScenarioKind::carpet;
    if (c.truncations.empty()) c.truncations = default_scenario(ScenarioKind::carpet).truncations;
    c.validate();
    const SpectralState state = build_state(c, c.truncations.front());
    const double period = recurrence_period(state);
    CarpetExport out{carpet(state, c.nx, c.nt, period), c.clip, 0.0, {}};
    out.max_density = *std::max_element(out.carpet.density.begin(), out.carpet.density.end());
    char buf[40];
    out.metadata["scenario"] = c.name;
    out.metadata["kind"] = "carpet";
    out.metadata["version"] = QFRACTAL_VERSION;
    out.metadata["timestamp"] = utc_timestamp();
    out.metadata["config"] = to_config_text(c);
    out.metadata["N"] = std::to_string(c.truncations.front());
    std::snprintf(buf, sizeof buf, "%.17g", period);
    out.metadata["period"] = buf;
    std::snprintf(buf, sizeof buf, "%.17g", state.captured_norm());
    out.metadata["captured_norm"] = buf;
    std::snprintf(buf, sizeof buf, "%.17g", out.max_density);
    out.metadata["max_density"] = buf;
    if (c.clip) {
        std::snprintf(buf, sizeof buf, "%.17g", *c.clip);
        out.metadata["clip"] = buf;
    } else {
        out.metadata["clip"] = "none";
    }
    return out;
}

}  // namespace qfractal

#include "qfractal/dimension.hpp"

#include <algorithm>
#include <cmath>

#include "qfractal/error.hpp"

namespace qfractal {

std::string to_string(WindowPolicy policy) {
    switch (policy) {
        case WindowPolicy::fixed_drop: return "fixed-drop";
        case WindowPolicy::explicit_range: return "explicit";
        case WindowPolicy::auto_r2: return "auto-r2";
    }
    return "unknown";
}

WindowPolicy parse_window_policy(std::string_view tag) {
    if (tag == "fixed-drop") return WindowPolicy::fixed_drop;
    if (tag == "explicit") return WindowPolicy::explicit_range;
    if (tag == "auto-r2") return WindowPolicy::auto_r2;
    throw ConfigError("unknown window policy '" + std::string(tag) + "' (fixed-drop, explicit, auto-r2)");
}

namespace {

struct OlsFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_stderr = 0.0;
    double r2 = 1.0;
};

OlsFit ols(std::span<const double> xs, std::span<const double> ys) {
    const auto n = static_cast<double>(xs.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0;
    double sxy = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    OlsFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double ssr = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double r = ys[i] - (f.intercept + f.slope * xs[i]);
        ssr += r * r;
    }
    f.slope_stderr = xs.size() > 2 ? std::sqrt(ssr / (n - 2.0) / sxx) : 0.0;
    f.r2 = syy > 0.0 ? std::clamp(1.0 - ssr / syy, 0.0, 1.0) : 1.0;
    return f;
}

void require_positive(const LevelEnergies& energies, int j_min, int j_max) {
    for (int j = j_min; j <= j_max; ++j) {
        if (!(energies.levels[static_cast<std::size_t>(j - 1)].energy > 0.0)) {
            throw ZeroEnergyError("level " + std::to_string(j) +
                                  " has zero detail energy; the signal is smooth or degenerate at that scale");
        }
    }
}

OlsFit fit_levels(const LevelEnergies& energies, int j_min, int j_max) {
    std::vector<double> xs;
    std::vector<double> ys;
    for (int j = j_min; j <= j_max; ++j) {
        xs.push_back(j);
        ys.push_back(std::log2(energies.levels[static_cast<std::size_t>(j - 1)].energy));
    }
    return ols(xs, ys);
}

}  // namespace

ScalingWindow select_window(const LevelEnergies& energies, const WindowRequest& request) {
    const int levels = static_cast<int>(energies.levels.size());
    const int floor = std::max(1, request.level_floor);
    ScalingWindow w;
    w.policy = request.policy;
    switch (request.policy) {
        case WindowPolicy::fixed_drop: {
            if (request.drop_coarse < 0 || request.drop_fine < 0) {
                throw ConfigError("level drop counts must be non-negative");
            }
            w.j_min = std::max(1 + request.drop_fine, floor);
            w.j_max = levels - request.drop_coarse;
            break;
        }
        case WindowPolicy::explicit_range: {
            if (request.j_min < 1 || request.j_max > levels || request.j_min > request.j_max) {
                throw ValidationError("explicit window [" + std::to_string(request.j_min) + ", " +
                                      std::to_string(request.j_max) + "] outside available levels 1.." +
                                      std::to_string(levels));
            }
            w.j_min = request.j_min;
            w.j_max = request.j_max;
            break;
        }
        case WindowPolicy::auto_r2: {
            const int min_len = std::max(3, request.auto_min_length);
            double best_r2 = -1.0;
            int best_len = 0;
            for (int a = floor; a <= levels; ++a) {
                for (int b = a + min_len - 1; b <= levels; ++b) {
                    bool positive = true;
                    for (int j = a; j <= b && positive; ++j) {
                        positive = energies.levels[static_cast<std::size_t>(j - 1)].energy > 0.0;
                    }
                    if (!positive) break;
                    const double r2 = fit_levels(energies, a, b).r2;
                    const int len = b - a + 1;
                    constexpr double tie = 1e-12;
                    // prefer higher r2, then the longer window, then the coarser start
                    const bool better = r2 > best_r2 + tie ||
                                        (std::abs(r2 - best_r2) <= tie &&
                                         (len > best_len || (len == best_len && a > w.j_min)));
                    if (better) {
                        best_r2 = r2;
                        best_len = len;
                        w.j_min = a;
                        w.j_max = b;
                    }
                }
            }
            if (best_len == 0) {
                throw InsufficientScalesError("no window of " + std::to_string(min_len) +
                                              " positive-energy levels available; increase M");
            }
            break;
        }
    }
    if (w.j_max - w.j_min < 2) {
        throw InsufficientScalesError("scaling window [" + std::to_string(w.j_min) + ", " + std::to_string(w.j_max) +
                                      "] has fewer than 3 levels out of " + std::to_string(levels) +
                                      "; increase M");
    }
    return w;
}

DimensionEstimate fit_scaling(const LevelEnergies& energies, const ScalingWindow& window, Family family) {
    const int levels = static_cast<int>(energies.levels.size());
    if (window.j_min < 1 || window.j_max > levels) throw ValidationError("scaling window outside available levels");
    if (window.points() < 3) throw InsufficientScalesError("scaling fit needs at least 3 levels");
    require_positive(energies, window.j_min, window.j_max);

    const auto f = fit_levels(energies, window.j_min, window.j_max);
    DimensionEstimate e;
    e.slope = f.slope;
    e.slope_stderr = f.slope_stderr;
    e.intercept = f.intercept;
    e.r2 = f.r2;
    e.hurst = f.slope / 2.0;
    e.dimension = 2.0 - e.hurst;
    e.dimension_err = f.slope_stderr / 2.0;
    e.window = window;
    e.family = family;
    return e;
}

std::vector<double> remove_endpoint_trend(std::span<const double> values) {
    std::vector<double> out(values.begin(), values.end());
    const std::size_t n = out.size();
    if (n < 3) return out;
    // pick the ramp so the wrap step v[0] - v[n-1] matches the mean of its two
    // neighbouring steps; an already periodic signal is left (nearly) untouched
    const double local = 0.5 * ((out[1] - out[0]) + (out[n - 1] - out[n - 2]));
    const double slope = (out[n - 1] - out[0] + local) / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) out[i] -= slope * static_cast<double>(i);
    return out;
}

DimensionEstimate estimate_dimension(const SampledSignal& signal, const WaveletFilter& filter,
                                     const EstimatorOptions& options) {
    const int m = signal.dyadic_exponent();
    const int levels = options.levels > 0 ? options.levels : m - 2;
    if (levels < 3) throw InsufficientScalesError("signal too short for a scaling fit; increase M");
    const auto decomposition = options.remove_endpoint_trend
                                   ? dwt(remove_endpoint_trend(signal.values()), filter, levels)
                                   : dwt(signal, filter, levels);
    const auto energies = level_energies(decomposition);
    const auto window = select_window(energies, options.window);
    return fit_scaling(energies, window, filter.family);
}

DimensionEstimate estimate_dimension(const SampledSignal& signal, Family family, const EstimatorOptions& options) {
    return estimate_dimension(signal, make_filter(family), options);
}

}  // namespace qfractal

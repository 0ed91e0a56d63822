#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qfractal/signal.hpp"
#include "qfractal/wavelet.hpp"

namespace qfractal {

enum class WindowPolicy { fixed_drop, explicit_range, auto_r2 };

std::string to_string(WindowPolicy policy);
WindowPolicy parse_window_policy(std::string_view tag);

/// How to choose the regression window. Levels are numbered j = 1 (finest)
/// to J (coarsest).
struct WindowRequest {
    WindowPolicy policy = WindowPolicy::fixed_drop;
    int drop_coarse = 2;
    int drop_fine = 2;
    int j_min = 0;  // explicit_range only
    int j_max = 0;
    /// Lowest level allowed into the window. Used to keep levels finer than a
    /// known resolution limit (e.g. a spectral cutoff) out of the fit.
    int level_floor = 1;
    int auto_min_length = 4;
};

struct ScalingWindow {
    int j_min = 0;
    int j_max = 0;
    WindowPolicy policy = WindowPolicy::fixed_drop;

    int points() const { return j_max - j_min + 1; }
};

struct DimensionEstimate {
    double slope = 0.0;
    double slope_stderr = 0.0;
    double intercept = 0.0;
    double hurst = 0.0;
    double dimension = 0.0;
    double dimension_err = 0.0;
    double r2 = 0.0;
    ScalingWindow window;
    Family family = Family::haar;
};

ScalingWindow select_window(const LevelEnergies& energies, const WindowRequest& request);

/// OLS of log2 E_j on j over the window. With j = 1 finest, E_j ~ 2^(2 H j),
/// so H = slope / 2 and D = 2 - H.
DimensionEstimate fit_scaling(const LevelEnergies& energies, const ScalingWindow& window,
                              Family family = Family::haar);

struct EstimatorOptions {
    WindowRequest window;
    /// Decomposition depth; 0 selects M - 2.
    int levels = 0;
    /// Subtract a linear ramp before the transform so the periodic extension
    /// steps across the wrap like its neighbours do (no jump, no kink).
    bool remove_endpoint_trend = true;
};

std::vector<double> remove_endpoint_trend(std::span<const double> values);

DimensionEstimate estimate_dimension(const SampledSignal& signal, const WaveletFilter& filter,
                                     const EstimatorOptions& options = {});
DimensionEstimate estimate_dimension(const SampledSignal& signal, Family family,
                                     const EstimatorOptions& options = {});

struct BoxCountEstimate {
    double dimension = 1.0;
    double stderr_ = 0.0;
    double r2 = 1.0;
    int k_min = 0;
    int k_max = 0;
    std::vector<double> counts;  // N(2^-k) for k = 0..M
};

/// Box-counting dimension of the graph rescaled to the unit square, with box
/// sides 2^-k. The fit uses k in [1 + drop_coarse, M - drop_fine].
BoxCountEstimate box_counting_dimension(const SampledSignal& signal, int drop_coarse = 2, int drop_fine = 2);

struct WeierstrassOptions {
    double gamma = 1.7;
    /// 0 keeps every term below the Nyquist frequency of the grid.
    int terms = 0;
};

/// W(t) = sum_k gamma^((D-2)k) [1 - cos(gamma^k t + phi_k)] on 2^M points of
/// [0, 2 pi), with phases phi_k drawn from the seed.
SampledSignal synth_weierstrass(double target_dimension, int dyadic_exponent, std::uint64_t seed,
                                const WeierstrassOptions& options = {});

/// Fractional Brownian path on [0, 1) with 2^M samples, B(0) = 0, from exact
/// circulant embedding of fractional Gaussian noise.
SampledSignal synth_fbm(double hurst, int dyadic_exponent, std::uint64_t seed);

}  // namespace qfractal

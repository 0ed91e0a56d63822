#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "qfractal/wavelet.hpp"

namespace qfractal {

struct CheckResult {
    std::string name;
    bool passed = false;
    double measured = 0.0;
    double tolerance = 0.0;
    std::string detail;
};

struct ValidateReport {
    std::vector<CheckResult> checks;

    bool passed() const;
    std::size_t failures() const;
};

/// Worst violations of the orthonormal filter-bank identities.
struct FilterDefects {
    double lowpass_sum = 0.0;     // |sum h - sqrt 2|
    double orthonormality = 0.0;  // max_m |sum_k h_k h_{k+2m} - delta_m|
    double highpass_sum = 0.0;    // |sum g|
    /// max over p < vanishing moments of |sum_k g_k u_k^p| / sum_k |g_k u_k^p|,
    /// u_k = k / (K - 1) - 1/2.
    double moments = 0.0;
};

FilterDefects filter_defects(const WaveletFilter& filter);

struct ValidateOptions {
    std::uint64_t seed = 1;
    int ensemble = 16;
    int calibration_exponent = 14;
    bool calibration = true;
    /// Where filters come from; tests swap in corrupted filters here.
    std::function<WaveletFilter(Family)> filter_source = [](Family f) { return make_filter(f); };
};

/// Filter oracles, Parseval and roundtrip, revival times, continuity order,
/// carpet norm conservation and the fBm / Weierstrass calibration ensembles.
ValidateReport run_validation(const ValidateOptions& options = {});

std::string format_report(const ValidateReport& report);

}  // namespace qfractal

#include "qfractal/validate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "qfractal/dimension.hpp"
#include "qfractal/error.hpp"
#include "qfractal/profiles.hpp"
#include "qfractal/well.hpp"

namespace qfractal {

bool ValidateReport::passed() const { return failures() == 0; }

std::size_t ValidateReport::failures() const {
    return static_cast<std::size_t>(
        std::count_if(checks.begin(), checks.end(), [](const CheckResult& c) { return !c.passed; }));
}

FilterDefects filter_defects(const WaveletFilter& f) {
    FilterDefects d;
    const auto& h = f.lowpass;
    const auto& g = f.highpass;
    const std::size_t K = h.size();
    double hs = 0.0, gs = 0.0;
    for (std::size_t k = 0; k < K; ++k) {
        hs += h[k];
        gs += g[k];
    }
    d.lowpass_sum = std::abs(hs - std::numbers::sqrt2);
    d.highpass_sum = std::abs(gs);
    for (std::size_t m = 0; 2 * m < K; ++m) {
        double s = 0.0;
        for (std::size_t k = 0; k + 2 * m < K; ++k) s += h[k] * h[k + 2 * m];
        d.orthonormality = std::max(d.orthonormality, std::abs(s - (m == 0 ? 1.0 : 0.0)));
    }
    for (int p = 0; p < f.vanishing_moments; ++p) {
        double s = 0.0, scale = 0.0;
        for (std::size_t k = 0; k < K; ++k) {
            const double u = K > 1 ? static_cast<double>(k) / static_cast<double>(K - 1) - 0.5 : 0.0;
            const double term = g[k] * std::pow(u, p);
            s += term;
            scale += std::abs(term);
        }
        if (scale > 0.0) d.moments = std::max(d.moments, std::abs(s) / scale);
    }
    return d;
}

namespace {

CheckResult check(std::string name, double measured, double tolerance, std::string detail = {}) {
    return {std::move(name), std::isfinite(measured) && measured <= tolerance, measured, tolerance, std::move(detail)};
}

CheckResult failed_check(std::string name, const std::exception& e) {
    return {std::move(name), false, std::numeric_limits<double>::quiet_NaN(), 0.0, e.what()};
}

std::vector<double> white_noise(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> dist;
    std::vector<double> v(n);
    for (auto& x : v) x = dist(rng);
    return v;
}

void transform_checks(ValidateReport& rep, const ValidateOptions& opt) {
    const auto signal = white_noise(std::size_t{1} << 12, opt.seed);
    double energy = 0.0, sup = 0.0;
    for (double x : signal) {
        energy += x * x;
        sup = std::max(sup, std::abs(x));
    }
    for (Family fam : kAllFamilies) {
        const std::string tag = to_string(fam);
        try {
            const WaveletFilter f = opt.filter_source(fam);
            const FilterDefects d = filter_defects(f);
            rep.checks.push_back(check("filter.lowpass_sum." + tag, d.lowpass_sum, 1e-12));
            rep.checks.push_back(check("filter.orthonormality." + tag, d.orthonormality, 1e-12));
            rep.checks.push_back(check("filter.highpass_sum." + tag, d.highpass_sum, 1e-12));
            rep.checks.push_back(check("filter.vanishing_moments." + tag, d.moments, 1e-8));

            const auto dec = dwt(std::span<const double>(signal), f, 12);
            const double total = level_energies(dec).total();
            rep.checks.push_back(check("parseval." + tag, std::abs(total - energy) / energy, 1e-10));
            const auto back = idwt(dec, f);
            double err = 0.0;
            for (std::size_t i = 0; i < signal.size(); ++i) err = std::max(err, std::abs(back[i] - signal[i]));
            rep.checks.push_back(check("roundtrip." + tag, err / sup, 1e-10));
        } catch (const std::exception& e) {
            rep.checks.push_back(failed_check("filter." + tag, e));
        }
    }
}

void physics_checks(ValidateReport& rep) {
    const WellConfig cfg;
    try {
        const double t_sym = revival_time(square_coefficients(symmetric_two_square(), cfg, 200));
        const double want = 1.0 / (2.0 * std::numbers::pi);
        rep.checks.push_back(check("revival.symmetric", std::abs(t_sym - want) / want, 1e-12,
                                   "T = " + std::to_string(t_sym)));
    } catch (const std::exception& e) {
        rep.checks.push_back(failed_check("revival.symmetric", e));
    }
    try {
        const double t_asym = revival_time(square_coefficients(asymmetric_single_square(), cfg, 200));
        const double want = 4.0 / std::numbers::pi;
        rep.checks.push_back(check("revival.asymmetric", std::abs(t_asym - want) / want, 1e-12,
                                   "T = " + std::to_string(t_asym)));
    } catch (const std::exception& e) {
        rep.checks.push_back(failed_check("revival.asymmetric", e));
    }
    try {
        // refine grid and dt together; centred differences should give ratio ~ 1/4
        const SpectralState s = square_coefficients(symmetric_two_square(), cfg, 100);
        const double t = 0.3 / (2.0 * std::numbers::pi);
        const double r1 = continuity_residual(s, 12, t, 2e-6);
        const double r2 = continuity_residual(s, 13, t, 1e-6);
        const double ratio = r2 / r1;
        char buf[96];
        std::snprintf(buf, sizeof buf, "residuals %.3e -> %.3e", r1, r2);
        rep.checks.push_back(check("continuity.second_order", std::abs(ratio - 0.25), 0.05, buf));
    } catch (const std::exception& e) {
        rep.checks.push_back(failed_check("continuity.second_order", e));
    }
    try {
        const SpectralState s = square_coefficients(symmetric_two_square(), cfg, 100);
        const Carpet c = carpet(s, 513, 64);
        double worst = 0.0;
        for (std::size_t it = 0; it < c.t.size(); ++it) {
            worst = std::max(worst, std::abs(carpet_column_norm(c, it) - s.captured_norm()));
        }
        rep.checks.push_back(check("carpet.column_norm", worst, 1e-6));
    } catch (const std::exception& e) {
        rep.checks.push_back(failed_check("carpet.column_norm", e));
    }
}

void calibration_checks(ValidateReport& rep, const ValidateOptions& opt) {
    const int M = opt.calibration_exponent;
    const int n = std::max(opt.ensemble, 1);
    auto ensemble = [&](const std::string& name, double target, Family fam, auto&& make) {
        try {
            const WaveletFilter f = opt.filter_source(fam);
            double sum = 0.0;
            for (int i = 0; i < n; ++i) {
                sum += estimate_dimension(make(opt.seed + static_cast<std::uint64_t>(i)), f).dimension;
            }
            const double mean = sum / n;
            char buf[64];
            std::snprintf(buf, sizeof buf, "mean D = %.4f, target %.2f", mean, target);
            rep.checks.push_back(check(name, std::abs(mean - target), 0.05, buf));
        } catch (const std::exception& e) {
            rep.checks.push_back(failed_check(name, e));
        }
    };
    for (Family fam : kAllFamilies) {
        for (double d : {1.2, 1.5, 1.8}) {
            char name[64];
            std::snprintf(name, sizeof name, "calibration.weierstrass.D%.1f.%s", d, to_string(fam).c_str());
            ensemble(name, d, fam, [&](std::uint64_t s) { return synth_weierstrass(d, M, s); });
        }
        for (double h : {0.3, 0.5, 0.7}) {
            char name[64];
            std::snprintf(name, sizeof name, "calibration.fbm.H%.1f.%s", h, to_string(fam).c_str());
            ensemble(name, 2.0 - h, fam, [&](std::uint64_t s) { return synth_fbm(h, M, s); });
        }
    }
}

}  // namespace

ValidateReport run_validation(const ValidateOptions& options) {
    ValidateReport rep;
    transform_checks(rep, options);
    physics_checks(rep);
    if (options.calibration) calibration_checks(rep, options);
    return rep;
}

std::string format_report(const ValidateReport& report) {
    std::ostringstream o;
    for (const auto& c : report.checks) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.3e <= %.1e", c.measured, c.tolerance);
        o << (c.passed ? "PASS " : "FAIL ") << c.name << "  " << buf;
        if (!c.detail.empty()) o << "  (" << c.detail << ")";
        o << "\n";
    }
    o << report.checks.size() - report.failures() << "/" << report.checks.size() << " checks passed\n";
    return o.str();
}

}  // namespace qfractal

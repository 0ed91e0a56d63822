#include "qfractal/well.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "field.hpp"
#include "qfractal/error.hpp"

namespace qfractal {

namespace {

constexpr double kEdgeTolerance = 1e-12;
constexpr double kOccupationCutoff = 1e-12;

void check_inside(const WellConfig& config, double x) {
    if (!(x >= config.left() && x <= config.right())) {
        throw DomainError("position x = " + std::to_string(x) + " lies outside the well [" +
                          std::to_string(config.left()) + ", " + std::to_string(config.right()) + "]");
    }
}

}  // namespace

NodeProximityError::NodeProximityError(double x_, double t_, double rho_)
    : NumericalError("density " + std::to_string(rho_) + " below node threshold at x = " + std::to_string(x_) +
                     ", t = " + std::to_string(t_)),
      x(x_),
      t(t_),
      rho(rho_) {}

void WellConfig::validate() const {
    if (!(length > 0.0) || !(hbar > 0.0) || !(mass > 0.0)) {
        throw ConfigError("well length, hbar and mass must all be positive");
    }
}

double WellConfig::ground_energy() const {
    return std::numbers::pi * std::numbers::pi * hbar * hbar / (2.0 * mass * length * length);
}

void InitialStateSpec::validate() const {
    if (squares.empty()) throw ValidationError("initial state has no squares");
    double weight = 0.0;
    for (const auto& s : squares) {
        if (!(s.width > 0.0)) throw ValidationError("square width must be positive");
        const double lo = s.center - 0.5 * s.width;
        const double hi = s.center + 0.5 * s.width;
        if (lo < -0.5 - kEdgeTolerance || hi > 0.5 + kEdgeTolerance) {
            throw DomainError("square centred at " + std::to_string(s.center) + " with width " +
                              std::to_string(s.width) + " leaves the well");
        }
        if (!std::isfinite(s.amplitude.real()) || !std::isfinite(s.amplitude.imag())) {
            throw ValidationError("square amplitude is not finite");
        }
        weight += std::norm(s.amplitude);
    }
    if (!(weight > 0.0)) throw ValidationError("initial state has zero total weight");

    std::vector<Square> sorted = squares;
    std::sort(sorted.begin(), sorted.end(),
              [](const Square& a, const Square& b) { return a.center - 0.5 * a.width < b.center - 0.5 * b.width; });
    for (std::size_t i = 1; i < sorted.size(); ++i) {
        const double prev_hi = sorted[i - 1].center + 0.5 * sorted[i - 1].width;
        const double lo = sorted[i].center - 0.5 * sorted[i].width;
        if (lo < prev_hi - kEdgeTolerance) throw ValidationError("initial-state squares overlap");
    }
}

InitialStateSpec symmetric_two_square() {
    const double a = 1.0 / std::numbers::sqrt2;
    return {{{-0.25, 0.25, {a, 0.0}}, {0.25, 0.25, {a, 0.0}}}, "symmetric two-square state"};
}

InitialStateSpec asymmetric_single_square() {
    return {{{-0.25, 0.25, {1.0, 0.0}}}, "asymmetric single square"};
}

InitialStateSpec full_width_square() { return {{{0.0, 1.0, {1.0, 0.0}}}, "full-width square"}; }

SpectralState::SpectralState(WellConfig config, std::vector<complex> coefficients)
    : config_(config), coefficients_(std::move(coefficients)) {
    config_.validate();
    if (coefficients_.empty()) throw ValidationError("spectral state needs at least one coefficient");
    double norm = 0.0;
    for (const auto& c : coefficients_) {
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
            throw ValidationError("spectral coefficient is not finite");
        }
        norm += std::norm(c);
    }
    if (!(norm > 0.0) || norm > 1.0 + 1e-12) {
        throw ValidationError("captured norm " + std::to_string(norm) + " outside (0, 1]");
    }
    captured_norm_ = norm;
}

SpectralState eigenstate(const WellConfig& config, int n, int truncation) {
    if (n < 1 || truncation < n) throw ValidationError("eigenstate index must lie in [1, truncation]");
    std::vector<complex> c(static_cast<std::size_t>(truncation), complex{0.0, 0.0});
    c[static_cast<std::size_t>(n - 1)] = 1.0;
    return {config, std::move(c)};
}

SpectralState square_coefficients(const InitialStateSpec& spec, const WellConfig& config, int truncation,
                                  bool renormalize) {
    config.validate();
    spec.validate();
    if (truncation < 1) throw ValidationError("truncation order N must be >= 1");

    double weight = 0.0;
    for (const auto& s : spec.squares) weight += std::norm(s.amplitude);
    const double inv_norm = 1.0 / std::sqrt(weight);

    std::vector<complex> c(static_cast<std::size_t>(truncation), complex{0.0, 0.0});
    for (const auto& s : spec.squares) {
        // u = x/L + 1/2 maps the well onto [0, 1]; the overlap with sin(n pi u)
        // is sqrt(2/w)/(n pi) * [cos(n pi u1) - cos(n pi u2)], written as a product
        // of sines to avoid cancellation.
        const double u1 = s.center - 0.5 * s.width + 0.5;
        const double u2 = s.center + 0.5 * s.width + 0.5;
        const double mid = 0.5 * (u1 + u2);
        const double half = 0.5 * (u2 - u1);
        const complex amp = s.amplitude * inv_norm * std::sqrt(2.0 / s.width);
        for (int n = 1; n <= truncation; ++n) {
            const double npi = n * std::numbers::pi;
            const double diff = 2.0 * std::sin(npi * mid) * std::sin(npi * half);
            c[static_cast<std::size_t>(n - 1)] += amp * (diff / npi);
        }
    }
    if (renormalize) {
        double norm = 0.0;
        for (const auto& v : c) norm += std::norm(v);
        const double scale = 1.0 / std::sqrt(norm);
        for (auto& v : c) v *= scale;
    }
    return {config, std::move(c)};
}

double eigenfunction(const WellConfig& config, int n, double x) {
    return std::sqrt(2.0 / config.length) * std::sin(n * std::numbers::pi * (x / config.length + 0.5));
}

complex wavefunction(const SpectralState& state, double x, double t) {
    check_inside(state.config(), x);
    if (x == state.config().left() || x == state.config().right()) return {0.0, 0.0};
    return detail::FieldEvaluator(state).at(x, t).psi;
}

double density(const SpectralState& state, double x, double t) { return std::norm(wavefunction(state, x, t)); }

double current(const SpectralState& state, double x, double t) {
    check_inside(state.config(), x);
    if (x == state.config().left() || x == state.config().right()) return 0.0;
    const auto f = detail::FieldEvaluator(state).at(x, t);
    const auto& cfg = state.config();
    return cfg.hbar / cfg.mass * (std::conj(f.psi) * f.dpsi).imag();
}

std::vector<int> occupied_levels(const SpectralState& state) {
    double cmax = 0.0;
    for (const auto& c : state.coefficients()) cmax = std::max(cmax, std::abs(c));
    std::vector<int> out;
    for (int n = 1; n <= state.truncation(); ++n) {
        if (std::abs(state.coefficient(n)) > kOccupationCutoff * cmax) out.push_back(n);
    }
    return out;
}

double revival_time(const SpectralState& state) {
    const auto levels = occupied_levels(state);
    if (levels.size() < 2) {
        throw StationaryStateError("revival time undefined: only one eigenstate is occupied");
    }
    const long long base = static_cast<long long>(levels.front()) * levels.front();
    long long g = 0;
    for (int n : levels) g = std::gcd(g, static_cast<long long>(n) * n - base);
    const auto& cfg = state.config();
    return 2.0 * std::numbers::pi * cfg.hbar / (static_cast<double>(g) * cfg.ground_energy());
}

double recurrence_period(const SpectralState& state) {
    const auto levels = occupied_levels(state);
    if (levels.size() >= 2) return revival_time(state);
    return 2.0 * std::numbers::pi * state.config().hbar / state.config().energy(levels.front());
}

double continuity_residual(const SpectralState& state, int grid_exponent, double t, double dt) {
    if (!(dt > 0.0)) throw ValidationError("continuity residual needs dt > 0");
    if (grid_exponent < 8 || grid_exponent > 24) throw ValidationError("grid exponent must lie in [8, 24]");
    const auto& cfg = state.config();
    const long long cells = 1LL << grid_exponent;
    const double dx = cfg.length / static_cast<double>(cells);
    const detail::FieldEvaluator field(state);
    const double flux_scale = cfg.hbar / cfg.mass;

    auto j_at = [&](double x) {
        const auto f = field.at(x, t);
        return flux_scale * (std::conj(f.psi) * f.dpsi).imag();
    };

    double worst = 0.0;
#pragma omp parallel for schedule(static) reduction(max : worst)
    for (long long i = 1; i < cells; ++i) {
        const double x = cfg.left() + static_cast<double>(i) * dx;
        const double drho = (std::norm(field.at(x, t + dt).psi) - std::norm(field.at(x, t - dt).psi)) / (2.0 * dt);
        const double dj = (j_at(x + dx) - j_at(x - dx)) / (2.0 * dx);
        worst = std::max(worst, std::abs(drho + dj));
    }
    return worst;
}

}  // namespace qfractal

#include "qfractal/profiles.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "field.hpp"
#include "qfractal/error.hpp"

namespace qfractal {

namespace {

void check_exponent(int m) {
    if (m < 6 || m > 24) throw ValidationError("dyadic exponent M must lie in [6, 24], got " + std::to_string(m));
}

double space_point(const WellConfig& cfg, std::size_t i, std::size_t n) {
    return cfg.left() + (static_cast<double>(i) + 0.5) * cfg.length / static_cast<double>(n);
}

void check_time_probe(const WellConfig& cfg, double x) {
    if (!(x >= cfg.left() && x <= cfg.right())) {
        throw DomainError("time-profile position " + std::to_string(x) + " lies outside the well");
    }
    if (x == cfg.left() || x == cfg.right()) {
        throw DegenerateSignalError("time profile at a wall is identically zero");
    }
}

std::string space_label(double t) { return "space profile at t = " + std::to_string(t); }
std::string time_label(double x) { return "time profile at x = " + std::to_string(x); }

}  // namespace

SampledSignal space_profile(const SpectralState& state, double t, int m) {
    check_exponent(m);
    const auto& cfg = state.config();
    const std::size_t n = std::size_t{1} << m;
    const detail::FieldEvaluator field(state);
    const auto evolved = field.evolved(t);
    std::vector<double> values(n);
#pragma omp parallel for schedule(static)
    for (std::size_t i = 0; i < n; ++i) {
        values[i] = std::norm(field.psi_from(evolved, space_point(cfg, i, n)));
    }
    return {std::move(values), {AxisKind::space, space_point(cfg, 0, n), cfg.length / static_cast<double>(n)},
            space_label(t)};
}

SampledSignal time_profile(const SpectralState& state, double x, int m, std::optional<double> period) {
    check_exponent(m);
    const auto& cfg = state.config();
    check_time_probe(cfg, x);
    const double T = period.value_or(recurrence_period(state));
    const std::size_t n = std::size_t{1} << m;
    const std::size_t count = state.coefficients().size();

    // a_n = c_n phi_n(x); the time dependence only enters through exp(-i n^2 w t).
    std::vector<complex> weights(count);
    for (std::size_t k = 0; k < count; ++k) {
        weights[k] = state.coefficients()[k] * eigenfunction(cfg, static_cast<int>(k + 1), x);
    }
    const double rate = cfg.ground_energy() / cfg.hbar;
    const double dt = T / static_cast<double>(n);
    std::vector<double> values(n);
#pragma omp parallel
    {
        std::vector<complex> phases(count);
#pragma omp for schedule(static)
        for (std::size_t i = 0; i < n; ++i) {
            detail::phase_table(rate * dt * static_cast<double>(i), count, phases.data());
            complex psi{0.0, 0.0};
            for (std::size_t k = 0; k < count; ++k) psi += weights[k] * phases[k];
            values[i] = std::norm(psi);
        }
    }
    return {std::move(values), {AxisKind::time, 0.0, dt}, time_label(x)};
}

Carpet carpet(const SpectralState& state, std::size_t nx, std::size_t nt, std::optional<double> period) {
    if (nx < 2 || nt < 2) throw ValidationError("carpet needs at least 2 x and 2 t samples");
    const auto& cfg = state.config();
    Carpet out;
    out.period = period.value_or(recurrence_period(state));
    out.x.resize(nx);
    out.t.resize(nt);
    for (std::size_t i = 0; i < nx; ++i) out.x[i] = cfg.left() + cfg.length * static_cast<double>(i) / (nx - 1);
    for (std::size_t k = 0; k < nt; ++k) out.t[k] = out.period * static_cast<double>(k) / (nt - 1);
    out.density.assign(nx * nt, 0.0);

    const detail::FieldEvaluator field(state);
#pragma omp parallel for schedule(dynamic, 1)
    for (std::size_t k = 0; k < nt; ++k) {
        const auto evolved = field.evolved(out.t[k]);
        for (std::size_t i = 1; i + 1 < nx; ++i) {
            out.density[i * nt + k] = std::norm(field.psi_from(evolved, out.x[i]));
        }
    }
    return out;
}

double carpet_column_norm(const Carpet& c, std::size_t it) {
    const std::size_t nx = c.x.size();
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < nx; ++i) {
        s += 0.5 * (c.at(i, it) + c.at(i + 1, it)) * (c.x[i + 1] - c.x[i]);
    }
    return s;
}

namespace reference {

complex wavefunction(const SpectralState& state, double x, double t) {
    const auto& cfg = state.config();
    complex psi{0.0, 0.0};
    for (int n = 1; n <= state.truncation(); ++n) {
        const double phase = -cfg.energy(n) * t / cfg.hbar;
        psi += state.coefficient(n) * std::polar(1.0, phase) * eigenfunction(cfg, n, x);
    }
    return psi;
}

SampledSignal space_profile(const SpectralState& state, double t, int m) {
    check_exponent(m);
    const auto& cfg = state.config();
    const std::size_t n = std::size_t{1} << m;
    std::vector<double> values(n);
    for (std::size_t i = 0; i < n; ++i) values[i] = std::norm(reference::wavefunction(state, space_point(cfg, i, n), t));
    return {std::move(values), {AxisKind::space, space_point(cfg, 0, n), cfg.length / static_cast<double>(n)},
            space_label(t)};
}

SampledSignal time_profile(const SpectralState& state, double x, int m, std::optional<double> period) {
    check_exponent(m);
    check_time_probe(state.config(), x);
    const double T = period.value_or(recurrence_period(state));
    const std::size_t n = std::size_t{1} << m;
    const double dt = T / static_cast<double>(n);
    std::vector<double> values(n);
    for (std::size_t i = 0; i < n; ++i) values[i] = std::norm(reference::wavefunction(state, x, dt * static_cast<double>(i)));
    return {std::move(values), {AxisKind::time, 0.0, dt}, time_label(x)};
}

Carpet carpet(const SpectralState& state, std::size_t nx, std::size_t nt, std::optional<double> period) {
    if (nx < 2 || nt < 2) throw ValidationError("carpet needs at least 2 x and 2 t samples");
    const auto& cfg = state.config();
    Carpet out;
    out.period = period.value_or(recurrence_period(state));
    out.x.resize(nx);
    out.t.resize(nt);
    for (std::size_t i = 0; i < nx; ++i) out.x[i] = cfg.left() + cfg.length * static_cast<double>(i) / (nx - 1);
    for (std::size_t k = 0; k < nt; ++k) out.t[k] = out.period * static_cast<double>(k) / (nt - 1);
    out.density.assign(nx * nt, 0.0);
    for (std::size_t i = 1; i + 1 < nx; ++i) {
        for (std::size_t k = 0; k < nt; ++k) out.density[i * nt + k] = std::norm(reference::wavefunction(state, out.x[i], out.t[k]));
    }
    return out;
}

}  // namespace reference

}  // namespace qfractal

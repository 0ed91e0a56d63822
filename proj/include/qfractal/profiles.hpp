#pragma once

#include <optional>
#include <vector>

#include "qfractal/signal.hpp"
#include "qfractal/well.hpp"

namespace qfractal {

/// rho(x, t) on the open cell-centred grid x_i = -L/2 + (i + 1/2) L / 2^M.
SampledSignal space_profile(const SpectralState& state, double t, int dyadic_exponent);

/// rho(x, t_k) with t_k = k T / 2^M over one recurrence period T (defaults to
/// recurrence_period(state)). Throws DegenerateSignalError for x on a wall.
SampledSignal time_profile(const SpectralState& state, double x, int dyadic_exponent,
                           std::optional<double> period = std::nullopt);

/// rho sampled on a closed (nx x nt) grid: x from wall to wall, t from 0 to
/// the period inclusive. Row-major with one row per x.
struct Carpet {
    std::vector<double> x;
    std::vector<double> t;
    std::vector<double> density;
    double period = 0.0;

    double at(std::size_t ix, std::size_t it) const { return density[ix * t.size() + it]; }
};

Carpet carpet(const SpectralState& state, std::size_t nx, std::size_t nt, std::optional<double> period = std::nullopt);

/// Trapezoid integral of column it over the x grid.
double carpet_column_norm(const Carpet& c, std::size_t it);

/// Single-threaded kernels evaluating every basis term with libm sin/cos.
/// Slow; kept as the reference the OpenMP kernels are tested and benchmarked against.
namespace reference {

complex wavefunction(const SpectralState& state, double x, double t);
SampledSignal space_profile(const SpectralState& state, double t, int dyadic_exponent);
SampledSignal time_profile(const SpectralState& state, double x, int dyadic_exponent,
                           std::optional<double> period = std::nullopt);
Carpet carpet(const SpectralState& state, std::size_t nx, std::size_t nt, std::optional<double> period = std::nullopt);

}  // namespace reference

}  // namespace qfractal

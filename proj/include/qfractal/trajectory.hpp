#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "qfractal/error.hpp"
#include "qfractal/signal.hpp"
#include "qfractal/well.hpp"

namespace qfractal {

/// rho below this value counts as a node: 1e-12 * (2 / L).
double node_threshold(const WellConfig& config);

/// v = j / rho. Throws NodeProximityError when rho <= node_threshold and
/// DomainError unless x lies strictly inside the well.
double velocity(const SpectralState& state, double x, double t);

struct IntegratorOptions {
    double rtol = 1e-8;
    double atol = 1e-10;
    /// Steps shorter than min_step_fraction * duration abort the integration.
    double min_step_fraction = 1e-15;
    std::size_t max_steps = 200'000'000;
};

struct IntegratorStats {
    std::size_t steps = 0;
    std::size_t rejected = 0;
    std::size_t node_rejections = 0;
    std::size_t wall_rejections = 0;
    std::size_t max_consecutive_rejections = 0;
    double min_density = std::numeric_limits<double>::infinity();
};

struct Trajectory {
    double x0 = 0.0;
    double duration = 0.0;
    std::vector<double> times;
    std::vector<double> positions;
    IntegratorStats stats;
    std::size_t expected_samples = 0;

    bool complete() const { return expected_samples > 0 && positions.size() == expected_samples; }
};

class IntegrationStalledError : public NumericalError {
public:
    IntegrationStalledError(const std::string& what, Trajectory partial_)
        : NumericalError(what), partial(std::move(partial_)) {}
    Trajectory partial;
};

/// Integrates dx/dt = v(x, t) from x0 over [0, duration] with an adaptive
/// Dormand-Prince 5(4) scheme and reports x at t_k = k duration / 2^M,
/// k = 0 .. 2^M - 1, by cubic Hermite interpolation between accepted steps.
Trajectory integrate_trajectory(const SpectralState& state, double x0, double duration, int dyadic_exponent,
                                const IntegratorOptions& options = {});

struct TrajectoryResult {
    Trajectory trajectory;
    std::string error;  // empty on success

    bool ok() const { return error.empty(); }
};

/// Independent trajectories, integrated in parallel; results keep the order of x0s.
std::vector<TrajectoryResult> integrate_trajectories(const SpectralState& state, std::span<const double> x0s,
                                                     double duration, int dyadic_exponent,
                                                     const IntegratorOptions& options = {});

SampledSignal trajectory_signal(const Trajectory& trajectory);

}  // namespace qfractal

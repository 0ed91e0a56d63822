#include "qfractal/trajectory.hpp"

#include <algorithm>
#include <cmath>

#include "field.hpp"

namespace qfractal {

namespace {

constexpr double kWallGuard = 1e-12;

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;
// continuous extension (Hairer, Norsett, Wanner dopri5 dense output)
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

enum class Rejection { none, node, wall };

class VelocityField {
public:
    explicit VelocityField(const SpectralState& state)
        : field_(state),
          cfg_(state.config()),
          threshold_(node_threshold(state.config())),
          flux_scale_(state.config().hbar / state.config().mass) {}

    /// Returns false (and records why) instead of throwing; the integrator
    /// treats both cases as a signal to shrink the step.
    bool eval(double x, double t, double& v, Rejection& why, double& min_rho) const {
        if (!(x > cfg_.left() + kWallGuard && x < cfg_.right() - kWallGuard)) {
            why = Rejection::wall;
            return false;
        }
        const auto f = field_.at(x, t);
        const double rho = std::norm(f.psi);
        min_rho = std::min(min_rho, rho);
        if (!(rho > threshold_)) {
            why = Rejection::node;
            return false;
        }
        v = flux_scale_ * (std::conj(f.psi) * f.dpsi).imag() / rho;
        return true;
    }

    double density(double x, double t) const { return std::norm(field_.at(x, t).psi); }

private:
    detail::FieldEvaluator field_;
    WellConfig cfg_;
    double threshold_;
    double flux_scale_;
};

}  // namespace

double node_threshold(const WellConfig& config) { return 1e-12 * (2.0 / config.length); }

double velocity(const SpectralState& state, double x, double t) {
    const auto& cfg = state.config();
    if (!(x > cfg.left() && x < cfg.right())) {
        throw DomainError("velocity requested at x = " + std::to_string(x) + ", not strictly inside the well");
    }
    const auto f = detail::FieldEvaluator(state).at(x, t);
    const double rho = std::norm(f.psi);
    if (!(rho > node_threshold(cfg))) throw NodeProximityError(x, t, rho);
    return cfg.hbar / cfg.mass * (std::conj(f.psi) * f.dpsi).imag() / rho;
}

Trajectory integrate_trajectory(const SpectralState& state, double x0, double duration, int m,
                                const IntegratorOptions& options) {
    if (m < 1 || m > 24) throw ValidationError("trajectory dyadic exponent out of range");
    if (!(duration > 0.0)) throw ValidationError("trajectory duration must be positive");
    const auto& cfg = state.config();
    if (!(x0 > cfg.left() && x0 < cfg.right())) {
        throw DomainError("trajectory start x0 = " + std::to_string(x0) + " is not inside the well");
    }
    const VelocityField field(state);
    const double rho0 = field.density(x0, 0.0);
    if (!(rho0 > node_threshold(cfg))) {
        throw InvalidStartError("trajectory start x0 = " + std::to_string(x0) + " has density " +
                                std::to_string(rho0) + " below the node threshold");
    }

    const std::size_t samples = std::size_t{1} << m;
    const double sample_dt = duration / static_cast<double>(samples);
    Trajectory out;
    out.x0 = x0;
    out.duration = duration;
    out.expected_samples = samples;
    out.times.resize(samples);
    for (std::size_t k = 0; k < samples; ++k) out.times[k] = sample_dt * static_cast<double>(k);
    out.positions.reserve(samples);
    auto& stats = out.stats;

    double t = 0.0;
    double x = x0;
    double k1 = 0.0;
    Rejection why = Rejection::none;
    field.eval(x, t, k1, why, stats.min_density);
    out.positions.push_back(x);

    const double min_step = options.min_step_fraction * duration;
    double h = std::min(sample_dt, 1e-3 * duration);
    std::size_t consecutive = 0;

    auto stall = [&](const std::string& reason) {
        out.times.resize(out.positions.size());
        throw IntegrationStalledError("trajectory from x0 = " + std::to_string(x0) + " stalled at t = " +
                                          std::to_string(t) + ": " + reason,
                                      out);
    };

    while (t < duration) {
        if (stats.steps + stats.rejected >= options.max_steps) stall("step budget exhausted");
        if (h < min_step) stall("step size underflow near a node or wall");
        h = std::min(h, duration - t);

        double k2 = 0, k3 = 0, k4 = 0, k5 = 0, k6 = 0, k7 = 0;
        why = Rejection::none;
        bool ok = field.eval(x + h * a21 * k1, t + c2 * h, k2, why, stats.min_density) &&
                  field.eval(x + h * (a31 * k1 + a32 * k2), t + c3 * h, k3, why, stats.min_density) &&
                  field.eval(x + h * (a41 * k1 + a42 * k2 + a43 * k3), t + c4 * h, k4, why, stats.min_density) &&
                  field.eval(x + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4), t + c5 * h, k5, why,
                             stats.min_density) &&
                  field.eval(x + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5), t + h, k6, why,
                             stats.min_density);
        double x_new = 0.0;
        if (ok) {
            x_new = x + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
            ok = field.eval(x_new, t + h, k7, why, stats.min_density);
        }
        if (!ok) {
            ++stats.rejected;
            if (why == Rejection::node) ++stats.node_rejections;
            if (why == Rejection::wall) ++stats.wall_rejections;
            stats.max_consecutive_rejections = std::max(stats.max_consecutive_rejections, ++consecutive);
            h *= 0.5;
            continue;
        }

        const double err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
        const double scale = options.atol + options.rtol * std::max(std::abs(x), std::abs(x_new));
        const double ratio = std::abs(err) / scale;
        if (ratio <= 1.0) {
            const double t_new = (duration - t - h <= 1e-15 * duration) ? duration : t + h;
            // dense output on the accepted step
            const double ydiff = x_new - x;
            const double bspl = h * k1 - ydiff;
            const double r4 = ydiff - h * k7 - bspl;
            const double r5 = h * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);
            while (out.positions.size() < samples && out.times[out.positions.size()] <= t_new) {
                const double s = (out.times[out.positions.size()] - t) / h;
                const double s1 = 1.0 - s;
                out.positions.push_back(x + s * (ydiff + s1 * (bspl + s * (r4 + s1 * r5))));
            }
            t = t_new;
            x = x_new;
            k1 = k7;
            ++stats.steps;
            consecutive = 0;
        } else {
            ++stats.rejected;
            stats.max_consecutive_rejections = std::max(stats.max_consecutive_rejections, ++consecutive);
        }
        const double factor = ratio > 0.0 ? 0.9 * std::pow(ratio, -0.2) : 5.0;
        h *= std::clamp(factor, 0.2, 5.0);
    }
    return out;
}

std::vector<TrajectoryResult> integrate_trajectories(const SpectralState& state, std::span<const double> x0s,
                                                     double duration, int m, const IntegratorOptions& options) {
    std::vector<TrajectoryResult> results(x0s.size());
#pragma omp parallel for schedule(dynamic, 1)
    for (std::size_t i = 0; i < x0s.size(); ++i) {
        try {
            results[i].trajectory = integrate_trajectory(state, x0s[i], duration, m, options);
        } catch (const IntegrationStalledError& e) {
            results[i].trajectory = e.partial;
            results[i].error = e.what();
        } catch (const std::exception& e) {
            results[i].trajectory.x0 = x0s[i];
            results[i].error = e.what();
        }
    }
    return results;
}

SampledSignal trajectory_signal(const Trajectory& trajectory) {
    if (!trajectory.complete()) {
        throw ValidationError("trajectory is partial (" + std::to_string(trajectory.positions.size()) + " of " +
                              std::to_string(trajectory.expected_samples) + " samples)");
    }
    const double step = trajectory.times.size() > 1 ? trajectory.times[1] - trajectory.times[0] : trajectory.duration;
    return {trajectory.positions, {AxisKind::trajectory, 0.0, step},
            "trajectory from x0 = " + std::to_string(trajectory.x0)};
}

}  // namespace qfractal

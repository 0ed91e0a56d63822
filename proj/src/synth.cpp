#include <fftw3.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "qfractal/dimension.hpp"
#include "qfractal/error.hpp"

namespace qfractal {

namespace {

void check_exponent(int m) {
    if (m < 4 || m > 24) throw ValidationError("dyadic exponent out of range [4, 24]");
}

// RAII wrapper for one complex in-place FFTW transform.
class ForwardFft {
public:
    explicit ForwardFft(std::size_t n)
        : n_(n), data_(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n))) {
        if (data_ == nullptr) throw NumericalError("fftw_malloc failed");
#pragma omp critical(qfractal_fftw_planner)
        plan_ = fftw_plan_dft_1d(static_cast<int>(n), data_, data_, FFTW_FORWARD, FFTW_ESTIMATE);
    }
    ~ForwardFft() {
#pragma omp critical(qfractal_fftw_planner)
        fftw_destroy_plan(plan_);
        fftw_free(data_);
    }
    ForwardFft(const ForwardFft&) = delete;
    ForwardFft& operator=(const ForwardFft&) = delete;

    std::complex<double>* data() { return reinterpret_cast<std::complex<double>*>(data_); }
    std::size_t size() const { return n_; }
    void execute() { fftw_execute(plan_); }

private:
    std::size_t n_;
    fftw_complex* data_;
    fftw_plan plan_{};
};

}  // namespace

SampledSignal synth_weierstrass(double target_dimension, int m, std::uint64_t seed, const WeierstrassOptions& options) {
    if (!(target_dimension > 1.0 && target_dimension < 2.0)) {
        throw ConfigError("Weierstrass target dimension must lie in (1, 2)");
    }
    if (!(options.gamma > 1.0)) throw ConfigError("Weierstrass gamma must exceed 1");
    check_exponent(m);
    const std::size_t n = std::size_t{1} << m;
    int terms = options.terms;
    if (terms <= 0) {
        // gamma^k cycles per interval must stay below n / 2
        terms = static_cast<int>(std::floor(std::log(static_cast<double>(n) / 2.0) / std::log(options.gamma))) + 1;
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
    std::vector<double> values(n, 0.0);
    const double dt = 2.0 * std::numbers::pi / static_cast<double>(n);
    for (int k = 0; k < terms; ++k) {
        const double freq = std::pow(options.gamma, k);
        const double amp = std::pow(options.gamma, (target_dimension - 2.0) * k);
        const double phi = phase(rng);
        for (std::size_t i = 0; i < n; ++i) values[i] += amp * (1.0 - std::cos(freq * dt * static_cast<double>(i) + phi));
    }
    return {std::move(values), {AxisKind::synthetic, 0.0, dt},
            "Weierstrass D = " + std::to_string(target_dimension) + ", seed " + std::to_string(seed)};
}

SampledSignal synth_fbm(double hurst, int m, std::uint64_t seed) {
    if (!(hurst > 0.0 && hurst < 1.0)) throw ConfigError("fBm Hurst exponent must lie in (0, 1)");
    check_exponent(m);
    const std::size_t n = std::size_t{1} << m;
    const std::size_t size = 2 * n;

    // Eigenvalues of the circulant embedding of the fGn autocovariance.
    auto gamma = [hurst](double k) {
        const double h2 = 2.0 * hurst;
        return 0.5 * (std::pow(std::abs(k + 1.0), h2) - 2.0 * std::pow(std::abs(k), h2) + std::pow(std::abs(k - 1.0), h2));
    };
    ForwardFft fft(size);
    auto* buf = fft.data();
    for (std::size_t k = 0; k <= n; ++k) buf[k] = gamma(static_cast<double>(k));
    for (std::size_t k = n + 1; k < size; ++k) buf[k] = gamma(static_cast<double>(size - k));
    fft.execute();
    std::vector<double> eig(size);
    for (std::size_t k = 0; k < size; ++k) {
        const double lam = buf[k].real();
        if (lam < -1e-8) throw NumericalError("circulant embedding is not positive semidefinite");
        eig[k] = std::max(lam, 0.0);
    }

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (std::size_t k = 0; k < size; ++k) {
        const double re = gauss(rng);
        const double im = gauss(rng);
        buf[k] = std::sqrt(eig[k] / static_cast<double>(size)) * std::complex<double>(re, im);
    }
    fft.execute();

    // unit-variance fGn increments, rescaled to the unit horizon and summed
    const double scale = std::pow(static_cast<double>(n), -hurst);
    std::vector<double> path(n);
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        path[i] = acc;
        acc += scale * buf[i].real();
    }
    return {std::move(path), {AxisKind::synthetic, 0.0, 1.0 / static_cast<double>(n)},
            "fBm H = " + std::to_string(hurst) + ", seed " + std::to_string(seed)};
}

}  // namespace qfractal

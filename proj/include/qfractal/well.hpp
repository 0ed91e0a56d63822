#pragma once

#include <complex>
#include <string>
#include <vector>

namespace qfractal {

using complex = std::complex<double>;

/// Infinite well on [-L/2, L/2]. Natural units by default.
struct WellConfig {
    double length = 1.0;
    double hbar = 1.0;
    double mass = 1.0;

    void validate() const;
    double left() const { return -0.5 * length; }
    double right() const { return 0.5 * length; }
    /// E_1; E_n = n^2 * ground_energy().
    double ground_energy() const;
    double energy(int n) const { return static_cast<double>(n) * n * ground_energy(); }
};

/// One flat-topped square. center and width are in units of L; the amplitude
/// is the complex weight of this square in the normalized superposition.
struct Square {
    double center = 0.0;
    double width = 1.0;
    complex amplitude{1.0, 0.0};
};

struct InitialStateSpec {
    std::vector<Square> squares;
    std::string description;

    /// Throws DomainError for squares leaving the box, ValidationError for
    /// overlaps, non-positive widths or a zero total weight.
    void validate() const;
};

/// Two squares of width L/4 centred at -L/4 and +L/4 with equal weights 1/sqrt(2).
InitialStateSpec symmetric_two_square();
/// The left-hand square of the symmetric state on its own.
InitialStateSpec asymmetric_single_square();
/// A single square filling the whole well.
InitialStateSpec full_width_square();

/// Truncated eigenbasis expansion. coefficient(n) is c_n for n = 1..N.
class SpectralState {
public:
    SpectralState(WellConfig config, std::vector<complex> coefficients);

    const WellConfig& config() const { return config_; }
    const std::vector<complex>& coefficients() const { return coefficients_; }
    complex coefficient(int n) const { return coefficients_[static_cast<std::size_t>(n - 1)]; }
    int truncation() const { return static_cast<int>(coefficients_.size()); }
    double captured_norm() const { return captured_norm_; }

private:
    WellConfig config_;
    std::vector<complex> coefficients_;
    double captured_norm_ = 0.0;
};

/// Single eigenstate phi_n (c_n = 1).
SpectralState eigenstate(const WellConfig& config, int n, int truncation);

/// Exact overlaps c_n = <phi_n|psi_0> of the normalized piecewise-constant state.
SpectralState square_coefficients(const InitialStateSpec& spec, const WellConfig& config, int truncation,
                                  bool renormalize = false);

/// phi_n(x) = sqrt(2/L) sin(n pi (x + L/2) / L).
double eigenfunction(const WellConfig& config, int n, double x);

complex wavefunction(const SpectralState& state, double x, double t);
double density(const SpectralState& state, double x, double t);
/// (hbar/m) Im[psi* d_x psi], using the analytic derivative of the sine basis.
double current(const SpectralState& state, double x, double t);

/// Smallest T > 0 with |psi(x, t + T)|^2 = |psi(x, t)|^2, from the integer gcd
/// of n^2 - n_min^2 over occupied levels. Throws StationaryStateError when a
/// single level is occupied.
double revival_time(const SpectralState& state);

/// revival_time(), or the phase period 2 pi hbar / E_n of a stationary state.
double recurrence_period(const SpectralState& state);

/// Indices n with |c_n| above the occupation cutoff (1e-12 max |c_n|).
std::vector<int> occupied_levels(const SpectralState& state);

/// Max-norm of d_t rho + d_x j over the interior of a 2^grid_exponent grid,
/// both derivatives by centred differences of the analytic fields.
double continuity_residual(const SpectralState& state, int grid_exponent, double t, double dt);

}  // namespace qfractal

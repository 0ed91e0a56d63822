#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qfractal/signal.hpp"

namespace qfractal {

/// Daubechies family tags. dbN has N vanishing moments and 2N taps; haar == db1.
enum class Family { haar, db4, db8, db16 };

inline constexpr Family kAllFamilies[] = {Family::haar, Family::db4, Family::db8, Family::db16};

std::string to_string(Family family);
Family parse_family(std::string_view tag);

/// Orthonormal two-channel filter bank. highpass[k] = (-1)^k lowpass[K-1-k].
struct WaveletFilter {
    Family family = Family::haar;
    std::vector<double> lowpass;
    std::vector<double> highpass;
    int vanishing_moments = 1;

    std::size_t taps() const { return lowpass.size(); }
};

WaveletFilter make_filter(Family family);
WaveletFilter make_filter(std::string_view tag);

/// Builds a filter from an arbitrary lowpass (used by tests and validation fixtures).
WaveletFilter filter_from_lowpass(Family family, std::vector<double> lowpass, int vanishing_moments);

/// details[0] is level 1 (finest) with 2^(M-1) coefficients; details[J-1] is the coarsest.
struct WaveletDecomposition {
    std::vector<std::vector<double>> details;
    std::vector<double> approximation;
    int levels = 0;
    std::size_t source_length = 0;
    Family family = Family::haar;
};

/// Periodic orthonormal DWT over J levels.
WaveletDecomposition dwt(std::span<const double> signal, const WaveletFilter& filter, int levels);
WaveletDecomposition dwt(const SampledSignal& signal, const WaveletFilter& filter, int levels);

/// Inverse of dwt; returns the raw samples.
std::vector<double> idwt(const WaveletDecomposition& decomposition, const WaveletFilter& filter);

struct LevelEnergy {
    int level = 0;
    double energy = 0.0;
    std::size_t count = 0;
};

struct LevelEnergies {
    std::vector<LevelEnergy> levels;  // ordered finest (j = 1) to coarsest
    double approximation_energy = 0.0;
    int dyadic_exponent = 0;

    double total() const;
};

LevelEnergies level_energies(const WaveletDecomposition& decomposition);

/// One analysis step: circular convolution with both filters, downsampled by 2.
void analysis_step(std::span<const double> in, const WaveletFilter& filter, std::span<double> approx,
                   std::span<double> detail);

}  // namespace qfractal

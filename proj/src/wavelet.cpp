#include "qfractal/wavelet.hpp"

#include <array>
#include <cmath>
#include <numeric>

#include "qfractal/error.hpp"

namespace qfractal {

namespace {

// Daubechies extremal-phase lowpass filters, normalized to sum sqrt(2).
// Generated by spectral factorization at 60-digit precision; the unit tests
// re-check orthonormality and vanishing moments.
constexpr std::array<double, 8> kDb4Lowpass = {
    2.30377813308896506e-01, 7.14846570552915672e-01,
    6.30880767929858921e-01, -2.79837694168598543e-02,
    -1.87034811719093086e-01, 3.08413818355607640e-02,
    3.28830116668851966e-02, -1.05974017850690317e-02,
};

constexpr std::array<double, 16> kDb8Lowpass = {
    5.44158422431040081e-02, 3.12871590914299946e-01,
    6.75630736297289758e-01, 5.85354683654206731e-01,
    -1.58291052563493059e-02, -2.84015542961546907e-01,
    4.72484573913282795e-04, 1.28747426620478472e-01,
    -1.73693010018075474e-02, -4.40882539307947546e-02,
    1.39810279173982824e-02, 8.74609404740577662e-03,
    -4.87035299345157414e-03, -3.91740373376947050e-04,
    6.75449406450569331e-04, -1.17476784124769535e-04,
};

constexpr std::array<double, 32> kDb16Lowpass = {
    3.18922092534773809e-03, 3.49077143236733445e-02,
    1.65064283488853131e-01, 4.30312722846003803e-01,
    6.37356332083788946e-01, 4.40290256886356923e-01,
    -8.97510894024896450e-02, -3.27063310527917706e-01,
    -2.79182081330282758e-02, 2.11190693947104297e-01,
    2.73402637527160423e-02, -1.32388305563810399e-01,
    -6.23972275247487197e-03, 7.59242360442763109e-02,
    -7.58897436885773782e-03, -3.68883976917301418e-02,
    1.02976596409559695e-02, 1.39937688598287310e-02,
    -6.99001456341391634e-03, -3.64427962149838991e-03,
    3.12802338120626898e-03, 4.07896980849712851e-04,
    -9.41021749359567563e-04, 1.14241520038722391e-04,
    1.74787245225338170e-04, -6.10359662141093598e-05,
    -1.39456689882088926e-05, 1.13366086612762581e-05,
    -1.04357134231160655e-06, -7.36365678545120508e-07,
    2.30878408685754574e-07, -2.10933963010074312e-08,
};

template <std::size_t K>
std::vector<double> to_vector(const std::array<double, K>& a) {
    return {a.begin(), a.end()};
}

}  // namespace

std::string to_string(Family family) {
    switch (family) {
        case Family::haar: return "haar";
        case Family::db4: return "db4";
        case Family::db8: return "db8";
        case Family::db16: return "db16";
    }
    return "unknown";
}

Family parse_family(std::string_view tag) {
    if (tag == "haar" || tag == "db1") return Family::haar;
    if (tag == "db4") return Family::db4;
    if (tag == "db8") return Family::db8;
    if (tag == "db16") return Family::db16;
    throw ConfigError("unknown wavelet family '" + std::string(tag) + "' (supported: haar, db4, db8, db16)");
}

WaveletFilter filter_from_lowpass(Family family, std::vector<double> lowpass, int vanishing_moments) {
    if (lowpass.size() < 2 || lowpass.size() % 2 != 0) {
        throw ValidationError("wavelet lowpass filter needs an even, nonzero number of taps");
    }
    WaveletFilter f;
    f.family = family;
    f.vanishing_moments = vanishing_moments;
    const std::size_t taps = lowpass.size();
    f.highpass.resize(taps);
    for (std::size_t k = 0; k < taps; ++k) {
        const double sign = (k % 2 == 0) ? 1.0 : -1.0;
        f.highpass[k] = sign * lowpass[taps - 1 - k];
    }
    f.lowpass = std::move(lowpass);
    return f;
}

WaveletFilter make_filter(Family family) {
    switch (family) {
        case Family::haar: {
            const double r = 1.0 / std::sqrt(2.0);
            return filter_from_lowpass(family, {r, r}, 1);
        }
        case Family::db4: return filter_from_lowpass(family, to_vector(kDb4Lowpass), 4);
        case Family::db8: return filter_from_lowpass(family, to_vector(kDb8Lowpass), 8);
        case Family::db16: return filter_from_lowpass(family, to_vector(kDb16Lowpass), 16);
    }
    throw ConfigError("unknown wavelet family");
}

WaveletFilter make_filter(std::string_view tag) { return make_filter(parse_family(tag)); }

void analysis_step(std::span<const double> in, const WaveletFilter& filter, std::span<double> approx,
                   std::span<double> detail) {
    const std::size_t n = in.size();
    const std::size_t half = n / 2;
    const std::size_t taps = filter.taps();
    const double* h = filter.lowpass.data();
    const double* g = filter.highpass.data();
    for (std::size_t k = 0; k < half; ++k) {
        double a = 0.0;
        double d = 0.0;
        const std::size_t base = 2 * k;
        if (base + taps <= n) {
            for (std::size_t m = 0; m < taps; ++m) {
                a += h[m] * in[base + m];
                d += g[m] * in[base + m];
            }
        } else {
            // periodic wrap; also covers filters longer than the current level
            for (std::size_t m = 0; m < taps; ++m) {
                const double v = in[(base + m) % n];
                a += h[m] * v;
                d += g[m] * v;
            }
        }
        approx[k] = a;
        detail[k] = d;
    }
}

WaveletDecomposition dwt(std::span<const double> signal, const WaveletFilter& filter, int levels) {
    const int exponent = dyadic_exponent_of(signal.size());
    if (exponent < 0) {
        throw ValidationError("dwt: signal length " + std::to_string(signal.size()) + " is not a power of two");
    }
    if (levels < 1 || levels > exponent) {
        throw ValidationError("dwt: levels must lie in [1, " + std::to_string(exponent) + "], got " +
                              std::to_string(levels));
    }
    WaveletDecomposition out;
    out.levels = levels;
    out.source_length = signal.size();
    out.family = filter.family;
    out.details.reserve(static_cast<std::size_t>(levels));

    std::vector<double> current(signal.begin(), signal.end());
    std::vector<double> next;
    for (int j = 1; j <= levels; ++j) {
        const std::size_t half = current.size() / 2;
        next.assign(half, 0.0);
        std::vector<double> detail(half);
        analysis_step(current, filter, next, detail);
        out.details.push_back(std::move(detail));
        current.swap(next);
    }
    out.approximation = std::move(current);
    return out;
}

WaveletDecomposition dwt(const SampledSignal& signal, const WaveletFilter& filter, int levels) {
    return dwt(std::span<const double>(signal.values()), filter, levels);
}

std::vector<double> idwt(const WaveletDecomposition& decomposition, const WaveletFilter& filter) {
    if (decomposition.levels != static_cast<int>(decomposition.details.size())) {
        throw ValidationError("idwt: level count does not match detail arrays");
    }
    std::size_t expected = decomposition.source_length;
    for (int j = 1; j <= decomposition.levels; ++j) {
        expected /= 2;
        if (decomposition.details[static_cast<std::size_t>(j - 1)].size() != expected) {
            throw ValidationError("idwt: detail level " + std::to_string(j) + " has wrong length");
        }
    }
    if (decomposition.approximation.size() != expected) {
        throw ValidationError("idwt: approximation has wrong length");
    }

    const std::size_t taps = filter.taps();
    std::vector<double> current = decomposition.approximation;
    for (int j = decomposition.levels; j >= 1; --j) {
        const auto& detail = decomposition.details[static_cast<std::size_t>(j - 1)];
        const std::size_t half = current.size();
        const std::size_t n = 2 * half;
        std::vector<double> up(n, 0.0);
        for (std::size_t k = 0; k < half; ++k) {
            const double a = current[k];
            const double d = detail[k];
            for (std::size_t m = 0; m < taps; ++m) {
                up[(2 * k + m) % n] += filter.lowpass[m] * a + filter.highpass[m] * d;
            }
        }
        current.swap(up);
    }
    return current;
}

double LevelEnergies::total() const {
    double s = approximation_energy;
    for (const auto& l : levels) s += l.energy;
    return s;
}

LevelEnergies level_energies(const WaveletDecomposition& decomposition) {
    LevelEnergies out;
    out.dyadic_exponent = dyadic_exponent_of(decomposition.source_length);
    out.levels.reserve(decomposition.details.size());
    for (std::size_t i = 0; i < decomposition.details.size(); ++i) {
        const auto& d = decomposition.details[i];
        const double e = std::inner_product(d.begin(), d.end(), d.begin(), 0.0);
        out.levels.push_back({static_cast<int>(i) + 1, e, d.size()});
    }
    const auto& a = decomposition.approximation;
    out.approximation_energy = std::inner_product(a.begin(), a.end(), a.begin(), 0.0);
    return out;
}

}  // namespace qfractal

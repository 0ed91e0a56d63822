#include <cmath>
#include <numbers>
#include <numeric>

#include "doctest.h"
#include "oracles.hpp"
#include "qfractal/error.hpp"
#include "qfractal/profiles.hpp"
#include "qfractal/trajectory.hpp"
#include "qfractal/validate.hpp"
#include "qfractal/wavelet.hpp"

using namespace qfractal;

namespace {

double sup_norm(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s = std::max(s, std::abs(x));
    return s;
}

double max_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s = std::max(s, std::abs(a[i] - b[i]));
    return s;
}

void check_roundtrip(const std::vector<double>& x, Family fam) {
    const auto f = make_filter(fam);
    const int M = dyadic_exponent_of(x.size());
    for (int J : {1, std::max(1, M - 2), M}) {
        const auto back = idwt(dwt(std::span<const double>(x), f, J), f);
        CHECK(max_diff(back, x) <= 1e-10 * sup_norm(x));
    }
}

}  // namespace

TEST_SUITE("wavelet") {
    TEST_CASE("filters satisfy the orthonormal filter-bank identities") {
        // independent oracle: recompute every identity from the raw taps
        for (Family fam : kAllFamilies) {
            const auto f = make_filter(fam);
            const std::size_t K = f.taps();
            CHECK(K == (fam == Family::haar ? 2u : 2u * static_cast<std::size_t>(f.vanishing_moments)));
            long double sum = 0.0L, gsum = 0.0L;
            for (std::size_t k = 0; k < K; ++k) {
                sum += f.lowpass[k];
                gsum += f.highpass[k];
                CHECK(f.highpass[k] == ((k % 2) ? -1.0 : 1.0) * f.lowpass[K - 1 - k]);
            }
            CHECK(std::abs(static_cast<double>(sum) - std::numbers::sqrt2) < 1e-12);
            CHECK(std::abs(static_cast<double>(gsum)) < 1e-12);
            for (std::size_t m = 0; 2 * m < K; ++m) {
                long double s = 0.0L;
                for (std::size_t k = 0; k + 2 * m < K; ++k) s += static_cast<long double>(f.lowpass[k]) * f.lowpass[k + 2 * m];
                CHECK(std::abs(static_cast<double>(s) - (m == 0 ? 1.0 : 0.0)) < 1e-12);
            }
            // highpass annihilates monomials of degree < p (centred, scaled abscissa)
            for (int p = 0; p < f.vanishing_moments; ++p) {
                long double s = 0.0L, scale = 0.0L;
                for (std::size_t k = 0; k < K; ++k) {
                    const long double u = static_cast<long double>(k) / (K - 1) - 0.5L;
                    s += f.highpass[k] * std::pow(u, p);
                    scale += std::abs(f.highpass[k] * std::pow(u, p));
                }
                CHECK(static_cast<double>(std::abs(s) / scale) < 1e-8);
            }
        }
    }

    TEST_CASE("dense analysis matrix is orthogonal for every family") {
        for (Family fam : kAllFamilies) {
            const auto W = oracle::analysis_matrix(make_filter(fam).lowpass, 64);
            for (std::size_t i = 0; i < 64; ++i) {
                for (std::size_t j = 0; j < 64; ++j) {
                    const double d = std::inner_product(W[i].begin(), W[i].end(), W[j].begin(), 0.0);
                    CHECK(std::abs(d - (i == j ? 1.0 : 0.0)) < 1e-12);
                }
            }
        }
    }

    TEST_CASE("haar filter and db4 leading tap") {
        const auto h = make_filter(Family::haar);
        CHECK(h.lowpass[0] == doctest::Approx(1.0 / std::numbers::sqrt2));
        CHECK(h.highpass[1] == doctest::Approx(-1.0 / std::numbers::sqrt2));
        CHECK(make_filter("db1").taps() == 2);
        CHECK(make_filter("db4").lowpass[0] == doctest::Approx(0.2303778133088965).epsilon(1e-15));
        CHECK(make_filter("db16").taps() == 32);
    }

    TEST_CASE("unknown family lists the supported tags") {
        try {
            make_filter("sym8");
            FAIL("expected ConfigError");
        } catch (const ConfigError& e) {
            const std::string what = e.what();
            CHECK(what.find("haar") != std::string::npos);
            CHECK(what.find("db16") != std::string::npos);
        }
    }

    TEST_CASE("level structure and argument errors") {
        const std::vector<double> x(256, 1.0);
        const auto d = dwt(std::span<const double>(x), make_filter(Family::db8), 6);
        REQUIRE(d.details.size() == 6);
        std::size_t total = d.approximation.size();
        for (int j = 1; j <= 6; ++j) {
            CHECK(d.details[static_cast<std::size_t>(j - 1)].size() == (256u >> j));
            total += d.details[static_cast<std::size_t>(j - 1)].size();
        }
        CHECK(total == 256);
        CHECK_THROWS_AS(dwt(std::span<const double>(x), make_filter(Family::haar), 9), ValidationError);
        CHECK_THROWS_AS(dwt(std::span<const double>(x), make_filter(Family::haar), 0), ValidationError);
        const std::vector<double> odd(100, 1.0);
        CHECK_THROWS_AS(dwt(std::span<const double>(odd), make_filter(Family::haar), 2), ValidationError);
        auto broken = d;
        broken.details[2].pop_back();
        CHECK_THROWS_AS(idwt(broken, make_filter(Family::db8)), ValidationError);
    }

    TEST_CASE("constant signal: zero details, approximation keeps the energy") {
        const std::vector<double> x(512, 3.0);
        for (Family fam : kAllFamilies) {
            const auto e = level_energies(dwt(std::span<const double>(x), make_filter(fam), 7));
            for (const auto& l : e.levels) CHECK(l.energy < 1e-20);
            CHECK(e.approximation_energy == doctest::Approx(9.0 * 512).epsilon(1e-12));
        }
    }

    TEST_CASE("haar impulse energies halve per level") {
        std::vector<double> x(1024, 0.0);
        x[0] = 1.0;
        const auto e = level_energies(dwt(std::span<const double>(x), make_filter(Family::haar), 10));
        for (int j = 1; j <= 10; ++j) CHECK(e.levels[static_cast<std::size_t>(j - 1)].energy == doctest::Approx(std::ldexp(1.0, -j)));
        CHECK(e.levels[0].count == 512);
        CHECK(e.approximation_energy == doctest::Approx(std::ldexp(1.0, -10)));
    }

    TEST_CASE("level energies match the dense-matrix cascade") {
        const auto x = oracle::noise(256, 5);
        for (Family fam : kAllFamilies) {
            const auto f = make_filter(fam);
            const auto want = oracle::level_energies(f.lowpass, x, 6);
            const auto got = level_energies(dwt(std::span<const double>(x), f, 6));
            for (std::size_t j = 0; j < 6; ++j) CHECK(got.levels[j].energy == doctest::Approx(want[j]).epsilon(1e-12));
        }
    }

    TEST_CASE("Parseval and roundtrip on noise for lengths 2^6 .. 2^14") {
        for (int M = 6; M <= 14; M += 2) {
            const auto x = oracle::noise(std::size_t{1} << M, 100 + static_cast<std::uint64_t>(M));
            const double energy = std::inner_product(x.begin(), x.end(), x.begin(), 0.0);
            for (Family fam : kAllFamilies) {
                const auto e = level_energies(dwt(std::span<const double>(x), make_filter(fam), M - 2));
                CHECK(std::abs(e.total() - energy) / energy < 1e-10);
                check_roundtrip(x, fam);
            }
        }
    }

    TEST_CASE("roundtrip on a space profile and a trajectory") {
        const WellConfig w;
        const auto st = square_coefficients(symmetric_two_square(), w, 200);
        const auto space = space_profile(st, 0.1, 12);
        const auto tr = trajectory_signal(integrate_trajectory(st, -0.3, revival_time(st), 10));
        for (Family fam : kAllFamilies) {
            check_roundtrip(space.values(), fam);
            check_roundtrip(tr.values(), fam);
        }
    }

    TEST_CASE("linearity") {
        const auto a = oracle::noise(1024, 1), b = oracle::noise(1024, 2);
        std::vector<double> mix(1024);
        for (std::size_t i = 0; i < mix.size(); ++i) mix[i] = 2.5 * a[i] - 0.75 * b[i];
        for (Family fam : kAllFamilies) {
            const auto f = make_filter(fam);
            const auto da = dwt(std::span<const double>(a), f, 8), db = dwt(std::span<const double>(b), f, 8),
                       dm = dwt(std::span<const double>(mix), f, 8);
            for (std::size_t j = 0; j < 8; ++j) {
                for (std::size_t k = 0; k < dm.details[j].size(); ++k) {
                    CHECK(std::abs(dm.details[j][k] - (2.5 * da.details[j][k] - 0.75 * db.details[j][k])) < 1e-12);
                }
            }
        }
    }

    TEST_CASE("even circular shifts move level-1 coefficients by one index") {
        const auto x = oracle::noise(512, 9);
        std::vector<double> shifted(512);
        for (std::size_t i = 0; i < 512; ++i) shifted[i] = x[(i + 2) % 512];
        for (Family fam : kAllFamilies) {
            const auto f = make_filter(fam);
            const auto d0 = dwt(std::span<const double>(x), f, 1).details[0];
            const auto d1 = dwt(std::span<const double>(shifted), f, 1).details[0];
            for (std::size_t k = 0; k < 256; ++k) CHECK(d1[k] == doctest::Approx(d0[(k + 1) % 256]).epsilon(1e-13));
        }
    }

    TEST_CASE("finest details of low-degree polynomials vanish away from the wrap") {
        for (Family fam : kAllFamilies) {
            const auto f = make_filter(fam);
            const int p = f.vanishing_moments - 1;
            std::vector<double> x(1024);
            for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::pow(static_cast<double>(i) / 1024.0 - 0.3, p);
            const auto d = dwt(std::span<const double>(x), f, 1).details[0];
            const std::size_t wrap = (f.taps() + 1) / 2;
            double worst = 0.0;
            for (std::size_t k = 0; k + wrap < d.size(); ++k) worst = std::max(worst, std::abs(d[k]));
            CHECK(worst < 1e-8);
        }
    }

    TEST_CASE("filter_defects flags a corrupted tap") {
        auto taps = make_filter(Family::db4).lowpass;
        taps[3] += 1e-6;
        const auto bad = filter_from_lowpass(Family::db4, taps, 4);
        CHECK(filter_defects(bad).orthonormality > 1e-7);
        CHECK(filter_defects(make_filter(Family::db4)).orthonormality < 1e-12);
        CHECK_THROWS_AS(filter_from_lowpass(Family::haar, {1.0, 2.0, 3.0}, 1), ValidationError);
    }
}

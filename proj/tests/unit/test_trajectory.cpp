#include <cmath>
#include <numbers>

#include "doctest.h"
#include "oracles.hpp"
#include "qfractal/dimension.hpp"
#include "qfractal/error.hpp"
#include "qfractal/trajectory.hpp"

using namespace qfractal;

namespace {
const WellConfig kWell;
}

TEST_SUITE("trajectory") {
    TEST_CASE("velocity is j / rho and agrees with the direct-sum oracle") {
        const auto st = square_coefficients(asymmetric_single_square(), kWell, 150);
        for (double x : {-0.33, -0.1, 0.2, 0.4}) {
            for (double t : {0.05, 0.4, 1.1}) {
                const auto f = oracle::field(st.coefficients(), x, t);
                const double want = static_cast<double>((std::conj(f.psi) * f.dpsi).imag() / std::norm(f.psi));
                CHECK(velocity(st, x, t) == doctest::Approx(want).epsilon(1e-7).scale(1.0));
            }
        }
    }

    TEST_CASE("velocity vanishes for eigenstates, real states at t = 0 and the symmetric state at x = 0") {
        const auto e = eigenstate(kWell, 3, 5);
        CHECK(std::abs(velocity(e, 0.1, 0.7)) < 1e-12);
        const auto asym = square_coefficients(asymmetric_single_square(), kWell, 200);
        CHECK(std::abs(velocity(asym, -0.2, 0.0)) < 1e-9);
        const auto sym = square_coefficients(symmetric_two_square(), kWell, 200);
        oracle::Uniform u(4);
        for (int i = 0; i < 10; ++i) {
            const double t = u() / (2.0 * std::numbers::pi);
            if (density(sym, 0.0, t) > 1e-6) CHECK(std::abs(velocity(sym, 0.0, t)) < 1e-7);
        }
    }

    TEST_CASE("velocity errors: walls and nodes") {
        const auto e2 = eigenstate(kWell, 2, 4);
        CHECK_THROWS_AS(velocity(e2, 0.5, 0.0), DomainError);
        CHECK_THROWS_AS(velocity(e2, -0.5, 0.0), DomainError);
        try {
            velocity(e2, 0.0, 0.3);  // phi_2 has a node at the centre
            FAIL("expected NodeProximityError");
        } catch (const NodeProximityError& err) {
            CHECK(err.x == 0.0);
            CHECK(err.t == 0.3);
            CHECK(err.rho <= node_threshold(kWell));
        }
    }

    TEST_CASE("eigenstate trajectory stays put") {
        const auto tr = integrate_trajectory(eigenstate(kWell, 1, 3), 0.17, 1.0, 8);
        REQUIRE(tr.complete());
        for (double x : tr.positions) CHECK(x == doctest::Approx(0.17).epsilon(1e-14));
        const auto sig = trajectory_signal(tr);
        CHECK(sig.size() == 256);
        CHECK(sig.axis().kind == AxisKind::trajectory);
    }

    TEST_CASE("samples on t_k = k T / 2^M, confined and finite") {
        const auto st = square_coefficients(asymmetric_single_square(), kWell, 100);
        const double T = revival_time(st);
        const auto tr = integrate_trajectory(st, -0.25, T, 10);
        REQUIRE(tr.complete());
        CHECK(tr.times.front() == 0.0);
        CHECK(tr.positions.front() == -0.25);
        for (std::size_t k = 0; k < tr.times.size(); ++k) {
            CHECK(tr.times[k] == doctest::Approx(T * static_cast<double>(k) / 1024.0));
            CHECK(std::isfinite(tr.positions[k]));
            CHECK(tr.positions[k] > -0.5);
            CHECK(tr.positions[k] < 0.5);
            if (k) CHECK(tr.times[k] > tr.times[k - 1]);
        }
        CHECK(tr.stats.steps > 0);
        CHECK(tr.stats.min_density > 0.0);
    }

    TEST_CASE("mirror symmetry for the symmetric state") {
        const auto st = square_coefficients(symmetric_two_square(), kWell, 100);
        const double T = revival_time(st);
        const auto a = integrate_trajectory(st, -0.3, T, 9);
        const auto b = integrate_trajectory(st, 0.3, T, 9);
        for (std::size_t k = 0; k < a.positions.size(); ++k) CHECK(a.positions[k] == doctest::Approx(-b.positions[k]).epsilon(1e-6).scale(1.0));
    }

    TEST_CASE("trajectories never cross") {
        const auto st = square_coefficients(asymmetric_single_square(), kWell, 80);
        std::vector<double> x0s;
        for (int i = 0; i < 8; ++i) x0s.push_back(-0.36 + 0.03 * i);
        const auto res = integrate_trajectories(st, x0s, revival_time(st), 9);
        for (std::size_t i = 0; i < res.size(); ++i) REQUIRE(res[i].ok());
        for (std::size_t i = 1; i < res.size(); ++i) {
            for (std::size_t k = 0; k < res[i].trajectory.positions.size(); ++k) {
                CHECK(res[i - 1].trajectory.positions[k] < res[i].trajectory.positions[k] + 1e-8);
            }
        }
    }

    TEST_CASE("positions converge as the tolerance tightens") {
        const auto st = square_coefficients(symmetric_two_square(), kWell, 100);
        const double T = revival_time(st);
        auto run = [&](double rtol) {
            IntegratorOptions o;
            o.rtol = rtol;
            o.atol = 1e-2 * rtol;
            return integrate_trajectory(st, -1.0 / 3.0, T, 10, o);
        };
        const auto ref = run(1e-13);
        double prev = 1.0;
        for (double rtol : {1e-6, 1e-8, 1e-10}) {
            const auto a = run(rtol);
            double worst = 0.0;
            for (std::size_t k = 0; k < a.positions.size(); ++k) worst = std::max(worst, std::abs(a.positions[k] - ref.positions[k]));
            MESSAGE("rtol " << rtol << ": max deviation from the 1e-13 run " << worst);
            // at least one decade gained per two decades of tolerance
            CHECK(worst < 0.1 * prev);
            prev = worst;
        }
        CHECK(prev < 1e-7);
    }

    // Known failure, kept on purpose: the literal halving criterion compares a
    // global error against a per-step tolerance. Over ~10^4 steps the global
    // error sits ~50x above rtol, so this cannot hold for a local-error controller.
    TEST_CASE("halving the tolerance moves positions by less than the coarser tolerance" * doctest::should_fail()) {
        const auto st = square_coefficients(symmetric_two_square(), kWell, 100);
        const double T = revival_time(st);
        IntegratorOptions coarse, fine;
        fine.rtol = coarse.rtol / 2;
        fine.atol = coarse.atol / 2;
        const auto a = integrate_trajectory(st, -1.0 / 3.0, T, 10, coarse);
        const auto b = integrate_trajectory(st, -1.0 / 3.0, T, 10, fine);
        double worst = 0.0;
        for (std::size_t k = 0; k < a.positions.size(); ++k) worst = std::max(worst, std::abs(a.positions[k] - b.positions[k]));
        MESSAGE("max position change under tolerance halving: " << worst);
        CHECK(worst < coarse.rtol);
    }

    TEST_CASE("invalid starts and stalls") {
        const auto e2 = eigenstate(kWell, 2, 4);
        CHECK_THROWS_AS(integrate_trajectory(e2, 0.0, 1.0, 8), InvalidStartError);
        CHECK_THROWS_AS(integrate_trajectory(e2, 0.6, 1.0, 8), DomainError);
        const auto st = square_coefficients(symmetric_two_square(), kWell, 100);
        IntegratorOptions tight;
        tight.max_steps = 5;
        try {
            integrate_trajectory(st, -0.25, revival_time(st), 10, tight);
            FAIL("expected IntegrationStalledError");
        } catch (const IntegrationStalledError& err) {
            CHECK_FALSE(err.partial.complete());
            CHECK(err.partial.positions.size() >= 1);
            CHECK(err.partial.times.size() == err.partial.positions.size());
            CHECK_THROWS_AS(trajectory_signal(err.partial), ValidationError);
        }
        const double starts[] = {-0.25, 0.0};
        const auto batch = integrate_trajectories(e2, starts, 1.0, 8);
        CHECK(batch[0].ok());
        CHECK_FALSE(batch[1].ok());
    }

    TEST_CASE("trajectory dimension near 5/4 at moderate N") {
        const auto st = square_coefficients(symmetric_two_square(), kWell, 200);
        const auto sig = trajectory_signal(integrate_trajectory(st, -1.0 / 3.0, revival_time(st), 14));
        EstimatorOptions o;
        o.window.drop_coarse = 5;
        o.window.drop_fine = 1;
        for (Family fam : kAllFamilies) {
            const double d = estimate_dimension(sig, fam, o).dimension;
            CHECK(d >= 1.23);
            CHECK(d <= 1.27);
        }
    }
}

#include <doctest.h>

#include <cmath>

#include "rkit/minimize.hpp"

using namespace rkit;

TEST_SUITE("minimize") {
    TEST_CASE("cubic ground state energies") {
        const auto spec = NonlinearitySpec::power(3.0);
        const auto r1 = minimize_scalar_auto(spec, {1.0}, 0.01);
        CHECK(r1.converged);
        CHECK(std::fabs(r1.energy.total + 1.0 / 96) <= 1e-3);
        CHECK(lp_norm(r1.fields[0], 2.0) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(euler_lagrange_residual(r1.fields[0], r1.multiplier[0], spec) <= 1e-2);
        CHECK(r1.monotone_energy);
        const auto r2 = minimize_scalar_auto(spec, {2.0}, 0.01);
        CHECK(std::fabs(r2.energy.total + 1.0 / 12) <= 1e-3);
    }

    TEST_CASE("zero nonlinearity: infimum not attained") {
        const auto r = minimize_scalar(NonlinearitySpec::zero(), {1.0}, Grid1D::symmetric_box(20.0, 0.1));
        CHECK_FALSE(r.converged);
        CHECK(r.diagnosis == "spreading");
    }

    TEST_CASE("invalid constraints") {
        const auto spec = NonlinearitySpec::power(3.0);
        CHECK_THROWS_AS(minimize_scalar(spec, {-1.0}, Grid1D::symmetric_box(20.0, 0.1)), ConstraintError);
        CHECK_THROWS_AS(minimize_system(CoupledGSpec::cubic_pair(0.5), {0.0, 0.0}, Grid1D::symmetric_box(20.0, 0.1)),
                        ConstraintError);
    }

    TEST_CASE("energy curve is strictly decreasing") {
        const auto rows = energy_curve_sweep(NonlinearitySpec::power(3.0), {0.5, 1.0, 1.5, 2.0}, std::nullopt, 0.05);
        REQUIRE(rows.size() == 4);
        for (std::size_t k = 0; k < rows.size(); ++k) {
            CHECK(rows[k].energy < 0.0);
            if (k) CHECK(rows[k].energy < rows[k - 1].energy);
        }
    }

    TEST_CASE("decoupled system splits into two scalar problems") {
        const double h = 0.05;
        const auto g = CoupledGSpec::cubic_pair(0.0);
        const auto sys = minimize_system_auto(g, {1.0, 2.0}, h);
        // G(s, 0) = s^2/4 is the cubic F(|u|) = |u|^4/4
        const auto spec = NonlinearitySpec::power(3.0);
        const auto a = minimize_scalar_auto(spec, {1.0}, h);
        const auto b = minimize_scalar_auto(spec, {2.0}, h);
        CHECK(sys.converged);
        CHECK(sys.energy.total == doctest::Approx(a.energy.total + b.energy.total).epsilon(1e-6));

        const auto one = minimize_system_auto(CoupledGSpec::cubic_pair(0.5), {1.0, 0.0}, h);
        CHECK(one.energy.total == doctest::Approx(a.energy.total).epsilon(1e-6));
    }

    TEST_CASE("coupling lowers the system energy") {
        const double h = 0.05;
        const auto g = CoupledGSpec::cubic_pair(0.5);
        const auto both = minimize_system_auto(g, {1.0, 1.0}, h);
        const auto e10 = minimize_system_auto(g, {1.0, 0.0}, h);
        const auto e01 = minimize_system_auto(g, {0.0, 1.0}, h);
        CHECK(both.energy.total < e10.energy.total + e01.energy.total);
        const auto res = system_el_residual(both.fields[0], both.fields[1], both.multiplier[0],
                                            both.multiplier[1], g);
        CHECK(res.first <= 1e-2);
        CHECK(res.second <= 1e-2);
    }

    TEST_CASE("2D power ground state has negative energy") {
        const auto r = minimize_scalar(NonlinearitySpec::power(2.5, 2), {20.0},
                                       Grid2D::centered(40, 40, 0.25, 0.25));
        CHECK(r.energy.total < 0.0);
        CHECK(lp_norm(r.fields[0], 2.0) == doctest::Approx(20.0).epsilon(1e-12));
    }
}

#include <doctest.h>

#include <cmath>

#include "rkit/energy.hpp"

using namespace rkit;

namespace {
Field1D soliton(double alpha, double h) {
    const double b = alpha / 4;
    return Field1D::sample(Grid1D::symmetric_box(240.0 / alpha, h), [b](double x) {
        return std::sqrt(2.0) * b / std::cosh(b * x);
    });
}
}  // namespace

TEST_SUITE("energy") {
    TEST_CASE("power nonlinearity and admissibility") {
        const auto s = NonlinearitySpec::power(3.0);
        CHECK(s.F(2.0) == doctest::Approx(4.0));
        CHECK(s.f(-2.0) == doctest::Approx(-8.0));
        CHECK_THROWS_AS(NonlinearitySpec::power(5.0), DomainError);
        CHECK_THROWS_AS(NonlinearitySpec::power(3.0, 2), DomainError);
        CHECK_NOTHROW(NonlinearitySpec::power(2.5, 2));
    }

    TEST_CASE("tabulated F") {
        const auto t = NonlinearitySpec::tabulated({0, 1, 2}, {0, 1, 3});
        CHECK(t.F(0.5) == doctest::Approx(0.5));
        CHECK(t.F(1.5) == doctest::Approx(2.0));
        CHECK_THROWS_AS(NonlinearitySpec::tabulated({0, 1}, {1, 2}), DomainError);
    }

    TEST_CASE("soliton energy -alpha^3/96") {
        for (double a : {1.0, 2.0}) {
            const auto u = soliton(a, 0.01);
            CHECK(lp_norm(u, 2.0) == doctest::Approx(a).epsilon(1e-4));
            const auto e = scalar_energy(u, NonlinearitySpec::power(3.0));
            CHECK(std::fabs(e.total + a * a * a / 96) <= 1e-4 * a * a * a);
            CHECK(e.total == doctest::Approx(e.kinetic - e.potential));
        }
        const auto u = soliton(1.0, 0.01);
        // mu = b^2 for the profile sqrt(2) b sech(b x)
        CHECK(euler_lagrange_residual(u, 1.0 / 16, NonlinearitySpec::power(3.0)) <= 1e-2);
    }

    TEST_CASE("system energy of a Gaussian pair, coupling term only") {
        CoupledGSpec g;
        g.a1 = g.a2 = 0.0;
        g.beta = 1.0;
        const auto u = Field1D::sample(Grid1D::symmetric_box(16.0, 0.01), [](double x) { return std::exp(-x * x / 2); });
        const auto e = system_energy(u, u, g);
        // J = kinetic - ∫ e^{-2x^2}
        CHECK(e.potential == doctest::Approx(std::sqrt(M_PI / 2)).epsilon(1e-8));
        CHECK(e.kinetic == doctest::Approx(dirichlet_integral(u)));
    }

    TEST_CASE("coupled spec windows and monotonicity certificate") {
        auto g = CoupledGSpec::cubic_pair(0.5);
        CHECK_NOTHROW(g.validate());
        CHECK(certify_monotone_g(g, 4.0));
        CHECK(certify_strict_coupling(g, 2.0));
        CHECK_FALSE(certify_strict_coupling(CoupledGSpec::cubic_pair(0.0), 2.0));
        g.gamma1 = 2.0;
        CHECK_THROWS_AS(g.validate(), DomainError);
        CHECK(coercivity_bound(CoupledGSpec::cubic_pair(0.5), 2.0) > 0.0);
    }
}

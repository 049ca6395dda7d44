#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "rkit/grid.hpp"
#include "rkit/random_fields.hpp"

using namespace rkit;

namespace {
Field1D gaussian(double h) {
    return Field1D::sample(Grid1D::symmetric_box(16.0, h), [](double x) { return std::exp(-x * x); });
}
}  // namespace

TEST_SUITE("grid") {
    TEST_CASE("lp_norm: direct sums and the Gaussian integral") {
        CHECK(lp_norm(Field1D(Grid1D::centered(7, 0.3)), 2.0) == 0.0);
        CHECK(lp_norm(Field1D(Grid1D(0.0, 0.5, 2), {1.0, 2.0}), 2.0) == doctest::Approx(2.5).epsilon(1e-15));
        CHECK(std::fabs(lp_norm(gaussian(0.01), 2.0) - std::sqrt(M_PI / 2)) < 1e-6);
        CHECK_THROWS_AS(lp_norm(gaussian(0.1), 0.5), DomainError);
    }

    TEST_CASE("gradient_seminorm: zero extension at both ends") {
        const double c = 2.0, h = 0.5;
        Field1D u(Grid1D(0.0, h, 3), {c, c, c});
        CHECK(gradient_seminorm(u, 3.0) == doctest::Approx(2.0 * h * std::pow(c / h, 3.0)));
        CHECK(gradient_seminorm(Field1D(Grid1D(0.0, 1.0, 3), {0.0, 1.0, 0.0}), 2.0) == doctest::Approx(2.0));
        CHECK(std::fabs(gradient_seminorm(gaussian(0.01), 2.0) - std::sqrt(2 * M_PI) / 2) < 1e-3);
        CHECK_THROWS_AS(gradient_seminorm(Field1D(Grid1D(0.0, 1.0, 1), {1.0}), 2.0), GridError);
        Field2D w(Grid2D::centered(1, 4, 1.0, 1.0));
        CHECK_THROWS_AS(gradient_seminorm(w, 2.0, 0), GridError);
        CHECK_NOTHROW(gradient_seminorm(w, 2.0, 1));
    }

    TEST_CASE("distribution_profile counts cells") {
        Field1D u(Grid1D(0.0, 1.0, 3), {3.0, 1.0, 2.0});
        const std::vector<double> lv = {0.5, 1.5, 2.5};
        const auto d = distribution_profile(u, lv);
        CHECK(d.measures == std::vector<double>{3.0, 2.0, 1.0});
        const auto z = distribution_profile(Field1D(Grid1D::centered(5, 1.0)), lv);
        CHECK(z.measures == std::vector<double>{0.0, 0.0, 0.0});
        const std::vector<double> half = {0.5};
        const auto g = distribution_profile(gaussian(0.01), half);
        CHECK(std::fabs(g.measures[0] - 2 * std::sqrt(std::log(2.0))) <= 0.02);
        const std::vector<double> bad = {1.0, 0.5};
        CHECK_THROWS_AS(distribution_profile(u, bad), DomainError);
        const std::vector<double> nonpos = {0.0, 1.0};
        CHECK_THROWS_AS(distribution_profile(u, nonpos), DomainError);
    }

    TEST_CASE("quadrature_phi") {
        Field1D u(Grid1D(0.0, 1.0, 3), {1.0, 2.0, 3.0});
        CHECK(quadrature_phi(u, [](double s) { return s; }) == 6.0);
        const auto g = gaussian(0.05);
        CHECK(quadrature_phi(g, [](double s) { return s * s; }) == doctest::Approx(lp_norm(g, 2.0)).epsilon(1e-14));
        // ∫ e^{-4x^2} - e^{-2x^2} = sqrt(pi)/2 - sqrt(pi/2)
        const double oracle = std::sqrt(M_PI) / 2 - std::sqrt(M_PI / 2);
        CHECK(quadrature_phi(gaussian(0.01), [](double s) { return s * s * s * s - s * s; }) ==
              doctest::Approx(oracle).epsilon(1e-9));
        CHECK_THROWS_AS(quadrature_phi(u, [](double s) { return s + 1.0; }), ContractError);
    }

    TEST_CASE("property: norms depend only on the value multiset") {
        Rng rng(11);
        for (int k = 0; k < 1000; ++k) {
            Field1D u = random_rough_field(rng, 3 + rng.below(60), 0.1);
            Field1D v = u;
            for (std::size_t i = v.size() - 1; i > 0; --i) std::swap(v[i], v[rng.below(i + 1)]);
            REQUIRE(lp_norm(u, 2.5) == lp_norm(v, 2.5));
            REQUIRE(quadrature_phi(u, [](double s) { return std::sin(s); }) ==
                    quadrature_phi(v, [](double s) { return std::sin(s); }));
        }
    }

    TEST_CASE("property: profiles are non-increasing multiples of h") {
        Rng rng(12);
        for (int k = 0; k < 200; ++k) {
            const double h = 0.25;
            Field1D u = random_rough_field(rng, 40, h, 7);
            std::vector<double> lv;
            for (int j = 1; j <= 12; ++j) lv.push_back(j / 13.0);
            const auto d = distribution_profile(u, lv);
            for (std::size_t j = 0; j < lv.size(); ++j) {
                REQUIRE(std::fmod(d.measures[j], h) == 0.0);
                if (j) REQUIRE(d.measures[j] <= d.measures[j - 1]);
            }
        }
    }

    TEST_CASE("property: seminorm is translation invariant") {
        Rng rng(13);
        for (int k = 0; k < 300; ++k) {
            Field1D core = random_rough_field(rng, 20, 0.1);
            Field1D u(Grid1D::centered(40, 0.1));
            std::copy(core.values.begin(), core.values.end(), u.values.begin() + 10);
            const long s = static_cast<long>(rng.below(21)) - 10;
            REQUIRE(gradient_seminorm(shift_cells(u, s), 2.0) == gradient_seminorm(u, 2.0));
        }
        Field1D edge(Grid1D::centered(3, 1.0), {1.0, 0.0, 0.0});
        CHECK_THROWS_AS(shift_cells(edge, -1), DomainError);
    }

    TEST_CASE("grid construction errors") {
        CHECK_THROWS_AS(Grid1D(0.0, 0.0, 3), GridError);
        CHECK_THROWS_AS(Grid1D(0.0, 1.0, 0), GridError);
        CHECK_THROWS_AS(Field1D(Grid1D(0.0, 1.0, 2), {1.0}), GridError);
        CHECK_THROWS_AS(Field1D(Grid1D(0.0, 1.0, 1), {NAN}), DomainError);
        const auto g = Grid1D::centered(4, 0.5);
        CHECK(g.center(0) == -0.75);
        CHECK(g.center(3) == 0.75);
    }
}

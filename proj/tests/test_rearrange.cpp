#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "rkit/layer_cake.hpp"
#include "rkit/random_fields.hpp"
#include "rkit/rearrange.hpp"

using namespace rkit;

namespace {
Field1D row(std::vector<double> v, double h = 1.0) {
    const auto n = v.size();
    return Field1D(Grid1D::centered(n, h), std::move(v));
}

Field1D padded(const Field1D& core, std::size_t pad) {
    Field1D u(Grid1D::centered(core.size() + 2 * pad, core.grid.h));
    std::copy(core.values.begin(), core.values.end(), u.values.begin() + static_cast<long>(pad));
    return u;
}
}  // namespace

TEST_SUITE("rearrange") {
    TEST_CASE("decreasing and symmetric rearrangements") {
        CHECK(decreasing_rearrangement(row({3, 1, 2})).values == std::vector<double>{3, 2, 1});
        CHECK(symmetric_rearrangement_1d(row({1, 3, 2})).values == std::vector<double>{1, 3, 2});
        CHECK(symmetric_rearrangement_1d(row({0, 0, 0, 0})).values == std::vector<double>(4, 0.0));
        CHECK(decreasing_rearrangement(row({3, 1, 2}, 0.5)).grid.x0 == 0.25);
        CHECK_THROWS_AS(symmetric_rearrangement_1d(row({1, -1, 2})), DomainError);
    }

    TEST_CASE("placement order, nearest to the origin first, right first on ties") {
        CHECK(placement_order(5) == std::vector<std::size_t>{2, 3, 1, 4, 0});
        CHECK(placement_order(4) == std::vector<std::size_t>{2, 1, 3, 0});
    }

    TEST_CASE("symmetric-decreasing input is a fixed point") {
        const auto g = Field1D::sample(Grid1D::centered(40, 0.1), [](double x) { return std::exp(-x * x); });
        const auto s = symmetric_rearrangement_1d(g);
        for (std::size_t i = 0; i < g.size(); ++i) CHECK(s[i] == doctest::Approx(g[i]).epsilon(1e-15));
    }

    TEST_CASE("decreasing rearrangement of a tent") {
        const double h = 0.01;
        const auto f = Field1D::sample(Grid1D(h / 2, h, 400), [](double x) { return std::min(x, 4 - x); });
        const auto d = decreasing_rearrangement(f);
        for (std::size_t i = 0; i < d.size(); ++i)
            REQUIRE(std::fabs(d[i] - (4 - d.grid.center(i)) / 2) <= h);
    }

    TEST_CASE("Steiner and Schwarz") {
        Field2D u(Grid2D::centered(3, 2, 1.0, 1.0), {1, 3, 2, 0, 0, 5});
        const auto s = steiner_rearrangement(u);
        CHECK(s.values == std::vector<double>{1, 3, 2, 0, 5, 0});
        CHECK_THROWS_AS(schwarz_rearrangement(Field2D(Grid2D::centered(3, 3, 1.0, 0.5))), UnsupportedGridError);
        const auto line = row({0.5, 2, 1, 4, 3});
        CHECK(schwarz_rearrangement(line).values == symmetric_rearrangement_1d(line).values);

        const auto radial = Field2D::sample(Grid2D::centered(30, 30, 0.2, 0.2),
                                            [](double x, double y) { return std::exp(-(x * x + y * y)); });
        const auto z = schwarz_rearrangement(radial);
        CHECK(sorted_multiset(z.values) == sorted_multiset(radial.values));
        double worst = 0.0;
        for (std::size_t k = 0; k < z.values.size(); ++k) worst = std::max(worst, std::fabs(z.values[k] - radial.values[k]));
        CHECK(worst <= 1e-12);
    }

    TEST_CASE("coupled rearrangement") {
        const auto u = row({0, 1, 3, 2, 0}, 0.5);
        const auto zero = row({0, 0, 0}, 0.5);
        const auto w = coupled_rearrangement(u, zero);
        CHECK(w.size() == 8);
        CHECK(w.grid.h == 0.5);
        CHECK(sorted_multiset(w.values) == std::vector<double>{3, 2, 1, 0, 0, 0, 0, 0});
        CHECK(w.values == std::vector<double>{0, 0, 0, 2, 3, 1, 0, 0});
        CHECK_THROWS_AS(coupled_rearrangement(u, row({1, 2}, 0.25)), GridError);
    }

    TEST_CASE("coupled profile of an even function with itself is w(x/2)") {
        const double h = 0.02;
        const auto f = [](double x) { return std::exp(-x * x); };
        const auto u = Field1D::sample(Grid1D::symmetric_box(12.0, h), f);
        const auto w = coupled_profile(u, u);
        double worst = 0.0;
        for (std::size_t i = 0; i < w.size(); ++i)
            worst = std::max(worst, std::fabs(w[i] - f(w.grid.center(i) / 2)));
        // Lipschitz constant of e^{-x^2/4} is below 0.43
        CHECK(worst <= 0.43 * 2 * h);
    }

    TEST_CASE("multiplicity and truncation") {
        CHECK(multiplicity(row({0, 1, 2, 1, 0}), {1.5}) == 2);
        CHECK(multiplicity(row({0, 2, 0, 3, 0}), {1.5}) == 4);
        CHECK(multiplicity(row({2, 0, 3}), {1.5, true}) == 4);
        CHECK(multiplicity(row({2, 0, 3}), {1.5, false}) == 2);
        CHECK_THROWS_AS(multiplicity(row({0, 1, 0}), {1.0}), AmbiguousLevelError);
        CHECK(truncate_shift(row({3, 1, 2}), 1.5).values == std::vector<double>{1.5, 0, 0.5});
    }

    TEST_CASE("property: exact equimeasurability on 1000 random pairs") {
        Rng rng(21);
        for (int k = 0; k < 1000; ++k) {
            const double h = 0.1;
            const auto u = random_rough_field(rng, 1 + rng.below(40), h, k % 2 ? 8 : 0);
            const auto v = random_rough_field(rng, 1 + rng.below(40), h, k % 3 ? 8 : 0);
            const auto s = symmetric_rearrangement_1d(u);
            REQUIRE(sorted_multiset(s.values) == sorted_multiset(u.values));
            const auto w = coupled_rearrangement(u, v);
            std::vector<double> both = u.values;
            both.insert(both.end(), v.values.begin(), v.values.end());
            REQUIRE(sorted_multiset(w.values) == sorted_multiset(both));
            REQUIRE(lp_norm(w, 2.0) == doctest::Approx(lp_norm(u, 2.0) + lp_norm(v, 2.0)).epsilon(1e-12));
        }
    }

    TEST_CASE("property: Polya-Szego on random 1D fields") {
        Rng rng(22);
        for (int k = 0; k < 500; ++k) {
            const auto u = padded(random_rough_field(rng, 2 + rng.below(30), 0.1), 1);
            const auto s = symmetric_rearrangement_1d(u);
            for (double p : {1.0, 2.0, 3.0})
                REQUIRE(gradient_seminorm(s, p) <= gradient_seminorm(u, p) * (1 + 1e-12));
        }
    }

    TEST_CASE("property: rearrangement commutes with truncation") {
        Rng rng(23);
        for (int k = 0; k < 300; ++k) {
            const auto u = random_rough_field(rng, 2 + rng.below(30), 0.1, 10);
            const double s = rng.uniform();
            REQUIRE(symmetric_rearrangement_1d(truncate_shift(u, s)).values ==
                    truncate_shift(symmetric_rearrangement_1d(u), s).values);
        }
    }
}

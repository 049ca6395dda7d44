#include <doctest.h>

#include <cmath>

#include "rkit/layer_cake.hpp"
#include "rkit/random_fields.hpp"

using namespace rkit;

TEST_SUITE("layer_cake") {
    TEST_CASE("level-set measure of a tent interpolant") {
        Field1D tent(Grid1D(0.0, 1.0, 3), {0, 2, 0});
        const auto seg = interpolant_segments(tent, false);
        LevelSetMeasure mu(seg);
        CHECK(mu.total() == doctest::Approx(2.0));
        CHECK(mu.measure(1.0) == doctest::Approx(1.0));
        CHECK(mu.measure(2.0) == doctest::Approx(0.0));
        CHECK(mu.inverse(0.5) == doctest::Approx(1.5));
        CHECK(mu.max_level() == 2.0);
    }

    TEST_CASE("Duff equality for monotone and tent profiles") {
        const double h = 0.01;
        const auto mono = sample_nodes([](double x) { return x * x + x; }, 2.0, h);
        const auto tent = sample_nodes([](double x) { return std::min(x, 2.0 - x); }, 2.0, h);
        for (double p : {1.0, 2.0, 3.0}) {
            const auto a = duff_integrals(mono, p);
            CHECK(a.lhs == doctest::Approx(a.rhs).epsilon(1e-9));
            const auto b = duff_integrals(tent, p);
            CHECK(b.lhs == doctest::Approx(b.rhs).epsilon(1e-9));
            CHECK(b.max_multiplicity == 2);
        }
    }

    TEST_CASE("Duff: p = 1 is an identity, p > 1 strict for asymmetric profiles") {
        Rng rng(31);
        for (int k = 0; k < 50; ++k) {
            const auto pl = random_piecewise_linear(rng, 4.0, 0.25);
            const auto f = sample_nodes(pl, 4.0, 0.05);
            const auto one = duff_integrals(f, 1.0);
            REQUIRE(one.lhs == doctest::Approx(one.rhs).epsilon(1e-9));
            for (double p : {2.0, 3.0}) {
                const auto d = duff_integrals(f, p);
                REQUIRE(d.lhs < d.rhs * (1 - 1e-6));
            }
        }
    }

    TEST_CASE("coupled profile is equimeasurable with the pair") {
        Rng rng(32);
        for (int k = 0; k < 100; ++k) {
            const auto pu = random_bumps(rng, 4.0);
            const auto pv = random_bumps(rng, 4.0);
            const auto u = sample_box(pu, 4.0, 0.05);
            const auto v = sample_box(pv, 4.0, 0.05);
            const auto w = coupled_profile(u, v);
            CHECK(w.size() == u.size() + v.size() + 2);
            LevelSetMeasure mw(interpolant_segments(w, true));
            LevelSetMeasure mu(interpolant_segments(u, true));
            LevelSetMeasure mv(interpolant_segments(v, true));
            const double t = 0.3 * mw.max_level();
            // sampling the profile at cell centers moves each level set by at most one cell
            REQUIRE(std::fabs(mw.measure(t) - mu.measure(t) - mv.measure(t)) <= 2 * 0.05);
        }
    }
}

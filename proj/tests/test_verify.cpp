#include <doctest.h>

#include <cmath>

#include "rkit/random_fields.hpp"
#include "rkit/verify.hpp"

using namespace rkit;

namespace {
bool all_pass(const std::vector<CheckReport>& rs) {
    for (const auto& r : rs)
        if (!r.pass && r.status != "skipped") return false;
    return !rs.empty();
}
}  // namespace

TEST_SUITE("verify") {
    TEST_CASE("settle follows the claim") {
        CheckReport r;
        r.claim = Claim::Strict;
        r.margin = 1.0;
        r.tolerance = 0.1;
        settle(r);
        CHECK_FALSE(r.pass);  // no refinement evidence
        r.refinement_margin = 0.9;
        settle(r);
        CHECK(r.pass);
        r.claim = Claim::Equality;
        settle(r);
        CHECK_FALSE(r.pass);
        r.claim = Claim::NonStrict;
        r.margin = -0.05;
        r.refinement_margin = 0.0;
        settle(r);
        CHECK(r.pass);
    }

    TEST_CASE("lemma checks on small examples") {
        Field1D u(Grid1D::centered(8, 0.5), {0, 0, 1, 3, 2, 0, 0, 0});
        Field1D v(Grid1D::centered(8, 0.5), {0, 0, 0, 0, 0, 2, 2, 0});
        CHECK(all_pass(check_lemma1(u, v, 1.0, {1, -1}, {})));
        CHECK(all_pass(check_lemma3(u, v, {1.0, 2.0, 3.0}, {0.5, 1.5, 2.5}, {})));
        CHECK(all_pass(check_lemma2_thm1(u, v, {1.0, 2.0}, {})));
    }

    TEST_CASE("Gaussian pair: strict contraction and the 1/4 ratio") {
        const Source1D g = [](double h) {
            return sample_box([](double x) { return std::exp(-x * x); }, 8.0, h);
        };
        const auto rs = check_lemma2_thm1(g, g, {2.0}, {});
        CHECK(all_pass(rs));
        bool strict = false;
        for (const auto& r : rs) {
            if (r.check_id.rfind("thm1.strict", 0) == 0) {
                strict = true;
                CHECK(r.lhs / r.rhs == doctest::Approx(0.25).epsilon(0.08));
            }
        }
        CHECK(strict);
    }

    TEST_CASE("Duff checks") {
        const Source1D tent = [](double h) {
            return sample_nodes([](double x) { return std::min(x, 2.0 - x); }, 2.0, h);
        };
        CHECK(all_pass(check_duff(tent, {1.0, 2.0, 3.0}, DuffExpect::Equality, {})));
        Rng rng(51);
        const auto pl = random_piecewise_linear(rng, 4.0, 0.25);
        const Source1D asym = [pl](double h) { return sample_nodes(pl, 4.0, h); };
        CHECK(all_pass(check_duff(asym, {1.0, 2.0, 3.0}, DuffExpect::Strict, {})));
        // the tent is not a strict case
        CHECK_FALSE(all_pass(check_duff(tent, {2.0}, DuffExpect::Strict, {})));
    }

    TEST_CASE("lemma10 rejects a decreasing g") {
        CoupledGSpec g = CoupledGSpec::cubic_pair(0.5);
        g.a1 = -0.25;
        const Source1D b = [](double h) { return sample_box([](double x) { return std::exp(-x * x); }, 4.0, h); };
        CHECK_THROWS_AS(check_lemma10(b, b, b, b, g, Lemma10Expect::NonStrict, {}), DomainError);
    }

    TEST_CASE("run_all is deterministic and independent of jobs") {
        SuiteConfig cfg;
        cfg.field_count = 4;
        cfg.suites = {"prop1", "lemma1", "lemma3", "duff"};
        const auto a = run_all(cfg);
        cfg.jobs = 3;
        const auto b = run_all(cfg);
        CHECK(a.all_pass);
        CHECK(reports_to_json(a.reports) == reports_to_json(b.reports));
        cfg.suites = {"nope"};
        CHECK_THROWS_AS(run_all(cfg), DomainError);
    }
}

// Acceptance run: one PASS/FAIL line per criterion, exit 1 if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "rkit/layer_cake.hpp"
#include "rkit/minimize.hpp"
#include "rkit/random_fields.hpp"
#include "rkit/rearrange.hpp"
#include "rkit/verify.hpp"

using namespace rkit;

namespace {

struct Tally {
    int checks = 0;
    int failed = 0;
    std::string first_failure;

    void add(const CheckReport& r) {
        ++checks;
        if (r.pass || r.status == "skipped") return;
        ++failed;
        if (first_failure.empty())
            first_failure = r.check_id + " margin=" + std::to_string(r.margin) + " tol=" + std::to_string(r.tolerance);
    }
    void add(const std::vector<CheckReport>& rs) {
        for (const auto& r : rs) add(r);
    }
    void expect(bool ok, const std::string& what) {
        ++checks;
        if (ok) return;
        ++failed;
        if (first_failure.empty()) first_failure = what;
    }
};

int failures = 0;

void criterion(int n, const std::string& title, double limit_s, const std::function<void(Tally&, std::ostringstream&)>& body) {
    Tally t;
    std::ostringstream note;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        body(t, note);
    } catch (const std::exception& e) {
        t.expect(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (limit_s > 0 && secs > limit_s) t.expect(false, "runtime " + std::to_string(secs) + " s over limit");
    const bool ok = t.failed == 0;
    if (!ok) ++failures;
    std::printf("%s criterion %d: %s [%d checks, %.1f s]%s%s\n", ok ? "PASS" : "FAIL", n, title.c_str(),
                t.checks, secs, note.str().empty() ? "" : " ", note.str().c_str());
    if (!ok) std::printf("    first failure: %s\n", t.first_failure.c_str());
    std::fflush(stdout);
}

Field1D padded_rough(Rng& rng, std::size_t n, std::size_t pad, double h, int q) {
    const auto core = random_rough_field(rng, n, h, q);
    Field1D u(Grid1D::centered(n + 2 * pad, h));
    std::copy(core.values.begin(), core.values.end(), u.values.begin() + static_cast<long>(pad));
    return u;
}

Source1D bumps(const BumpProfile& b, double hw) {
    return [b, hw](double h) { return sample_box(b, hw, h); };
}

Source1D fn_source(std::function<double(double)> f, double hw) {
    return [f, hw](double h) { return sample_box(f, hw, h); };
}

}  // namespace

int main() {
    const CheckConfig cc{0.05, 1.0};

    criterion(1, "exact invariants on 1000 random pairs", 10.0, [&](Tally& t, std::ostringstream&) {
        Rng rng(1001);
        const std::vector<double> ps = {1.0, 2.0, 2.5, 3.0, 4.0};
        for (int k = 0; k < 1000; ++k) {
            const std::size_t n = 5 + rng.below(40);
            const int q = k % 2 ? 6 : 0;
            const auto u = padded_rough(rng, n, 8, cc.h, q);
            const auto v = padded_rough(rng, n, 8, cc.h, q);
            std::vector<double> levels(16);
            for (double& l : levels) l = rng.uniform();
            t.add(check_lemma3(u, v, ps, levels, cc));
            const long s1 = static_cast<long>(rng.below(17)) - 8;
            const long s2 = static_cast<long>(rng.below(17)) - 8;
            t.add(check_lemma1(u, v, rng.uniform(), {s1, s2}, cc));
            t.expect(sorted_multiset(symmetric_rearrangement_1d(u).values) == sorted_multiset(u.values),
                     "equimeasurability");
        }
    });

    criterion(2, "gradient contraction on 200 random fields and pairs", 20.0, [&](Tally& t, std::ostringstream&) {
        Rng rng(1002);
        const std::vector<double> ps = {1.0, 2.0, 3.0};
        for (int k = 0; k < 100; ++k) {
            const auto b = random_bumps(rng, 3.0, true);
            auto fn = [b](double x, double y) { return b(x, 0.5 * y); };
            const auto u = sample_box(fn, 4.0, 2.0, cc.h);
            const auto f = sample_box(fn, 4.0, 2.0, cc.h / 2);
            t.add(check_prop1(u, ps, cc, &f));
        }
        for (int k = 0; k < 100; ++k)
            t.add(check_lemma2_thm1(bumps(random_bumps(rng, 4.0), 5.0), bumps(random_bumps(rng, 4.0), 5.0), ps, cc));
    });

    criterion(3, "strict contraction for the Gaussian pair, ratio 1/4", 0.0, [&](Tally& t, std::ostringstream& note) {
        const auto g = fn_source([](double x) { return std::exp(-x * x); }, 8.0);
        const auto rs = check_lemma2_thm1(g, g, {2.0}, CheckConfig{0.01, 1.0});
        bool seen = false;
        for (const auto& r : rs) {
            t.add(r);
            if (r.check_id != "thm1.strict.p2") continue;
            seen = true;
            const double ratio = std::stod(r.metadata.at("ratio"));
            const double ratio2 = std::stod(r.metadata.at("ratio_h2"));
            t.expect(std::fabs(ratio - 0.25) <= 0.02, "ratio at h = 0.01");
            t.expect(r.refinement_margin && *r.refinement_margin > 0.0, "strict margin at h/2");
            note << "ratio=" << ratio << " ratio(h/2)=" << ratio2;
        }
        t.expect(seen, "strict report present");
    });

    criterion(4, "Duff equality and strictness on 100 asymmetric profiles", 30.0, [&](Tally& t, std::ostringstream& note) {
        const std::vector<double> ps = {1.0, 2.0, 3.0};
        const Source1D mono = [](double h) { return sample_nodes([](double x) { return x * x + x; }, 2.0, h); };
        const Source1D tent = [](double h) { return sample_nodes([](double x) { return std::min(x, 2.0 - x); }, 2.0, h); };
        t.add(check_duff(mono, ps, DuffExpect::Equality, cc));
        t.add(check_duff(tent, ps, DuffExpect::Equality, cc));
        // tent on [0, 2]: both sides equal 2 (1/2)^p with b = 2
        for (double p : ps) {
            const auto d = duff_integrals(sample_nodes([](double x) { return std::min(x, 2.0 - x); }, 2.0, 0.01), p);
            t.expect(std::fabs(d.lhs - 2.0 * std::pow(0.5, p)) <= 1e-9, "tent closed form");
        }
        Rng rng(1004);
        for (int k = 0; k < 100; ++k) {
            const auto pl = random_piecewise_linear(rng, 4.0, 0.25);
            const Source1D s = [pl](double h) { return sample_nodes(pl, 4.0, h); };
            t.add(check_duff(s, ps, DuffExpect::Strict, cc));
        }
        note << "(p=1 is an identity, checked as equality)";
    });

    criterion(5, "scalar minimizer energies, decreasing negative curve", 60.0, [&](Tally& t, std::ostringstream& note) {
        const auto spec = NonlinearitySpec::power(3.0, 1);
        double worst = 0.0;
        for (double a : {0.5, 1.0, 1.5, 2.0}) {
            const auto r = minimize_scalar_auto(spec, {a}, 0.01);
            const double exact = -a * a * a / 96;
            worst = std::max(worst, std::fabs(r.energy.total - exact) / std::fabs(exact));
            t.expect(r.converged, "converged");
            t.expect(std::fabs(r.energy.total - exact) <= 1e-3 * std::fabs(exact), "energy vs -a^3/96");
            t.expect(euler_lagrange_residual(r.fields[0], r.multiplier[0], spec) <= 1e-2, "EL residual");
            t.expect(r.energy.total < 0.0, "negative energy");
        }
        const auto fine = minimize_scalar_auto(spec, {1.0}, 0.005);
        t.expect(std::fabs(fine.energy.total + 1.0 / 96) <= 1e-3 / 96, "fine-grid oracle");
        const auto rows = energy_curve_sweep(spec, {0.5, 1.0, 1.5, 2.0}, std::nullopt, 0.01);
        for (std::size_t k = 1; k < rows.size(); ++k) t.expect(rows[k].energy < rows[k - 1].energy, "decreasing curve");
        note << "worst relative error " << worst;
    });

    criterion(6, "subadditivity chain for (1,1) and (1,2)", 0.0, [&](Tally& t, std::ostringstream&) {
        const auto spec = NonlinearitySpec::power(3.0, 1);
        for (auto [a, b] : {std::pair{1.0, 1.0}, std::pair{1.0, 2.0}}) {
            const auto rs = check_subadditivity(spec, a, b, cc.h);
            t.add(rs);
            int strict = 0;
            for (const auto& r : rs)
                if (r.claim == Claim::Strict) {
                    ++strict;
                    t.expect(r.margin > 0 && r.refinement_margin && *r.refinement_margin > 0, "positive strict margins");
                }
            t.expect(strict >= 2, "strict reports present");
        }
    });

    criterion(7, "system subadditivity, superadditivity, coercivity", 90.0, [&](Tally& t, std::ostringstream&) {
        const auto coupled = CoupledGSpec::cubic_pair(0.5);
        t.add(check_system_subadditivity(coupled, {1, 0}, {0, 1}, cc.h));
        Rng rng(1007);
        for (int k = 0; k < 20; ++k) {
            const auto s = [&]() { return bumps(random_bumps(rng, 3.0), 4.0); };
            auto r = check_lemma10(s(), s(), s(), s(), CoupledGSpec::cubic_pair(0.0), Lemma10Expect::Equality, cc);
            t.expect(r.tolerance <= 1e-12 * std::max(1.0, std::fabs(r.rhs)), "decoupled equality tolerance");
            t.add(r);
        }
        auto g = [](double c, double w) {
            return fn_source([c, w](double x) { return std::exp(-(x - c) * (x - c) / (w * w)); }, 6.0);
        };
        t.add(check_lemma10(g(0.0, 1.0), g(0.3, 0.8), g(-0.2, 1.2), g(0.1, 0.9), CoupledGSpec::cubic_pair(1.0),
                            Lemma10Expect::Strict, cc));
        t.add(check_coercivity(coupled, 2.0, 500, 1007, cc.h));
    });

    criterion(8, "verify suite all, seed 7: identical across runs and jobs", 0.0, [&](Tally& t, std::ostringstream&) {
        SuiteConfig cfg;
        cfg.seed = 7;
        cfg.jobs = 1;
        const auto a = run_all(cfg);
        const auto b = run_all(cfg);
        cfg.jobs = 4;
        const auto c = run_all(cfg);
        const auto ja = reports_to_json(a.reports);
        t.expect(a.all_pass, "suite passes");
        t.expect(ja == reports_to_json(b.reports), "two consecutive runs");
        t.expect(ja == reports_to_json(c.reports), "jobs 1 vs 4");
    });

    return failures ? 1 : 0;
}

#include "rkit/verify.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <thread>

#include <json.hpp>

#include "rkit/field_io.hpp"
#include "rkit/layer_cake.hpp"
#include "rkit/random_fields.hpp"
#include "rkit/rearrange.hpp"

namespace rkit {

namespace {

std::string num(double x) { return format_real(x); }

std::string pname(double p) {
    std::string s = num(p);
    std::replace(s.begin(), s.end(), '.', '_');
    return "p" + s;
}

CheckReport make(std::string id, Claim claim, double lhs, double rhs, double margin, double tol,
                 double h) {
    CheckReport r;
    r.check_id = std::move(id);
    r.claim = claim;
    r.lhs = lhs;
    r.rhs = rhs;
    r.margin = margin;
    r.tolerance = tol;
    r.grid_h = h;
    r.metadata["claim"] = claim_name(claim);
    return r;
}

// Exact check on two arrays: lhs = number of cells that differ bitwise.
CheckReport bitwise(std::string id, const std::vector<double>& a, const std::vector<double>& b,
                    double h) {
    double diff = 0.0;
    if (a.size() != b.size()) {
        diff = static_cast<double>(std::max(a.size(), b.size()));
    } else {
        for (std::size_t i = 0; i < a.size(); ++i)
            if (!(a[i] == b[i])) diff += 1.0;
    }
    auto r = make(std::move(id), Claim::Exact, diff, 0.0, -diff, 0.0, h);
    r.metadata["cells"] = std::to_string(a.size());
    settle(r);
    return r;
}

CheckReport relative_equality(std::string id, double lhs, double rhs, double rel, double h,
                              Claim claim = Claim::Exact) {
    auto r = make(std::move(id), claim, lhs, rhs, rhs - lhs,
                  rel * std::max(std::fabs(rhs), std::numeric_limits<double>::min()), h);
    settle(r);
    return r;
}

Field1D pad_centered(const Field1D& u, std::size_t m) {
    Field1D out(Grid1D::centered(m, u.grid.h));
    const std::size_t off = (m - u.size()) / 2;
    std::copy(u.values.begin(), u.values.end(), out.values.begin() + static_cast<long>(off));
    return out;
}

double max_value(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, x);
    return m;
}

// positive, even, non-increasing in |x| (to 1e-12 of the max)
bool qualifies_strict(const Field1D& u) {
    const auto& v = u.values;
    const std::size_t n = v.size();
    const double eps = 1e-12 * max_value(v);
    for (std::size_t i = 0; i < n; ++i) {
        if (!(v[i] > 0.0)) return false;
        if (std::fabs(v[i] - v[n - 1 - i]) > eps) return false;
    }
    for (std::size_t i = n / 2; i + 1 < n; ++i)
        if (v[i + 1] > v[i] + eps) return false;
    return true;
}

Field1D scaled_to_mass(Field1D w, double target) {
    const double m = lp_norm(w, 2.0);
    if (m > 0.0 && target > 0.0) {
        const double k = std::sqrt(target / m);
        for (double& x : w.values) x *= k;
    }
    return w;
}

// A strict margin counts when it clears four times its own change under
// refinement (a discretization error estimate) and a rounding floor.
void strict_tolerance(CheckReport& r, double scale) {
    double tol = 1e-9 * std::fabs(scale);
    if (r.refinement_margin) tol = std::max(tol, 4.0 * std::fabs(r.margin - *r.refinement_margin));
    r.tolerance = tol;
}

}  // namespace

const char* claim_name(Claim c) {
    switch (c) {
        case Claim::Exact: return "exact";
        case Claim::Equality: return "equality";
        case Claim::NonStrict: return "non-strict";
        case Claim::Strict: return "strict";
    }
    return "?";
}

void settle(CheckReport& r) {
    if (r.status == "skipped" || r.status == "inconclusive") {
        r.pass = false;
        return;
    }
    switch (r.claim) {
        case Claim::Exact:
        case Claim::Equality:
            r.pass = std::fabs(r.margin) <= r.tolerance;
            if (r.refinement_margin) r.pass = r.pass && std::fabs(*r.refinement_margin) <= r.tolerance;
            break;
        case Claim::NonStrict:
            r.pass = r.margin >= -r.tolerance;
            if (r.refinement_margin) r.pass = r.pass && *r.refinement_margin >= -r.tolerance;
            break;
        case Claim::Strict:
            r.pass = r.margin > r.tolerance && r.refinement_margin && *r.refinement_margin > r.tolerance;
            break;
    }
    r.status = r.pass ? "pass" : "fail";
}

// ---------------------------------------------------------------------------

std::vector<CheckReport> check_prop1(const Field2D& u, const std::vector<double>& p_list,
                                     const CheckConfig& cfg, const Field2D* fine) {
    require_nonnegative(u.values, "check_prop1");
    const double h = u.grid.hx;
    std::vector<CheckReport> out;
    const Field2D s = steiner_rearrangement(u);

    out.push_back(bitwise("prop1.i.equimeasurable", sorted_multiset(s.values),
                          sorted_multiset(u.values), h));

    std::vector<std::pair<std::string, PointwiseMap>> phis = {
        {"cube", [](double x) { return x * x * x; }},
        // increasing part s^4 plus decreasing part -s^2
        {"mixed", [](double x) { return x * x * x * x - x * x; }},
    };
    for (double p : p_list)
        phis.emplace_back("pow_" + pname(p), [p](double x) { return std::pow(x, p); });
    for (const auto& [name, phi] : phis)
        out.push_back(relative_equality("prop1.ii.phi." + name, quadrature_phi(s, phi),
                                        quadrature_phi(u, phi), 1e-12, h));

    std::optional<Field2D> sf;
    if (fine) sf = steiner_rearrangement(*fine);
    for (int axis = 0; axis < 2; ++axis) {
        for (double p : p_list) {
            const double lhs = gradient_seminorm(s, p, axis);
            const double rhs = gradient_seminorm(u, p, axis);
            auto r = make("prop1.iii.grad.axis" + std::to_string(axis) + "." + pname(p),
                          Claim::NonStrict, lhs, rhs, rhs - lhs, cfg.grad_c * h * rhs, h);
            const double defect = std::max(0.0, lhs - rhs);
            r.metadata["defect_h"] = num(defect);
            if (sf) {
                const double l2 = gradient_seminorm(*sf, p, axis);
                const double r2 = gradient_seminorm(*fine, p, axis);
                r.refinement_margin = r2 - l2;
                const double defect2 = std::max(0.0, l2 - r2);
                r.metadata["defect_h2"] = num(defect2);
                settle(r);
                if (defect2 > defect + 1e-12 * rhs) {
                    r.pass = false;
                    r.status = "fail";
                    r.metadata["note"] = "defect grew under refinement";
                }
            } else {
                settle(r);
            }
            out.push_back(std::move(r));
        }
    }

    // Full-dimensional Schwarz symmetrization: same multiset, smaller Dirichlet integral.
    if (u.grid.hx == u.grid.hy) {
        const Field2D z = schwarz_rearrangement(u);
        out.push_back(bitwise("prop1.schwarz.equimeasurable", sorted_multiset(z.values),
                              sorted_multiset(u.values), h));
        const double lhs = dirichlet_integral(z);
        const double rhs = dirichlet_integral(u);
        auto r = make("prop1.schwarz.dirichlet", Claim::NonStrict, lhs, rhs, rhs - lhs,
                      5.0 * cfg.grad_c * h * rhs, h);
        settle(r);
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<CheckReport> check_lemma1(const Field1D& u, const Field1D& v, double s,
                                      std::pair<long, long> shifts, const CheckConfig&) {
    require_nonnegative(u.values, "check_lemma1(u)");
    require_nonnegative(v.values, "check_lemma1(v)");
    const double h = u.grid.h;
    std::vector<CheckReport> out;
    const Field1D w = coupled_rearrangement(u, v);

    const Field1D ws = coupled_rearrangement(shift_cells(u, shifts.first), shift_cells(v, shifts.second));
    auto ri = bitwise("lemma1.i.translation", ws.values, w.values, h);
    ri.metadata["shifts"] = std::to_string(shifts.first) + "," + std::to_string(shifts.second);
    out.push_back(std::move(ri));

    bool disjoint = u.grid == v.grid;
    if (disjoint)
        for (std::size_t i = 0; i < u.size(); ++i)
            if (u[i] > 0.0 && v[i] > 0.0) disjoint = false;
    if (disjoint) {
        Field1D sum(u.grid);
        for (std::size_t i = 0; i < u.size(); ++i) sum[i] = u[i] + v[i];
        const Field1D rs = symmetric_rearrangement_1d(pad_centered(sum, w.size()));
        out.push_back(bitwise("lemma1.ii.disjoint", w.values, rs.values, h));
    } else {
        CheckReport r = make("lemma1.ii.disjoint", Claim::Exact, 0.0, 0.0, 0.0, 0.0, h);
        r.status = "skipped";
        r.metadata["note"] = "supports overlap";
        out.push_back(std::move(r));
    }

    const Field1D lhs = coupled_rearrangement(truncate_shift(u, s), truncate_shift(v, s));
    const Field1D rhs = truncate_shift(w, s);
    auto riii = bitwise("lemma1.iii.truncation", lhs.values, rhs.values, h);
    riii.metadata["s"] = num(s);
    out.push_back(std::move(riii));
    return out;
}

std::vector<CheckReport> check_lemma3(const Field1D& u, const Field1D& v,
                                      const std::vector<double>& p_list,
                                      const std::vector<double>& levels, const CheckConfig&) {
    const double h = u.grid.h;
    const Field1D w = coupled_rearrangement(u, v);
    std::vector<CheckReport> out;

    auto count_above = [](const std::vector<double>& xs, double t) {
        return static_cast<long>(std::count_if(xs.begin(), xs.end(), [t](double x) { return x > t; }));
    };
    double mismatches = 0.0;
    for (double t : levels)
        if (count_above(w.values, t) != count_above(u.values, t) + count_above(v.values, t))
            mismatches += 1.0;
    auto rd = make("lemma3.distribution", Claim::Exact, mismatches, 0.0, -mismatches, 0.0, h);
    rd.metadata["levels"] = std::to_string(levels.size());
    settle(rd);
    out.push_back(std::move(rd));

    for (double p : p_list)
        out.push_back(relative_equality("lemma3.lp." + pname(p), lp_norm(w, p),
                                        lp_norm(u, p) + lp_norm(v, p), 1e-12, h));
    return out;
}

namespace {

struct GradPair {
    double lhs;
    double rhs;
};

GradPair merge_grad(const Field1D& u, const Field1D& v, double p) {
    const Field1D w = coupled_rearrangement(u, v);
    return {gradient_seminorm(w, p), gradient_seminorm(u, p) + gradient_seminorm(v, p)};
}

GradPair profile_grad(const Field1D& u, const Field1D& v, double p) {
    const Field1D w = coupled_profile(u, v);
    return {gradient_seminorm(w, p), gradient_seminorm(u, p) + gradient_seminorm(v, p)};
}

CheckReport contraction(std::string id, GradPair c, std::optional<GradPair> f, double h,
                        double grad_c) {
    auto r = make(std::move(id), Claim::NonStrict, c.lhs, c.rhs, c.rhs - c.lhs, grad_c * h * c.rhs, h);
    const double defect = std::max(0.0, c.lhs - c.rhs);
    r.metadata["defect_h"] = num(defect);
    if (f) {
        r.refinement_margin = f->rhs - f->lhs;
        const double defect2 = std::max(0.0, f->lhs - f->rhs);
        r.metadata["defect_h2"] = num(defect2);
        settle(r);
        if (defect2 > defect + 1e-12 * c.rhs) {
            r.pass = false;
            r.status = "fail";
            r.metadata["note"] = "defect grew under refinement";
        }
        return r;
    }
    settle(r);
    return r;
}

std::vector<CheckReport> lemma2_thm1_impl(const Field1D& u, const Field1D& v,
                                          const Field1D* uf, const Field1D* vf,
                                          const std::vector<double>& p_list,
                                          const CheckConfig& cfg) {
    require_nonnegative(u.values, "check_lemma2_thm1(u)");
    require_nonnegative(v.values, "check_lemma2_thm1(v)");
    const double h = u.grid.h;
    const bool refine = uf && vf;
    const bool strict = qualifies_strict(u) && qualifies_strict(v) &&
                        (!refine || (qualifies_strict(*uf) && qualifies_strict(*vf)));
    std::vector<CheckReport> out;
    for (double p : p_list) {
        std::optional<GradPair> f;
        if (refine) f = merge_grad(*uf, *vf, p);
        auto r = contraction("lemma2.axis0." + pname(p), merge_grad(u, v, p), f, h, cfg.grad_c);
        r.metadata["strict_variant"] = strict ? "eligible" : "downgraded";
        out.push_back(std::move(r));

        if (!strict) continue;
        const GradPair c = profile_grad(u, v, p);
        auto s = make("thm1.strict." + pname(p), Claim::Strict, c.lhs, c.rhs, c.rhs - c.lhs,
                      0.0, h);
        s.metadata["ratio"] = num(c.lhs / c.rhs);
        if (refine) {
            const GradPair cf = profile_grad(*uf, *vf, p);
            s.refinement_margin = cf.rhs - cf.lhs;
            s.metadata["ratio_h2"] = num(cf.lhs / cf.rhs);
        } else {
            s.metadata["note"] = "no refinement input";
        }
        strict_tolerance(s, c.rhs);
        settle(s);
        out.push_back(std::move(s));
    }
    return out;
}

}  // namespace

std::vector<CheckReport> check_lemma2_thm1(const Source1D& u, const Source1D& v,
                                           const std::vector<double>& p_list,
                                           const CheckConfig& cfg) {
    const Field1D uc = u(cfg.h), vc = v(cfg.h);
    const Field1D uf = u(cfg.h / 2), vf = v(cfg.h / 2);
    return lemma2_thm1_impl(uc, vc, &uf, &vf, p_list, cfg);
}

std::vector<CheckReport> check_lemma2_thm1(const Field1D& u, const Field1D& v,
                                           const std::vector<double>& p_list,
                                           const CheckConfig& cfg) {
    return lemma2_thm1_impl(u, v, nullptr, nullptr, p_list, cfg);
}

std::vector<CheckReport> check_lemma2(const Source2D& u, const Source2D& v,
                                      const std::vector<double>& p_list, const CheckConfig& cfg) {
    const double h = cfg.h;
    const Field2D uc = u(h), vc = v(h), uf = u(h / 2), vf = v(h / 2);
    const Field2D wc = coupled_rearrangement(uc, vc);
    const Field2D wf = coupled_rearrangement(uf, vf);
    std::vector<CheckReport> out;
    for (int axis = 0; axis < 2; ++axis)
        for (double p : p_list) {
            const GradPair c{gradient_seminorm(wc, p, axis),
                             gradient_seminorm(uc, p, axis) + gradient_seminorm(vc, p, axis)};
            const GradPair f{gradient_seminorm(wf, p, axis),
                             gradient_seminorm(uf, p, axis) + gradient_seminorm(vf, p, axis)};
            out.push_back(contraction("lemma2.2d.axis" + std::to_string(axis) + "." + pname(p), c,
                                      f, h, cfg.grad_c));
        }
    return out;
}

std::vector<CheckReport> check_duff(const Source1D& f, const std::vector<double>& p_list,
                                    DuffExpect expect, const CheckConfig& cfg) {
    const double h = cfg.h;
    const Field1D fc = f(h);
    const Field1D ff = f(h / 2);
    require_nonnegative(fc.values, "check_duff");
    std::vector<CheckReport> out;
    for (double p : p_list) {
        const DuffIntegrals c = duff_integrals(fc, p);
        const DuffIntegrals d = duff_integrals(ff, p);
        const bool strict = expect == DuffExpect::Strict && p > 1.0;
        // both sides are exact integrals of the interpolant: rounding-level tolerance
        auto r = make("duff." + pname(p), strict ? Claim::Strict : Claim::Equality, c.lhs, c.rhs,
                      c.rhs - c.lhs, 1e-9 * c.rhs, h);
        r.refinement_margin = d.rhs - d.lhs;
        if (strict) strict_tolerance(r, c.rhs);
        r.metadata["max_multiplicity"] = std::to_string(c.max_multiplicity);
        if (expect == DuffExpect::Strict && !strict)
            r.metadata["note"] = "p = 1: both sides equal sup f";
        settle(r);
        out.push_back(std::move(r));
    }
    return out;
}

CheckReport check_lemma10(const Source1D& u, const Source1D& v, const Source1D& phi,
                          const Source1D& psi, const CoupledGSpec& spec, Lemma10Expect expect,
                          const CheckConfig& cfg) {
    spec.validate();
    auto eval = [&](double h) {
        const Field1D a = u(h), b = v(h), c = phi(h), d = psi(h);
        double smax = 0.0;
        for (const auto* f : {&a, &b, &c, &d}) smax = std::max(smax, max_value(f->values));
        smax *= smax;
        if (!certify_monotone_g(spec, std::max(smax, 1.0)))
            throw DomainError("coupling spec: g1, g2 must be nonnegative and nondecreasing");
        const Field1D x = coupled_rearrangement(a, c);
        const Field1D y = coupled_rearrangement(b, d);
        const double lhs = system_energy(x, y, spec).potential;
        const double rhs = system_energy(a, b, spec).potential + system_energy(c, d, spec).potential;
        return std::pair<double, double>{lhs, rhs};
    };
    const auto [lhs, rhs] = eval(cfg.h);
    Claim claim = Claim::NonStrict;
    double tol = 1e-12 * std::fabs(rhs);
    if (expect == Lemma10Expect::Equality) claim = Claim::Equality;
    if (expect == Lemma10Expect::Strict) claim = Claim::Strict;
    auto r = make("lemma10", claim, lhs, rhs, lhs - rhs, tol, cfg.h);
    const auto [l2, r2] = eval(cfg.h / 2);
    r.refinement_margin = l2 - r2;
    if (claim == Claim::Strict) strict_tolerance(r, rhs);
    r.metadata["beta"] = num(spec.beta);
    settle(r);
    return r;
}

// ---------------------------------------------------------------------------

namespace {

struct ScalarLevel {
    double ea = 0, eb = 0, eab = 0, iw = 0;
    double merge_mass = 0, parts_mass = 0;
    double scaling_pred = 0;
    double profile_mass_defect = 0;
    bool converged = true;
    std::string diagnosis;
    int iterations = 0;
};

ScalarLevel scalar_level(const NonlinearitySpec& spec, double alpha, double beta, double h,
                         const FlowConfig& flow) {
    ScalarLevel s;
    const auto ra = minimize_scalar_auto(spec, {alpha, 0.0}, h, flow);
    const auto rb = minimize_scalar_auto(spec, {beta, 0.0}, h, flow);
    const auto rab = minimize_scalar_auto(spec, {alpha + beta, 0.0}, h, flow);
    for (const auto* r : {&ra, &rb, &rab}) {
        s.converged = s.converged && r->converged;
        s.iterations += r->iterations;
        if (!r->diagnosis.empty()) s.diagnosis = r->diagnosis;
    }
    s.ea = ra.energy.total;
    s.eb = rb.energy.total;
    s.eab = rab.energy.total;
    const Field1D& ua = ra.fields[0];
    const Field1D& ub = rb.fields[0];
    s.merge_mass = lp_norm(coupled_rearrangement(ua, ub), 2.0);
    s.parts_mass = lp_norm(ua, 2.0) + lp_norm(ub, 2.0);
    const Field1D w = coupled_profile(ua, ub);
    s.profile_mass_defect = lp_norm(w, 2.0) - (alpha + beta);
    s.iw = scalar_energy(scaled_to_mass(w, alpha + beta), spec).total;
    // w = u(x/2) when alpha == beta: half the kinetic, twice the potential
    s.scaling_pred = 0.5 * ra.energy.kinetic - 2.0 * ra.energy.potential;
    return s;
}

void mark_inconclusive(CheckReport& r, const std::string& why) {
    r.status = "inconclusive";
    r.pass = false;
    r.metadata["note"] = why;
}

}  // namespace

std::vector<CheckReport> check_subadditivity(const NonlinearitySpec& spec, double alpha,
                                             double beta, double h, const FlowConfig& flow) {
    if (!(alpha > 0.0 && beta > 0.0)) throw DomainError("subadditivity needs alpha, beta > 0");
    const ScalarLevel c = scalar_level(spec, alpha, beta, h, flow);
    const ScalarLevel f = scalar_level(spec, alpha, beta, h / 2, flow);
    const std::string tag = "(" + num(alpha) + "," + num(beta) + ")";
    const double scale = std::fabs(c.ea) + std::fabs(c.eb);
    std::vector<CheckReport> out;

    auto mass = relative_equality("subadd." + tag + ".a.mass", c.merge_mass, alpha + beta, 1e-12, h);
    mass.metadata["parts_mass"] = num(c.parts_mass);
    mass.metadata["profile_mass_defect"] = num(c.profile_mass_defect);
    out.push_back(std::move(mass));

    auto common = [&](CheckReport& r) {
        r.metadata["E_alpha"] = num(c.ea);
        r.metadata["E_beta"] = num(c.eb);
        r.metadata["E_sum"] = num(c.eab);
        r.metadata["I_w"] = num(c.iw);
        r.metadata["iterations"] = std::to_string(c.iterations + f.iterations);
        if (!(c.converged && f.converged))
            mark_inconclusive(r, "minimization did not converge: " + c.diagnosis + f.diagnosis);
    };

    auto lower = make("subadd." + tag + ".b.chain_lower", Claim::NonStrict, c.eab, c.iw,
                      c.iw - c.eab, 1e-6 * scale + 10 * flow.energy_tol, h);
    lower.refinement_margin = f.iw - f.eab;
    settle(lower);
    common(lower);
    out.push_back(std::move(lower));

    auto upper = make("subadd." + tag + ".b.chain_strict", Claim::Strict, c.iw, c.ea + c.eb,
                      c.ea + c.eb - c.iw, 0.0, h);
    upper.refinement_margin = f.ea + f.eb - f.iw;
    strict_tolerance(upper, scale);
    settle(upper);
    common(upper);
    out.push_back(std::move(upper));

    auto strict = make("subadd." + tag + ".c.strict", Claim::Strict, c.eab, c.ea + c.eb,
                       c.ea + c.eb - c.eab, 0.0, h);
    strict.refinement_margin = f.ea + f.eb - f.eab;
    strict_tolerance(strict, scale);
    settle(strict);
    common(strict);
    out.push_back(std::move(strict));

    if (alpha == beta) {
        auto sc = relative_equality("subadd." + tag + ".d.scaling", c.iw, c.scaling_pred, 1e-3, h,
                                    Claim::Equality);
        common(sc);
        out.push_back(std::move(sc));
    }
    return out;
}

namespace {

struct SystemLevel {
    double e1 = 0, e2 = 0, e12 = 0, jw = 0;
    bool converged = true;
    std::string diagnosis;
    int iterations = 0;
};

SystemLevel system_level(const CoupledGSpec& spec, ConstraintSpec m1, ConstraintSpec m2, double h,
                         const FlowConfig& flow) {
    SystemLevel s;
    const auto r1 = minimize_system_auto(spec, m1, h, flow);
    const auto r2 = minimize_system_auto(spec, m2, h, flow);
    const auto r12 = minimize_system_auto(spec, {m1.alpha + m2.alpha, m1.beta + m2.beta}, h, flow);
    for (const auto* r : {&r1, &r2, &r12}) {
        s.converged = s.converged && r->converged;
        s.iterations += r->iterations;
        if (!r->diagnosis.empty()) s.diagnosis = r->diagnosis;
    }
    s.e1 = r1.energy.total;
    s.e2 = r2.energy.total;
    s.e12 = r12.energy.total;
    const Field1D wu = scaled_to_mass(coupled_profile(r1.fields[0], r2.fields[0]), m1.alpha + m2.alpha);
    const Field1D wv = scaled_to_mass(coupled_profile(r1.fields[1], r2.fields[1]), m1.beta + m2.beta);
    s.jw = system_energy(wu, wv, spec).total;
    return s;
}

std::string mass_tag(ConstraintSpec m) { return "(" + num(m.alpha) + "," + num(m.beta) + ")"; }

}  // namespace

std::vector<CheckReport> check_system_subadditivity(const CoupledGSpec& spec,
                                                    ConstraintSpec m1, ConstraintSpec m2,
                                                    double h, const FlowConfig& flow) {
    spec.validate();
    const SystemLevel c = system_level(spec, m1, m2, h, flow);
    const SystemLevel f = system_level(spec, m1, m2, h / 2, flow);
    const std::string tag = "system." + mass_tag(m1) + "+" + mass_tag(m2) + ".beta" + num(spec.beta);
    const double scale = std::fabs(c.e1) + std::fabs(c.e2);
    const double equal_tol = 1e-6 * scale + 10 * flow.energy_tol;
    // Without coupling, masses living in different components add without gain.
    const bool decoupled = spec.beta == 0.0 && m1.alpha * m2.alpha == 0.0 && m1.beta * m2.beta == 0.0;
    const Claim gain = decoupled ? Claim::Equality : Claim::Strict;
    std::vector<CheckReport> out;

    auto common = [&](CheckReport& r) {
        r.metadata["E_1"] = num(c.e1);
        r.metadata["E_2"] = num(c.e2);
        r.metadata["E_sum"] = num(c.e12);
        r.metadata["J_w"] = num(c.jw);
        r.metadata["iterations"] = std::to_string(c.iterations + f.iterations);
        if (!(c.converged && f.converged))
            mark_inconclusive(r, "minimization did not converge: " + c.diagnosis + f.diagnosis);
    };

    auto lower = make(tag + ".chain_lower", Claim::NonStrict, c.e12, c.jw, c.jw - c.e12,
                      1e-6 * scale + 10 * flow.energy_tol, h);
    lower.refinement_margin = f.jw - f.e12;
    settle(lower);
    common(lower);
    out.push_back(std::move(lower));

    auto upper = make(tag + ".chain_strict", gain, c.jw, c.e1 + c.e2, c.e1 + c.e2 - c.jw, equal_tol, h);
    upper.refinement_margin = f.e1 + f.e2 - f.jw;
    if (gain == Claim::Strict) strict_tolerance(upper, scale);
    settle(upper);
    common(upper);
    out.push_back(std::move(upper));

    auto strict = make(tag + ".strict", gain, c.e12, c.e1 + c.e2, c.e1 + c.e2 - c.e12, equal_tol, h);
    strict.refinement_margin = f.e1 + f.e2 - f.e12;
    if (gain == Claim::Strict) strict_tolerance(strict, scale);
    settle(strict);
    common(strict);
    out.push_back(std::move(strict));

    const std::pair<std::string, std::pair<double, double>> levels[] = {
        {"E_1", {c.e1, f.e1}}, {"E_2", {c.e2, f.e2}}, {"E_sum", {c.e12, f.e12}}};
    for (const auto& [name, e] : levels) {
        auto r = make(tag + ".negative." + name, Claim::Strict, e.first, 0.0, -e.first, 0.0, h);
        r.refinement_margin = -e.second;
        strict_tolerance(r, e.first);
        settle(r);
        common(r);
        out.push_back(std::move(r));
    }
    return out;
}

CheckReport check_coercivity(const CoupledGSpec& spec, double R, int count, std::uint64_t seed,
                             double h) {
    spec.validate();
    const double C = coercivity_bound(spec, R);
    Rng rng = Rng::for_stream(seed, "coercivity");
    double worst = -std::numeric_limits<double>::infinity();
    double worst_ma = 0, worst_mb = 0;
    for (int k = 0; k < count; ++k) {
        double ma = R * rng.uniform();
        double mb = R * rng.uniform();
        if (k % 5 == 1) mb = 0.0;
        // narrow bumps probe the concentrated end of the bound
        const double squeeze = std::pow(10.0, -1.5 * rng.uniform());
        double value = 0.0;
        double kin = 0.0;
        if (spec.dim == 2) {
            auto a = random_bumps(rng, 2.0 * squeeze, true);
            auto b = random_bumps(rng, 2.0 * squeeze, true);
            Grid2D g = Grid2D::centered(40, 40, 0.1, 0.1);
            Field2D u = Field2D::sample(g, [&](double x, double y) { return a(x, y); });
            Field2D v = Field2D::sample(g, [&](double x, double y) { return b(x, y); });
            const double nu = lp_norm(u, 2.0), nv = lp_norm(v, 2.0);
            for (double& x : u.values) x *= std::sqrt(ma / nu);
            for (double& x : v.values) x *= std::sqrt(mb / nv);
            value = system_energy(u, v, spec).total;
            kin = dirichlet_integral(u) + dirichlet_integral(v);
        } else {
            auto a = random_bumps(rng, 5.0 * squeeze);
            auto b = random_bumps(rng, 5.0 * squeeze);
            Field1D u = sample_box(a, 10.0, h);
            Field1D v = sample_box(b, 10.0, h);
            u = scaled_to_mass(u, ma);
            v = scaled_to_mass(v, mb);
            if (mb == 0.0) std::fill(v.values.begin(), v.values.end(), 0.0);
            value = system_energy(u, v, spec).total;
            kin = dirichlet_integral(u) + dirichlet_integral(v);
        }
        const double excess = 0.25 * kin - value;
        if (excess > worst) {
            worst = excess;
            worst_ma = ma;
            worst_mb = mb;
        }
    }
    auto r = make("lemma9.coercivity", Claim::NonStrict, worst, C, C - worst, 0.0, h);
    r.metadata["R"] = num(R);
    r.metadata["samples"] = std::to_string(count);
    r.metadata["worst_masses"] = num(worst_ma) + "," + num(worst_mb);
    settle(r);
    return r;
}

// ---------------------------------------------------------------------------

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names = {"prop1",  "lemma1",  "lemma3",
                                                   "lemma2", "thm1",    "duff",
                                                   "lemma10", "subadd", "system-subadd"};
    return names;
}

namespace {

double slack(const CheckReport& r) {
    const double s = std::max(std::fabs(r.rhs), 1e-300);
    double m = r.margin;
    if (r.refinement_margin) m = std::min(m, *r.refinement_margin);
    switch (r.claim) {
        case Claim::Exact:
        case Claim::Equality: return (r.tolerance - std::fabs(r.margin)) / s;
        case Claim::NonStrict: return (m + r.tolerance) / s;
        case Claim::Strict: return (m - r.tolerance) / s;
    }
    return 0.0;
}

// One report per check_id: the worst case, with counts in metadata.
std::vector<CheckReport> aggregate(std::vector<CheckReport> all) {
    std::map<std::string, std::vector<CheckReport>> by_id;
    for (auto& r : all) by_id[r.check_id].push_back(std::move(r));
    std::vector<CheckReport> out;
    for (auto& [id, rs] : by_id) {
        std::size_t fails = 0, inconclusive = 0, skipped = 0;
        const CheckReport* worst = nullptr;
        auto rank = [](const CheckReport& r) {
            if (r.status == "fail") return 0;
            if (r.status == "inconclusive") return 1;
            if (r.status == "pass") return 2;
            return 3;
        };
        for (const auto& r : rs) {
            if (r.status == "fail") ++fails;
            if (r.status == "inconclusive") ++inconclusive;
            if (r.status == "skipped") ++skipped;
            if (!worst || rank(r) < rank(*worst) ||
                (rank(r) == rank(*worst) && slack(r) < slack(*worst)))
                worst = &r;
        }
        CheckReport w = *worst;
        if (rs.size() > 1) {
            w.metadata["cases"] = std::to_string(rs.size());
            w.metadata["failed"] = std::to_string(fails);
            if (inconclusive) w.metadata["inconclusive"] = std::to_string(inconclusive);
            if (skipped) w.metadata["skipped"] = std::to_string(skipped);
        }
        out.push_back(std::move(w));
    }
    return out;
}

using Job = std::function<std::vector<CheckReport>(Rng&)>;

// "duff.p2" tagged "asymmetric." -> "duff.asymmetric.p2"
void prefix(std::vector<CheckReport>& rs, const std::string& tag) {
    if (tag.empty()) return;
    for (auto& r : rs) {
        const auto dot = r.check_id.find('.');
        r.check_id = dot == std::string::npos ? r.check_id + "." + tag
                                              : r.check_id.substr(0, dot + 1) + tag + r.check_id.substr(dot + 1);
    }
}

void append(std::vector<CheckReport>& to, std::vector<CheckReport> from, const std::string& p = "") {
    prefix(from, p);
    for (auto& r : from) to.push_back(std::move(r));
}

// Field supported on the middle n cells of an n + 2*pad cell box.
Field1D padded_rough(Rng& rng, std::size_t n, std::size_t pad, double h, int quantize) {
    return pad_centered(random_rough_field(rng, n, h, quantize), n + 2 * pad);
}

Source1D bump_source(const BumpProfile& b, double half_width) {
    return [b, half_width](double h) { return sample_box(b, half_width, h); };
}

Source1D fn_source(std::function<double(double)> fn, double half_width) {
    return [fn, half_width](double h) { return sample_box(fn, half_width, h); };
}

std::vector<std::pair<std::string, Job>> build_jobs(const SuiteConfig& cfg) {
    const CheckConfig cc{cfg.h, 1.0};
    const auto& P = cfg.p_list;
    const int count = cfg.field_count;
    std::vector<std::pair<std::string, Job>> jobs;

    jobs.emplace_back("prop1", [=](Rng& rng) {
        std::vector<CheckReport> out;
        for (int k = 0; k < count; ++k) {
            const auto b = random_bumps(rng, 3.0, true);
            auto fn = [b](double x, double y) { return b(x, 0.5 * y); };
            const Field2D u = sample_box(fn, 4.0, 2.0, cc.h);
            const Field2D f = sample_box(fn, 4.0, 2.0, cc.h / 2);
            append(out, check_prop1(u, P, cc, &f), "bump.");
            const Field2D r = random_rough_field(rng, 32, 8, cc.h, k % 2 ? 8 : 0);
            append(out, check_prop1(r, P, cc), "rough.");
        }
        return out;
    });

    jobs.emplace_back("lemma1", [=](Rng& rng) {
        std::vector<CheckReport> out;
        for (int k = 0; k < count; ++k) {
            const std::size_t n = 5 + rng.below(36);
            const Field1D u = padded_rough(rng, n, 8, cc.h, k % 2 ? 6 : 0);
            const Field1D v = padded_rough(rng, n, 8, cc.h, k % 2 ? 6 : 0);
            const long s1 = static_cast<long>(rng.below(17)) - 8;
            const long s2 = static_cast<long>(rng.below(17)) - 8;
            const double s = rng.uniform() * std::max(max_value(u.values), max_value(v.values));
            append(out, check_lemma1(u, v, s, {s1, s2}, cc));
            // disjoint pair: u on the left half, v on the right half
            Field1D a(Grid1D::centered(2 * n + 4, cc.h)), c(a.grid);
            for (std::size_t i = 0; i < n; ++i) {
                a[1 + i] = 0.1 + rng.uniform();
                c[n + 3 + i] = 0.1 + rng.uniform();
            }
            append(out, check_lemma1(a, c, 0.0, {0, 0}, cc), "disjoint.");
        }
        return out;
    });

    jobs.emplace_back("lemma3", [=](Rng& rng) {
        std::vector<CheckReport> out;
        std::vector<double> ps = P;
        for (double p : {1.0, 2.0, 2.5, 3.0, 4.0})
            if (std::find(ps.begin(), ps.end(), p) == ps.end()) ps.push_back(p);
        std::sort(ps.begin(), ps.end());
        for (int k = 0; k < count; ++k) {
            const bool rough = k % 2 == 0;
            const Field1D u = rough ? random_rough_field(rng, 10 + rng.below(60), cc.h, k % 4 ? 0 : 5)
                                    : sample_box(random_bumps(rng, 4.0), 5.0, cc.h);
            const Field1D v = rough ? random_rough_field(rng, 10 + rng.below(60), cc.h, k % 4 ? 0 : 5)
                                    : sample_box(random_bumps(rng, 4.0), 5.0, cc.h);
            const double top = std::max(max_value(u.values), max_value(v.values));
            std::vector<double> levels(64);
            for (double& t : levels) t = top * rng.uniform();
            append(out, check_lemma3(u, v, ps, levels, cc));
        }
        return out;
    });

    jobs.emplace_back("lemma2", [=](Rng& rng) {
        std::vector<CheckReport> out;
        for (int k = 0; k < count; ++k) {
            append(out, check_lemma2_thm1(bump_source(random_bumps(rng, 4.0), 5.0),
                                          bump_source(random_bumps(rng, 4.0), 5.0), P, cc),
                   "bump.");
            append(out, check_lemma2_thm1(random_rough_field(rng, 10 + rng.below(40), cc.h),
                                          random_rough_field(rng, 10 + rng.below(40), cc.h), P, cc),
                   "rough.");
        }
        for (int k = 0; k < std::max(1, count / 4); ++k) {
            const auto a = random_bumps(rng, 3.0, true);
            const auto b = random_bumps(rng, 3.0, true);
            Source2D sa = [a](double h) {
                return sample_box([&](double x, double y) { return a(x, 0.5 * y); }, 4.0, 2.0, h);
            };
            Source2D sb = [b](double h) {
                return sample_box([&](double x, double y) { return b(x, 0.5 * y); }, 4.0, 2.0, h);
            };
            append(out, check_lemma2(sa, sb, P, cc));
        }
        return out;
    });

    jobs.emplace_back("thm1", [=](Rng& rng) {
        std::vector<CheckReport> out;
        const auto gauss = fn_source([](double x) { return std::exp(-x * x); }, 6.0);
        const auto sech = fn_source([](double x) { return 1.0 / std::cosh(x); }, 20.0);
        auto gg = check_lemma2_thm1(gauss, gauss, {2.0}, cc);
        for (const auto& r : gg)
            if (r.check_id == "thm1.strict.p2") {
                auto q = relative_equality("thm1.gaussian.ratio", std::stod(r.metadata.at("ratio")),
                                           0.25, 0.08, cc.h, Claim::Equality);
                q.metadata["ratio_h2"] = r.metadata.at("ratio_h2");
                q.refinement_margin = 0.25 - std::stod(r.metadata.at("ratio_h2"));
                settle(q);
                out.push_back(std::move(q));
            }
        append(out, std::move(gg), "gaussian.");
        append(out, check_lemma2_thm1(gauss, sech, P, cc), "gaussian_sech.");
        for (int k = 0; k < count; ++k) {
            // even, decreasing: sums of centered Gaussians
            auto make_even = [&rng]() {
                BumpProfile b;
                const auto m = 1 + rng.below(3);
                for (std::uint64_t j = 0; j < m; ++j)
                    b.bumps.push_back({0.0, 0.0, rng.uniform(0.3, 1.5), rng.uniform(0.2, 2.0)});
                return b;
            };
            append(out, check_lemma2_thm1(bump_source(make_even(), 8.0), bump_source(make_even(), 8.0), P, cc),
                   "even.");
        }
        return out;
    });

    jobs.emplace_back("duff", [=](Rng& rng) {
        std::vector<CheckReport> out;
        Source1D mono = [](double h) {
            return sample_nodes([](double x) { return x * x + x; }, 2.0, h);
        };
        Source1D tent = [](double h) {
            return sample_nodes([](double x) { return std::min(x, 2.0 - x); }, 2.0, h);
        };
        append(out, check_duff(mono, P, DuffExpect::Equality, cc), "monotone.");
        append(out, check_duff(tent, P, DuffExpect::Equality, cc), "tent.");
        for (int k = 0; k < count; ++k) {
            const auto pl = random_piecewise_linear(rng, 4.0, 0.25);
            Source1D s = [pl](double h) { return sample_nodes(pl, 4.0, h); };
            append(out, check_duff(s, P, DuffExpect::Strict, cc), "asymmetric.");
        }
        return out;
    });

    jobs.emplace_back("lemma10", [=](Rng& rng) {
        std::vector<CheckReport> out;
        for (int k = 0; k < count; ++k) {
            const auto s = [&]() { return bump_source(random_bumps(rng, 3.0), 4.0); };
            auto r = check_lemma10(s(), s(), s(), s(), CoupledGSpec::cubic_pair(0.0),
                                   Lemma10Expect::Equality, cc);
            r.check_id = "lemma10.decoupled";
            out.push_back(std::move(r));
        }
        auto g = [](double c, double w) {
            return fn_source([c, w](double x) { return std::exp(-(x - c) * (x - c) / (w * w)); }, 6.0);
        };
        auto r = check_lemma10(g(0.0, 1.0), g(0.3, 0.8), g(-0.2, 1.2), g(0.1, 0.9),
                               CoupledGSpec::cubic_pair(1.0), Lemma10Expect::Strict, cc);
        r.check_id = "lemma10.coupled_overlap";
        out.push_back(std::move(r));
        // compact bumps: (u, v) on the left, (phi, psi) on the right
        auto bump = [](double c) {
            return fn_source([c](double x) {
                const double d = x - c;
                return std::fabs(d) < 1.0 ? std::pow(std::cos(1.5707963267948966 * d), 2) : 0.0;
            }, 6.0);
        };
        r = check_lemma10(bump(-3.0), bump(-2.8), bump(3.0), bump(2.7), CoupledGSpec::cubic_pair(1.0),
                          Lemma10Expect::NonStrict, cc);
        r.check_id = "lemma10.disjoint";
        out.push_back(std::move(r));
        return out;
    });

    jobs.emplace_back("subadd", [=](Rng&) {
        std::vector<CheckReport> out;
        const auto spec = NonlinearitySpec::power(3.0, 1);
        append(out, check_subadditivity(spec, 1.0, 1.0, cc.h));
        append(out, check_subadditivity(spec, 1.0, 2.0, cc.h));
        return out;
    });

    jobs.emplace_back("system-subadd", [=](Rng& rng) {
        std::vector<CheckReport> out;
        const auto coupled = CoupledGSpec::cubic_pair(0.5);
        append(out, check_system_subadditivity(coupled, {1, 0}, {0, 1}, cc.h));
        append(out, check_system_subadditivity(coupled, {1, 1}, {1, 1}, cc.h));
        append(out, check_system_subadditivity(CoupledGSpec::cubic_pair(0.0), {1, 0}, {0, 1}, cc.h));
        out.push_back(check_coercivity(coupled, 2.0, 10 * count, rng.next(), cc.h));
        return out;
    });
    return jobs;
}

}  // namespace

SuiteResult run_all(const SuiteConfig& cfg) {
    for (const auto& s : cfg.suites)
        if (s != "all" && std::find(suite_names().begin(), suite_names().end(), s) == suite_names().end())
            throw DomainError("unknown suite '" + s + "'");
    auto selected = [&](const std::string& name) {
        if (cfg.suites.empty()) return true;
        for (const auto& s : cfg.suites)
            if (s == "all" || s == name) return true;
        return false;
    };

    std::vector<std::pair<std::string, Job>> jobs;
    for (auto& j : build_jobs(cfg))
        if (selected(j.first)) jobs.push_back(std::move(j));

    std::vector<std::vector<CheckReport>> results(jobs.size());
    std::vector<std::string> errors(jobs.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (std::size_t k; (k = next.fetch_add(1)) < jobs.size();) {
            Rng rng = Rng::for_stream(cfg.seed, jobs[k].first);
            try {
                results[k] = jobs[k].second(rng);
            } catch (const std::exception& e) {
                errors[k] = e.what();
            }
        }
    };
    const int n = std::max(1, std::min<int>(cfg.jobs, static_cast<int>(jobs.size())));
    std::vector<std::thread> pool;
    for (int t = 1; t < n; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    std::vector<CheckReport> all;
    for (std::size_t k = 0; k < jobs.size(); ++k) {
        if (!errors[k].empty()) {
            CheckReport r = make(jobs[k].first + ".error", Claim::Exact, 0, 0, 0, 0, cfg.h);
            r.metadata["error"] = errors[k];
            r.status = "fail";
            r.pass = false;
            all.push_back(std::move(r));
        }
        for (auto& r : results[k]) all.push_back(std::move(r));
    }
    SuiteResult res;
    res.reports = aggregate(std::move(all));
    res.all_pass = std::all_of(res.reports.begin(), res.reports.end(),
                               [](const CheckReport& r) { return r.pass || r.status == "skipped"; });
    return res;
}

std::string reports_to_json(const std::vector<CheckReport>& reports, int indent) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& r : reports) {
        nlohmann::ordered_json j;
        j["check_id"] = r.check_id;
        j["claim"] = claim_name(r.claim);
        j["lhs"] = r.lhs;
        j["rhs"] = r.rhs;
        j["margin"] = r.margin;
        j["tolerance"] = r.tolerance;
        j["pass"] = r.pass;
        j["status"] = r.status;
        j["grid_h"] = r.grid_h;
        j["refinement_margin"] = r.refinement_margin ? nlohmann::ordered_json(*r.refinement_margin)
                                                     : nlohmann::ordered_json(nullptr);
        nlohmann::ordered_json meta = nlohmann::ordered_json::object();
        for (const auto& [k, v] : r.metadata) meta[k] = v;
        j["metadata"] = std::move(meta);
        arr.push_back(std::move(j));
    }
    return arr.dump(indent);
}

}  // namespace rkit

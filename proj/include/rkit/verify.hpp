#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rkit/energy.hpp"
#include "rkit/grid.hpp"
#include "rkit/minimize.hpp"

namespace rkit {

// How a report decides pass/fail.
//   Exact / Equality: |margin| <= tolerance
//   NonStrict:        margin >= -tolerance
//   Strict:           margin > tolerance at h and at h/2, where the tolerance
//                     is max(4 |margin(h) - margin(h/2)|, 1e-9 |scale|)
enum class Claim { Exact, Equality, NonStrict, Strict };

struct CheckReport {
    std::string check_id;
    double lhs = 0.0;
    double rhs = 0.0;
    double margin = 0.0;  // rhs - lhs for <= claims, lhs - rhs for >= claims
    double tolerance = 0.0;
    bool pass = false;
    std::string status = "fail";  // pass | fail | inconclusive | skipped
    double grid_h = 0.0;
    std::optional<double> refinement_margin;
    std::map<std::string, std::string> metadata;
    Claim claim = Claim::NonStrict;
};

const char* claim_name(Claim c);

// Sets pass/status from margin, tolerance, refinement_margin and claim.
void settle(CheckReport& r);

// Sampling of a continuous input at spacing h; lets a check rerun at h/2.
using Source1D = std::function<Field1D(double h)>;
using Source2D = std::function<Field2D(double h)>;

struct CheckConfig {
    double h = 0.05;
    // gradient tolerance tol(h) = grad_c * h * rhs
    double grad_c = 1.0;
};

// Steiner rearrangement facts on a nonnegative 2D field.  `fine` (the same
// input at h/2) adds refinement evidence to the gradient reports.
std::vector<CheckReport> check_prop1(const Field2D& u, const std::vector<double>& p_list,
                                     const CheckConfig& cfg, const Field2D* fine = nullptr);

// Translation invariance, disjoint-support identity, truncation identity.
std::vector<CheckReport> check_lemma1(const Field1D& u, const Field1D& v, double s,
                                      std::pair<long, long> shifts, const CheckConfig& cfg);

// Distribution additivity at `levels` and L^p additivity for each p.
std::vector<CheckReport> check_lemma3(const Field1D& u, const Field1D& v,
                                      const std::vector<double>& p_list,
                                      const std::vector<double>& levels, const CheckConfig& cfg);

// Gradient contraction of the coupled rearrangement; for positive, even inputs
// non-increasing in |x| also the strict inequality on the level-set profile.
std::vector<CheckReport> check_lemma2_thm1(const Source1D& u, const Source1D& v,
                                           const std::vector<double>& p_list,
                                           const CheckConfig& cfg);
std::vector<CheckReport> check_lemma2_thm1(const Field1D& u, const Field1D& v,
                                           const std::vector<double>& p_list,
                                           const CheckConfig& cfg);
// Per-axis contraction for 2D pairs (merge rearrangement along x1).
std::vector<CheckReport> check_lemma2(const Source2D& u, const Source2D& v,
                                      const std::vector<double>& p_list, const CheckConfig& cfg);

enum class DuffExpect { Equality, Strict };

// f sampled at nodes 0, h, ..., b.  With Strict, p = 1 is still checked as an
// equality: both sides equal sup f for every profile.
std::vector<CheckReport> check_duff(const Source1D& f, const std::vector<double>& p_list,
                                    DuffExpect expect, const CheckConfig& cfg);

enum class Lemma10Expect { Equality, NonStrict, Strict };

// ∫G((u*phi)^2, (v*psi)^2) >= ∫G(u^2, v^2) + ∫G(phi^2, psi^2).
// Throws DomainError if g1, g2 are not nonnegative and nondecreasing.
CheckReport check_lemma10(const Source1D& u, const Source1D& v, const Source1D& phi,
                          const Source1D& psi, const CoupledGSpec& spec, Lemma10Expect expect,
                          const CheckConfig& cfg);

// E_{a+b} <= I[w] < E_a + E_b with w the level-set coupled profile of the two
// minimizers; runs at h and h/2.
std::vector<CheckReport> check_subadditivity(const NonlinearitySpec& spec, double alpha,
                                             double beta, double h, const FlowConfig& flow = {});

std::vector<CheckReport> check_system_subadditivity(const CoupledGSpec& spec,
                                                    ConstraintSpec m1, ConstraintSpec m2,
                                                    double h, const FlowConfig& flow = {});

// (|∇u|^2 + |∇v|^2)/4 <= J[u,v] + C on `count` random pairs of masses <= R.
CheckReport check_coercivity(const CoupledGSpec& spec, double R, int count, std::uint64_t seed,
                             double h);

struct SuiteConfig {
    std::uint64_t seed = 7;
    int field_count = 20;
    std::vector<double> p_list = {1.0, 2.0, 3.0};
    double h = 0.05;
    int jobs = 1;
    // empty = all; otherwise names from suite_names()
    std::vector<std::string> suites;
    std::string strict_delta_rule =
        "strict claims pass when the margin at h and at h/2 both exceed "
        "max(4*|margin(h) - margin(h/2)|, 1e-9*|scale|)";
};

const std::vector<std::string>& suite_names();

struct SuiteResult {
    std::vector<CheckReport> reports;  // sorted by check_id
    bool all_pass = false;             // no fail and no inconclusive
};

// Throws DomainError on an unknown suite name.
SuiteResult run_all(const SuiteConfig& cfg);

// JSON array of reports; byte-stable for equal inputs.
std::string reports_to_json(const std::vector<CheckReport>& reports, int indent = 2);

}  // namespace rkit

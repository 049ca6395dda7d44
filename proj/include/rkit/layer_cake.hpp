#pragma once

// Level-set calculus for piecewise-linear interpolants of sampled profiles.
//
// The cell-counting rearrangements in rearrange.hpp are exact on value
// multisets, but their forward differences do not converge to the continuum
// derivative when several input levels collapse onto one plateau (u * u is a
// two-cell staircase).  The routines here rearrange the piecewise-linear
// interpolant instead: mu(t) is piecewise linear in t with knots at the sample
// values, so it is evaluated exactly and inverted per output cell.

#include <cstddef>
#include <span>
#include <vector>

#include "rkit/grid.hpp"

namespace rkit {

// One linear piece of an interpolant: values a -> b over a length h.
struct Segment {
    double a = 0.0;
    double b = 0.0;
    double length = 0.0;

    double lo() const { return a < b ? a : b; }
    double hi() const { return a < b ? b : a; }
};

// Segments of the interpolant through the samples.  With zero_extend a zero
// node is added one cell beyond each end.
std::vector<Segment> interpolant_segments(const Field1D& u, bool zero_extend);

// mu(t) = |{interpolant > t}| for a union of segments, tabulated at the knots.
class LevelSetMeasure {
public:
    explicit LevelSetMeasure(std::span<const Segment> segments);

    double measure(double t) const;
    // inf { t >= 0 : mu(t) <= m }
    double inverse(double m) const;
    // measure of the support, mu(0)
    double total() const { return right_.empty() ? 0.0 : right_.front(); }
    double max_level() const { return knots_.empty() ? 0.0 : knots_.back(); }

    const std::vector<double>& knots() const { return knots_; }

private:
    std::vector<double> knots_;  // ascending, starts at 0
    std::vector<double> left_;   // mu(t_k^-)
    std::vector<double> right_;  // mu(t_k)
};

// Symmetric-decreasing profile whose level sets have measure mu_u + mu_v,
// sampled on a centered grid of n_u + n_v + 2 cells at the common spacing.
Field1D coupled_profile(const Field1D& u, const Field1D& v);
Field1D symmetric_profile(const Field1D& u);
// Line-by-line along x1; transverse grid kept.
Field2D coupled_profile(const Field2D& u, const Field2D& v);

// f^#(x) = inf{t : mu(t) <= x} on cells of [0, (n-1)h], the span of the
// interpolant (no zero extension).
Field1D decreasing_profile(const Field1D& f);

// Both sides of Duff's inequality for the interpolant of f on its sample span,
// evaluated exactly level interval by level interval:
//   lhs = ∫|(f^#)'|^p,  rhs = ∫|f' / N_f(f)|^p.
struct DuffIntegrals {
    double lhs = 0.0;
    double rhs = 0.0;
    std::size_t max_multiplicity = 0;
};
DuffIntegrals duff_integrals(const Field1D& f, double p);

}  // namespace rkit

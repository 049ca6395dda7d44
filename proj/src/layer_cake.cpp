#include "rkit/layer_cake.hpp"

#include <algorithm>
#include <cmath>

namespace rkit {

namespace {

std::vector<double> sorted_knots(std::span<const Segment> segments) {
    std::vector<double> knots{0.0};
    knots.reserve(2 * segments.size() + 1);
    for (const auto& s : segments) {
        knots.push_back(s.a);
        knots.push_back(s.b);
    }
    std::sort(knots.begin(), knots.end());
    knots.erase(std::unique(knots.begin(), knots.end()), knots.end());
    return knots;
}

std::size_t knot_index(const std::vector<double>& knots, double t) {
    return static_cast<std::size_t>(std::lower_bound(knots.begin(), knots.end(), t) - knots.begin());
}

}  // namespace

std::vector<Segment> interpolant_segments(const Field1D& u, bool zero_extend) {
    require_nonnegative(u.values, "interpolant_segments");
    const double h = u.grid.h;
    std::vector<Segment> segs;
    const auto& v = u.values;
    if (zero_extend) {
        segs.push_back({0.0, v.front(), h});
    }
    for (std::size_t i = 1; i < v.size(); ++i) segs.push_back({v[i - 1], v[i], h});
    if (zero_extend) segs.push_back({v.back(), 0.0, h});
    return segs;
}

LevelSetMeasure::LevelSetMeasure(std::span<const Segment> segments) : knots_(sorted_knots(segments)) {
    const std::size_t K = knots_.size();
    std::vector<double> full_at(K + 1, 0.0);  // length added for every knot index < j
    std::vector<double> straddle(K, 0.0);
    std::vector<double> flat_jump(K, 0.0);
    for (const auto& s : segments) {
        const double lo = s.lo();
        const double hi = s.hi();
        const std::size_t ilo = knot_index(knots_, lo);
        full_at[ilo] += s.length;
        if (hi == lo) {
            flat_jump[ilo] += s.length;
            continue;
        }
        const std::size_t ihi = knot_index(knots_, hi);
        for (std::size_t k = ilo; k < ihi; ++k)
            straddle[k] += s.length * (hi - knots_[k]) / (hi - lo);
    }
    right_.assign(K, 0.0);
    left_.assign(K, 0.0);
    double above = 0.0;
    for (std::size_t k = K; k-- > 0;) {
        above += full_at[k + 1];
        right_[k] = above + straddle[k];
        left_[k] = right_[k] + flat_jump[k];
    }
    // Clamp rounding so the tabulated function is monotone.
    for (std::size_t k = 1; k < K; ++k) {
        left_[k] = std::min(left_[k], right_[k - 1]);
        right_[k] = std::min(right_[k], left_[k]);
    }
}

double LevelSetMeasure::measure(double t) const {
    if (knots_.empty()) return 0.0;
    if (t < 0.0) return left_.front();
    if (t >= knots_.back()) return 0.0;
    const auto it = std::upper_bound(knots_.begin(), knots_.end(), t);
    const std::size_t k1 = static_cast<std::size_t>(it - knots_.begin());
    const std::size_t k0 = k1 - 1;
    if (t == knots_[k0]) return right_[k0];
    const double w = (t - knots_[k0]) / (knots_[k1] - knots_[k0]);
    return right_[k0] + w * (left_[k1] - right_[k0]);
}

double LevelSetMeasure::inverse(double m) const {
    if (knots_.empty() || m >= right_.front()) return 0.0;
    const auto it = std::partition_point(right_.begin() + 1, right_.end(),
                                         [m](double r) { return r > m; });
    const std::size_t k = static_cast<std::size_t>(it - right_.begin());
    if (k >= knots_.size()) return knots_.back();
    if (left_[k] > m) return knots_[k];
    const double r0 = right_[k - 1];
    const double l1 = left_[k];
    const double w = r0 > l1 ? (r0 - m) / (r0 - l1) : 1.0;
    return knots_[k - 1] + w * (knots_[k] - knots_[k - 1]);
}

Field1D coupled_profile(const Field1D& u, const Field1D& v) {
    if (std::fabs(u.grid.h - v.grid.h) > 1e-12 * u.grid.h)
        throw GridError("coupled profile needs a common spacing");
    auto segs = interpolant_segments(u, true);
    const auto sv = interpolant_segments(v, true);
    segs.insert(segs.end(), sv.begin(), sv.end());
    const LevelSetMeasure mu(segs);
    Field1D out(Grid1D::centered(u.grid.n + v.grid.n + 2, u.grid.h));
    for (std::size_t i = 0; i < out.size(); ++i)
        out.values[i] = mu.inverse(2.0 * std::fabs(out.grid.center(i)));
    return out;
}

Field1D symmetric_profile(const Field1D& u) {
    const LevelSetMeasure mu(interpolant_segments(u, true));
    Field1D out(Grid1D::centered(u.grid.n + 2, u.grid.h));
    for (std::size_t i = 0; i < out.size(); ++i)
        out.values[i] = mu.inverse(2.0 * std::fabs(out.grid.center(i)));
    return out;
}

Field2D coupled_profile(const Field2D& u, const Field2D& v) {
    const auto& a = u.grid;
    const auto& b = v.grid;
    if (std::fabs(a.hx - b.hx) > 1e-12 * a.hx || std::fabs(a.hy - b.hy) > 1e-12 * a.hy ||
        a.ny != b.ny)
        throw GridError("coupled profile needs matching hx, hy and transverse lines");
    const std::size_t nx = a.nx + b.nx + 2;
    Field2D out(Grid2D(-0.5 * static_cast<double>(nx - 1) * a.hx, a.y0, a.hx, a.hy, nx, a.ny));
    for (std::size_t j = 0; j < a.ny; ++j) {
        const auto line = coupled_profile(u.line_field(j), v.line_field(j));
        out.set_line(j, line.values);
    }
    return out;
}

Field1D decreasing_profile(const Field1D& f) {
    if (f.grid.n < 2) throw GridError("decreasing profile needs at least 2 samples");
    const LevelSetMeasure mu(interpolant_segments(f, false));
    Field1D out(Grid1D(0.5 * f.grid.h, f.grid.h, f.grid.n - 1));
    for (std::size_t i = 0; i < out.size(); ++i) out.values[i] = mu.inverse(out.grid.center(i));
    return out;
}

DuffIntegrals duff_integrals(const Field1D& f, double p) {
    if (!(p >= 1.0)) throw DomainError("exponent p must satisfy p >= 1");
    if (f.grid.n < 2) throw GridError("Duff integrals need at least 2 samples");
    const auto segs = interpolant_segments(f, false);
    const auto knots = sorted_knots(segs);
    const std::size_t K = knots.size();
    std::vector<std::size_t> count(K, 0);
    std::vector<double> inv_slope(K, 0.0);
    std::vector<double> slope_pow(K, 0.0);
    for (const auto& s : segs) {
        const double lo = s.lo();
        const double hi = s.hi();
        if (hi == lo) continue;
        const double slope = (hi - lo) / s.length;
        const double sp = std::pow(slope, p - 1.0);
        const std::size_t ilo = knot_index(knots, lo);
        const std::size_t ihi = knot_index(knots, hi);
        for (std::size_t k = ilo; k < ihi; ++k) {
            ++count[k];
            inv_slope[k] += 1.0 / slope;
            slope_pow[k] += sp;
        }
    }
    DuffIntegrals out;
    for (std::size_t k = 0; k + 1 < K; ++k) {
        if (count[k] == 0) continue;
        const double dt = knots[k + 1] - knots[k];
        out.lhs += dt * std::pow(inv_slope[k], 1.0 - p);
        out.rhs += dt * slope_pow[k] / std::pow(static_cast<double>(count[k]), p);
        out.max_multiplicity = std::max(out.max_multiplicity, count[k]);
    }
    return out;
}

}  // namespace rkit

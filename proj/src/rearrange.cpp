#include "rkit/rearrange.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <tuple>

namespace rkit {

namespace {

bool same_spacing(double a, double b) { return std::fabs(a - b) <= 1e-12 * std::max(a, b); }

std::vector<double> sorted_desc(std::vector<double> v) {
    for (double& x : v)
        if (x == 0.0) x = 0.0;  // drop the sign of -0.0
    std::sort(v.begin(), v.end(), std::greater<>());
    return v;
}

void place(std::span<const double> sorted, std::span<double> out, PlacementRule rule) {
    const auto order = placement_order(out.size(), rule);
    for (std::size_t k = 0; k < out.size(); ++k) out[order[k]] = sorted[k];
}

}  // namespace

std::vector<std::size_t> placement_order(std::size_t n, PlacementRule /*rule*/) {
    std::vector<std::size_t> order;
    order.reserve(n);
    if (n == 0) return order;
    const std::size_t m = n / 2;
    order.push_back(m);
    if (n % 2 == 1) {
        for (std::size_t k = 1; order.size() < n; ++k) {
            order.push_back(m + k);
            order.push_back(m - k);
        }
    } else {
        // m sits at +h/2, m-1 at -h/2.
        for (std::size_t k = 1; order.size() < n; ++k) {
            order.push_back(m - k);
            if (order.size() < n) order.push_back(m + k);
        }
    }
    return order;
}

std::vector<double> sorted_multiset(std::span<const double> values) {
    return sorted_desc(std::vector<double>(values.begin(), values.end()));
}

Field1D decreasing_rearrangement(const Field1D& f) {
    require_nonnegative(f.values, "decreasing_rearrangement");
    return Field1D(Grid1D(0.5 * f.grid.h, f.grid.h, f.grid.n), sorted_desc(f.values));
}

Field1D symmetric_rearrangement_1d(const Field1D& f, PlacementRule rule) {
    require_nonnegative(f.values, "symmetric_rearrangement_1d");
    Field1D out(Grid1D::centered(f.grid.n, f.grid.h));
    place(sorted_desc(f.values), out.values, rule);
    return out;
}

Field2D steiner_rearrangement(const Field2D& u, PlacementRule rule) {
    require_nonnegative(u.values, "steiner_rearrangement");
    const auto& g = u.grid;
    Grid2D og(-0.5 * static_cast<double>(g.nx - 1) * g.hx, g.y0, g.hx, g.hy, g.nx, g.ny);
    Field2D out(og);
    for (std::size_t j = 0; j < g.ny; ++j) {
        auto l = u.line(j);
        place(sorted_desc(std::vector<double>(l.begin(), l.end())), out.line(j), rule);
    }
    return out;
}

Field1D schwarz_rearrangement(const Field1D& u, PlacementRule rule) {
    return symmetric_rearrangement_1d(u, rule);
}

Field2D schwarz_rearrangement(const Field2D& u, PlacementRule /*rule*/) {
    require_nonnegative(u.values, "schwarz_rearrangement");
    const auto& g = u.grid;
    if (g.hx != g.hy) throw UnsupportedGridError("Schwarz rearrangement needs hx == hy");
    // Doubled integer offsets from the grid center keep distance ties exact.
    struct Cell {
        long long r2;
        long long ax;
        double angle;
        std::size_t index;
    };
    std::vector<Cell> cells;
    cells.reserve(g.size());
    const long long cxn = static_cast<long long>(g.nx) - 1;
    const long long cyn = static_cast<long long>(g.ny) - 1;
    for (std::size_t j = 0; j < g.ny; ++j) {
        for (std::size_t i = 0; i < g.nx; ++i) {
            const long long a = 2 * static_cast<long long>(i) - cxn;
            const long long b = 2 * static_cast<long long>(j) - cyn;
            double ang = std::atan2(static_cast<double>(b), static_cast<double>(a));
            if (ang < 0.0) ang += 2.0 * M_PI;
            cells.push_back({a * a + b * b, a < 0 ? -a : a, ang, j * g.nx + i});
        }
    }
    std::sort(cells.begin(), cells.end(), [](const Cell& l, const Cell& r) {
        return std::tie(l.r2, l.ax, l.angle, l.index) < std::tie(r.r2, r.ax, r.angle, r.index);
    });
    const auto sorted = sorted_desc(u.values);
    Field2D out(Grid2D::centered(g.nx, g.ny, g.hx, g.hy));
    for (std::size_t k = 0; k < cells.size(); ++k) out.values[cells[k].index] = sorted[k];
    return out;
}

Field1D coupled_rearrangement(const Field1D& u, const Field1D& v, PlacementRule rule) {
    if (!same_spacing(u.grid.h, v.grid.h))
        throw GridError("coupled rearrangement needs a common spacing");
    require_nonnegative(u.values, "coupled_rearrangement(u)");
    require_nonnegative(v.values, "coupled_rearrangement(v)");
    std::vector<double> merged(u.values);
    merged.insert(merged.end(), v.values.begin(), v.values.end());
    Field1D out(Grid1D::centered(merged.size(), u.grid.h));
    place(sorted_desc(std::move(merged)), out.values, rule);
    return out;
}

Field2D coupled_rearrangement(const Field2D& u, const Field2D& v, PlacementRule rule) {
    const auto& a = u.grid;
    const auto& b = v.grid;
    if (!same_spacing(a.hx, b.hx) || !same_spacing(a.hy, b.hy) || a.ny != b.ny ||
        std::fabs(a.y0 - b.y0) > 1e-9 * a.hy)
        throw GridError("coupled rearrangement needs matching hx, hy and transverse lines");
    require_nonnegative(u.values, "coupled_rearrangement(u)");
    require_nonnegative(v.values, "coupled_rearrangement(v)");
    const std::size_t nx = a.nx + b.nx;
    Field2D out(Grid2D(-0.5 * static_cast<double>(nx - 1) * a.hx, a.y0, a.hx, a.hy, nx, a.ny));
    std::vector<double> merged;
    for (std::size_t j = 0; j < a.ny; ++j) {
        auto lu = u.line(j);
        auto lv = v.line(j);
        merged.assign(lu.begin(), lu.end());
        merged.insert(merged.end(), lv.begin(), lv.end());
        place(sorted_desc(merged), out.line(j), rule);
    }
    return out;
}

std::size_t multiplicity(const Field1D& f, const MultiplicityQuery& q) {
    if (!(q.level > 0.0) || !std::isfinite(q.level))
        throw DomainError("multiplicity level must be positive");
    std::vector<double> s;
    s.reserve(f.values.size() + 2);
    if (q.zero_extend) s.push_back(0.0);
    for (double x : f.values) {
        if (std::fabs(x) == q.level)
            throw AmbiguousLevelError("multiplicity level coincides with a sample; perturb it");
        s.push_back(std::fabs(x));
    }
    if (q.zero_extend) s.push_back(0.0);
    std::size_t count = 0;
    for (std::size_t i = 1; i < s.size(); ++i)
        if ((s[i - 1] > q.level) != (s[i] > q.level)) ++count;
    return count;
}

Field1D truncate_shift(const Field1D& f, double s) {
    if (!(s >= 0.0)) throw DomainError("truncation level must be >= 0");
    Field1D out(f.grid);
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double d = f.values[i] - s;
        out.values[i] = d > 0.0 ? d : 0.0;
    }
    return out;
}

Field2D truncate_shift(const Field2D& f, double s) {
    if (!(s >= 0.0)) throw DomainError("truncation level must be >= 0");
    Field2D out(f.grid);
    for (std::size_t i = 0; i < f.values.size(); ++i) {
        const double d = f.values[i] - s;
        out.values[i] = d > 0.0 ? d : 0.0;
    }
    return out;
}

}  // namespace rkit

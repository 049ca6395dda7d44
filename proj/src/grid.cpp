#include "rkit/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace rkit {

namespace {

void check_spacing(double h, const char* name) {
    if (!(h > 0.0) || !std::isfinite(h))
        throw GridError(std::string("grid spacing ") + name + " must be positive and finite");
}

void check_p(double p) {
    if (!(p >= 1.0) || !std::isfinite(p)) throw DomainError("exponent p must satisfy p >= 1");
}

// Terms are summed in sorted order so the result depends only on the value
// multiset, not on where the values sit in the grid.
double canonical_sum(std::vector<double>& terms) {
    std::sort(terms.begin(), terms.end());
    double acc = 0.0;
    for (double t : terms) acc += t;
    return acc;
}

double pow_abs(double x, double p) {
    const double a = std::fabs(x);
    if (p == 1.0) return a;
    if (p == 2.0) return a * a;
    return std::pow(a, p);
}

// Forward differences over a strided line of length n with zero on both sides.
double line_seminorm(const double* v, std::size_t n, std::size_t stride, double h, double p) {
    double acc = 0.0;
    double prev = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double cur = v[i * stride];
        acc += pow_abs((cur - prev) / h, p);
        prev = cur;
    }
    acc += pow_abs(prev / h, p);
    return h * acc;
}

}  // namespace

Grid1D::Grid1D(double x0_, double h_, std::size_t n_) : x0(x0_), h(h_), n(n_) {
    check_spacing(h, "h");
    if (n == 0) throw GridError("grid needs at least one cell");
    if (!std::isfinite(x0)) throw GridError("grid origin must be finite");
}

Grid1D Grid1D::centered(std::size_t n, double h) {
    return Grid1D(-0.5 * static_cast<double>(n - 1) * h, h, n);
}

Grid1D Grid1D::symmetric_box(double L, double h) {
    check_spacing(h, "h");
    if (!(L > 0.0)) throw GridError("box length must be positive");
    const auto n = static_cast<std::size_t>(std::llround(L / h));
    return centered(n < 1 ? 1 : n, h);
}

Grid2D::Grid2D(double x0_, double y0_, double hx_, double hy_, std::size_t nx_, std::size_t ny_)
    : x0(x0_), y0(y0_), hx(hx_), hy(hy_), nx(nx_), ny(ny_) {
    check_spacing(hx, "hx");
    check_spacing(hy, "hy");
    if (nx == 0 || ny == 0) throw GridError("grid needs at least one cell per axis");
}

Grid2D Grid2D::centered(std::size_t nx, std::size_t ny, double hx, double hy) {
    return Grid2D(-0.5 * static_cast<double>(nx - 1) * hx, -0.5 * static_cast<double>(ny - 1) * hy,
                  hx, hy, nx, ny);
}

Field1D::Field1D(Grid1D g, std::vector<double> v) : grid(g), values(std::move(v)) {
    if (values.size() != grid.n) throw GridError("value count does not match grid size");
    for (double x : values)
        if (!std::isfinite(x)) throw DomainError("field values must be finite");
}

Field2D::Field2D(Grid2D g, std::vector<double> v) : grid(g), values(std::move(v)) {
    if (values.size() != grid.size()) throw GridError("value count does not match grid size");
    for (double x : values)
        if (!std::isfinite(x)) throw DomainError("field values must be finite");
}

Field1D Field2D::line_field(std::size_t j) const {
    auto l = line(j);
    return Field1D(grid.line_grid(), std::vector<double>(l.begin(), l.end()));
}

void Field2D::set_line(std::size_t j, std::span<const double> v) {
    if (v.size() != grid.nx) throw GridError("line length mismatch");
    std::copy(v.begin(), v.end(), values.begin() + static_cast<std::ptrdiff_t>(j * grid.nx));
}

Field1D modulus(Field1D f) {
    for (double& x : f.values) x = std::fabs(x);
    return f;
}

Field2D modulus(Field2D f) {
    for (double& x : f.values) x = std::fabs(x);
    return f;
}

void require_nonnegative(std::span<const double> values, const char* what) {
    for (double x : values) {
        if (!std::isfinite(x)) throw DomainError(std::string(what) + ": non-finite value");
        if (x < 0.0) throw DomainError(std::string(what) + ": negative value (take moduli first)");
    }
}

namespace {
double power_sum(std::span<const double> values, double p) {
    std::vector<double> terms(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) terms[i] = pow_abs(values[i], p);
    return canonical_sum(terms);
}

double phi_sum(std::span<const double> values, const PointwiseMap& phi) {
    std::vector<double> terms(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) terms[i] = phi(values[i]);
    return canonical_sum(terms);
}
}  // namespace

double lp_norm(const Field1D& u, double p) {
    check_p(p);
    return u.grid.h * power_sum(u.values, p);
}

double lp_norm(const Field2D& u, double p) {
    check_p(p);
    return u.grid.cell_measure() * power_sum(u.values, p);
}

double gradient_seminorm(const Field1D& u, double p, int axis) {
    check_p(p);
    if (axis != 0) throw DomainError("1D field has only axis 0");
    if (u.grid.n < 2) throw GridError("degenerate grid: gradient needs at least 2 cells");
    return line_seminorm(u.values.data(), u.grid.n, 1, u.grid.h, p);
}

double gradient_seminorm(const Field2D& u, double p, int axis) {
    check_p(p);
    const auto& g = u.grid;
    double acc = 0.0;
    if (axis == 0) {
        if (g.nx < 2) throw GridError("degenerate grid: axis 0 has a single cell");
        for (std::size_t j = 0; j < g.ny; ++j)
            acc += line_seminorm(u.values.data() + j * g.nx, g.nx, 1, g.hx, p);
        return g.hy * acc;
    }
    if (axis == 1) {
        if (g.ny < 2) throw GridError("degenerate grid: axis 1 has a single cell");
        for (std::size_t i = 0; i < g.nx; ++i)
            acc += line_seminorm(u.values.data() + i, g.ny, g.nx, g.hy, p);
        return g.hx * acc;
    }
    throw DomainError("2D field axis must be 0 or 1");
}

double dirichlet_integral(const Field1D& u) { return gradient_seminorm(u, 2.0, 0); }

double dirichlet_integral(const Field2D& u) {
    return gradient_seminorm(u, 2.0, 0) + gradient_seminorm(u, 2.0, 1);
}

DistributionProfile distribution_profile(const Field1D& u, std::span<const double> levels) {
    DistributionProfile out;
    out.thresholds.assign(levels.begin(), levels.end());
    out.measures.reserve(levels.size());
    for (std::size_t k = 0; k < levels.size(); ++k) {
        if (!(levels[k] > 0.0)) throw DomainError("distribution levels must be positive");
        if (k > 0 && !(levels[k] > levels[k - 1]))
            throw DomainError("distribution levels must be strictly increasing");
    }
    for (double t : levels) {
        std::size_t count = 0;
        for (double x : u.values)
            if (std::fabs(x) > t) ++count;
        out.measures.push_back(u.grid.h * static_cast<double>(count));
    }
    return out;
}

namespace {
void check_phi(const PointwiseMap& phi) {
    const double at0 = phi(0.0);
    if (at0 != 0.0)
        throw ContractError("phi(0) must be 0 for integrals over the zero-extended domain");
}
}  // namespace

double quadrature_phi(const Field1D& u, const PointwiseMap& phi) {
    check_phi(phi);
    return u.grid.h * phi_sum(u.values, phi);
}

double quadrature_phi(const Field2D& u, const PointwiseMap& phi) {
    check_phi(phi);
    return u.grid.cell_measure() * phi_sum(u.values, phi);
}

double inner(const Field1D& a, const Field1D& b) {
    if (a.size() != b.size()) throw GridError("inner product of mismatched fields");
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a.values[i] * b.values[i];
    return a.grid.h * acc;
}

double inner(const Field2D& a, const Field2D& b) {
    if (a.values.size() != b.values.size()) throw GridError("inner product of mismatched fields");
    double acc = 0.0;
    for (std::size_t i = 0; i < a.values.size(); ++i) acc += a.values[i] * b.values[i];
    return a.grid.cell_measure() * acc;
}

std::vector<double> neg_laplacian(const Field1D& u) {
    const std::size_t n = u.grid.n;
    const double ih2 = 1.0 / (u.grid.h * u.grid.h);
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double left = i > 0 ? u.values[i - 1] : 0.0;
        const double right = i + 1 < n ? u.values[i + 1] : 0.0;
        out[i] = (2.0 * u.values[i] - left - right) * ih2;
    }
    return out;
}

std::vector<double> neg_laplacian(const Field2D& u) {
    const auto& g = u.grid;
    const double ihx2 = 1.0 / (g.hx * g.hx);
    const double ihy2 = 1.0 / (g.hy * g.hy);
    std::vector<double> out(g.size());
    for (std::size_t j = 0; j < g.ny; ++j) {
        for (std::size_t i = 0; i < g.nx; ++i) {
            const double c = u.at(i, j);
            const double l = i > 0 ? u.at(i - 1, j) : 0.0;
            const double r = i + 1 < g.nx ? u.at(i + 1, j) : 0.0;
            const double d = j > 0 ? u.at(i, j - 1) : 0.0;
            const double t = j + 1 < g.ny ? u.at(i, j + 1) : 0.0;
            out[j * g.nx + i] = (2.0 * c - l - r) * ihx2 + (2.0 * c - d - t) * ihy2;
        }
    }
    return out;
}

Field1D shift_cells(const Field1D& u, long k) {
    Field1D out(u.grid);
    const long n = static_cast<long>(u.grid.n);
    for (long i = 0; i < n; ++i) {
        const double x = u.values[static_cast<std::size_t>(i)];
        const long dst = i + k;
        if (dst < 0 || dst >= n) {
            if (x != 0.0) throw DomainError("shift moves support outside the grid");
            continue;
        }
        out.values[static_cast<std::size_t>(dst)] = x;
    }
    return out;
}

}  // namespace rkit

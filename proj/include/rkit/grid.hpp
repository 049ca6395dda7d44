#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "rkit/errors.hpp"

namespace rkit {

// Uniform cell-centered 1D grid: centers at x0 + i*h, each cell carries measure h.
struct Grid1D {
    double x0 = 0.0;
    double h = 1.0;
    std::size_t n = 1;

    Grid1D() = default;
    Grid1D(double x0_, double h_, std::size_t n_);

    double center(std::size_t i) const { return x0 + static_cast<double>(i) * h; }
    double length() const { return static_cast<double>(n) * h; }

    // n cells of width h, symmetric about 0.
    static Grid1D centered(std::size_t n, double h);
    // Cells covering [-L/2, L/2] at spacing h (n rounded to the nearest integer).
    static Grid1D symmetric_box(double L, double h);

    bool operator==(const Grid1D&) const = default;
};

struct Grid2D {
    double x0 = 0.0;
    double y0 = 0.0;
    double hx = 1.0;
    double hy = 1.0;
    std::size_t nx = 1;
    std::size_t ny = 1;

    Grid2D() = default;
    Grid2D(double x0_, double y0_, double hx_, double hy_, std::size_t nx_, std::size_t ny_);

    double cx(std::size_t i) const { return x0 + static_cast<double>(i) * hx; }
    double cy(std::size_t j) const { return y0 + static_cast<double>(j) * hy; }
    double cell_measure() const { return hx * hy; }
    std::size_t size() const { return nx * ny; }

    // Grid of the x1-lines (the Steiner axis).
    Grid1D line_grid() const { return Grid1D(x0, hx, nx); }

    static Grid2D centered(std::size_t nx, std::size_t ny, double hx, double hy);

    bool operator==(const Grid2D&) const = default;
};

struct Field1D {
    Grid1D grid;
    std::vector<double> values;

    Field1D() = default;
    Field1D(Grid1D g, std::vector<double> v);
    explicit Field1D(Grid1D g) : grid(g), values(g.n, 0.0) {}

    template <class Fn>
    static Field1D sample(const Grid1D& g, Fn&& fn) {
        Field1D f(g);
        for (std::size_t i = 0; i < g.n; ++i) f.values[i] = fn(g.center(i));
        return f;
    }

    std::size_t size() const { return values.size(); }
    double operator[](std::size_t i) const { return values[i]; }
    double& operator[](std::size_t i) { return values[i]; }
};

// Row-major: value (i, j) lives at j*nx + i, so line j (x1 -> u(x1, y_j)) is contiguous.
struct Field2D {
    Grid2D grid;
    std::vector<double> values;

    Field2D() = default;
    Field2D(Grid2D g, std::vector<double> v);
    explicit Field2D(Grid2D g) : grid(g), values(g.size(), 0.0) {}

    template <class Fn>
    static Field2D sample(const Grid2D& g, Fn&& fn) {
        Field2D f(g);
        for (std::size_t j = 0; j < g.ny; ++j)
            for (std::size_t i = 0; i < g.nx; ++i) f.at(i, j) = fn(g.cx(i), g.cy(j));
        return f;
    }

    double at(std::size_t i, std::size_t j) const { return values[j * grid.nx + i]; }
    double& at(std::size_t i, std::size_t j) { return values[j * grid.nx + i]; }

    std::span<const double> line(std::size_t j) const {
        return {values.data() + j * grid.nx, grid.nx};
    }
    std::span<double> line(std::size_t j) { return {values.data() + j * grid.nx, grid.nx}; }
    Field1D line_field(std::size_t j) const;
    void set_line(std::size_t j, std::span<const double> v);
};

// mu(t) = L1{u > t} sampled at increasing thresholds.
struct DistributionProfile {
    std::vector<double> thresholds;
    std::vector<double> measures;
};

using PointwiseMap = std::function<double(double)>;

// Signed / arbitrary samples -> moduli.
Field1D modulus(Field1D f);
Field2D modulus(Field2D f);

// Throws DomainError on any non-finite or negative value.
void require_nonnegative(std::span<const double> values, const char* what);

// h * sum |u_i|^p  (the p-th power integral, not its root).
double lp_norm(const Field1D& u, double p);
double lp_norm(const Field2D& u, double p);

// Forward differences with zero extension at both ends:
// sum over the n+1 differences of h * |du/h|^p.  axis 0 = x1 (Steiner axis), 1 = x2.
double gradient_seminorm(const Field1D& u, double p, int axis = 0);
double gradient_seminorm(const Field2D& u, double p, int axis);

// Sum of the per-axis seminorms; the discrete ∫|∇u|^2 when p = 2.
double dirichlet_integral(const Field1D& u);
double dirichlet_integral(const Field2D& u);

DistributionProfile distribution_profile(const Field1D& u, std::span<const double> levels);

// h * sum phi(u_i); phi(0) must be 0.
double quadrature_phi(const Field1D& u, const PointwiseMap& phi);
double quadrature_phi(const Field2D& u, const PointwiseMap& phi);

// Discrete L2 inner product and -Laplacian with zero (Dirichlet) extension.
double inner(const Field1D& a, const Field1D& b);
double inner(const Field2D& a, const Field2D& b);
std::vector<double> neg_laplacian(const Field1D& u);
std::vector<double> neg_laplacian(const Field2D& u);

// Moves values by k cells inside the same grid, filling with zeros.
// Throws DomainError if a nonzero value would leave the grid.
Field1D shift_cells(const Field1D& u, long k);

}  // namespace rkit

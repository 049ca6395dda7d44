#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <string_view>
#include <vector>

#include "rkit/grid.hpp"

namespace rkit {

// Seeded generator with a portable double mapping (std distributions are
// implementation-defined, which would break cross-platform report equality).
class Rng {
public:
    explicit Rng(std::uint64_t seed);
    // Independent stream for a named job, so results do not depend on scheduling.
    static Rng for_stream(std::uint64_t seed, std::string_view stream);

    double uniform();  // [0, 1)
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    std::uint64_t below(std::uint64_t n);  // [0, n)
    std::uint64_t next() { return gen_(); }

private:
    std::mt19937_64 gen_;
};

struct Bump {
    double center = 0.0;
    double center_y = 0.0;
    double width = 1.0;
    double height = 1.0;
};

// Sum of Gaussian bumps; a continuous function that can be sampled at any h.
struct BumpProfile {
    std::vector<Bump> bumps;
    double operator()(double x) const;
    double operator()(double x, double y) const;
};

// 1-5 bumps with centers inside the middle 60% of [-half_width, half_width],
// widths in [0.05, 0.15]*half_width, heights in [0.2, 2].
BumpProfile random_bumps(Rng& rng, double half_width, bool two_dimensional = false);

// Samples on the n = round(2*half_width/h) cell box centered at 0.
Field1D sample_box(const std::function<double(double)>& f, double half_width, double h);
Field2D sample_box(const std::function<double(double, double)>& f, double half_width_x,
                   double half_width_y, double h);

// I.i.d. uniform values in [0, 1); with quantize > 0 values are rounded to
// multiples of 1/quantize, which produces ties.
Field1D random_rough_field(Rng& rng, std::size_t n, double h, int quantize = 0);
Field2D random_rough_field(Rng& rng, std::size_t nx, std::size_t ny, double h, int quantize = 0);

// Piecewise-linear profile through (knot_x[k], knot_y[k]), zero outside.
struct PiecewiseLinear {
    std::vector<double> x;
    std::vector<double> y;
    double operator()(double t) const;
};

// Asymmetric multi-bump profile on [0, b] with knots on multiples of `spacing`,
// zero at both ends.
PiecewiseLinear random_piecewise_linear(Rng& rng, double b, double spacing);

// Samples a profile at the nodes 0, h, ..., b (n = b/h + 1 samples).
Field1D sample_nodes(const std::function<double(double)>& f, double b, double h);

}  // namespace rkit

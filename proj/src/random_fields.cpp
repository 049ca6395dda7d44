#include "rkit/random_fields.hpp"

#include <algorithm>
#include <cmath>
#include <string_view>

namespace rkit {

namespace {
std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}
}  // namespace

Rng::Rng(std::uint64_t seed) : gen_(seed) {}

Rng Rng::for_stream(std::uint64_t seed, std::string_view stream) {
    return Rng(seed * 0x9E3779B97F4A7C15ull ^ fnv1a(stream));
}

double Rng::uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

std::uint64_t Rng::below(std::uint64_t n) {
    // rejection keeps it unbiased
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
    std::uint64_t x;
    do {
        x = gen_();
    } while (x >= limit);
    return x % n;
}

double BumpProfile::operator()(double x) const {
    double acc = 0.0;
    for (const auto& b : bumps) {
        const double z = (x - b.center) / b.width;
        acc += b.height * std::exp(-0.5 * z * z);
    }
    return acc;
}

double BumpProfile::operator()(double x, double y) const {
    double acc = 0.0;
    for (const auto& b : bumps) {
        const double zx = (x - b.center) / b.width;
        const double zy = (y - b.center_y) / b.width;
        acc += b.height * std::exp(-0.5 * (zx * zx + zy * zy));
    }
    return acc;
}

BumpProfile random_bumps(Rng& rng, double half_width, bool two_dimensional) {
    BumpProfile p;
    const auto count = 1 + rng.below(5);
    for (std::uint64_t k = 0; k < count; ++k) {
        Bump b;
        b.center = rng.uniform(-0.6, 0.6) * half_width;
        b.center_y = two_dimensional ? rng.uniform(-0.6, 0.6) * half_width : 0.0;
        b.width = rng.uniform(0.05, 0.15) * half_width;
        b.height = rng.uniform(0.2, 2.0);
        p.bumps.push_back(b);
    }
    return p;
}

Field1D sample_box(const std::function<double(double)>& f, double half_width, double h) {
    return Field1D::sample(Grid1D::symmetric_box(2.0 * half_width, h), f);
}

Field2D sample_box(const std::function<double(double, double)>& f, double half_width_x,
                   double half_width_y, double h) {
    const auto nx = static_cast<std::size_t>(std::llround(2.0 * half_width_x / h));
    const auto ny = static_cast<std::size_t>(std::llround(2.0 * half_width_y / h));
    return Field2D::sample(Grid2D::centered(std::max<std::size_t>(nx, 1), std::max<std::size_t>(ny, 1), h, h), f);
}

Field1D random_rough_field(Rng& rng, std::size_t n, double h, int quantize) {
    Field1D u(Grid1D::centered(n, h));
    for (double& x : u.values) {
        x = rng.uniform();
        if (quantize > 0) x = std::floor(x * quantize) / quantize;
    }
    return u;
}

Field2D random_rough_field(Rng& rng, std::size_t nx, std::size_t ny, double h, int quantize) {
    Field2D u(Grid2D::centered(nx, ny, h, h));
    for (double& x : u.values) {
        x = rng.uniform();
        if (quantize > 0) x = std::floor(x * quantize) / quantize;
    }
    return u;
}

double PiecewiseLinear::operator()(double t) const {
    if (x.empty() || t <= x.front() || t >= x.back()) return 0.0;
    const auto it = std::upper_bound(x.begin(), x.end(), t);
    const auto k = static_cast<std::size_t>(it - x.begin());
    const double w = (t - x[k - 1]) / (x[k] - x[k - 1]);
    return y[k - 1] + w * (y[k] - y[k - 1]);
}

PiecewiseLinear random_piecewise_linear(Rng& rng, double b, double spacing) {
    const auto n = static_cast<std::size_t>(std::llround(b / spacing));
    PiecewiseLinear p;
    p.x.resize(n + 1);
    p.y.resize(n + 1, 0.0);
    for (std::size_t k = 0; k <= n; ++k) p.x[k] = static_cast<double>(k) * spacing;
    // Two or three bumps of random height at random interior peaks; linear in
    // between, with distinct up/down slopes so no level is hit symmetrically.
    const std::size_t peaks = 2 + rng.below(2);
    std::vector<std::size_t> at;
    while (at.size() < peaks) {
        const std::size_t k = 1 + rng.below(n - 1);
        if (2 * k == n) continue;  // a centered peak would make the profile symmetric
        at.push_back(k);
        std::sort(at.begin(), at.end());
        at.erase(std::unique(at.begin(), at.end()), at.end());
    }
    std::vector<double> hgt;
    for (std::size_t k = 0; k < at.size(); ++k) hgt.push_back(rng.uniform(0.5, 2.0));
    for (std::size_t k = 1; k < n; ++k) {
        double v = 0.0;
        for (std::size_t m = 0; m < at.size(); ++m) {
            const double d = static_cast<double>(k) - static_cast<double>(at[m]);
            const double left = static_cast<double>(at[m]);
            const double right = static_cast<double>(n - at[m]);
            const double tent = d < 0 ? 1.0 + d / left : 1.0 - d / right;
            v = std::max(v, hgt[m] * tent * tent * (0.6 + 0.4 * tent));
        }
        p.y[k] = v;
    }
    return p;
}

Field1D sample_nodes(const std::function<double(double)>& f, double b, double h) {
    const auto n = static_cast<std::size_t>(std::llround(b / h)) + 1;
    return Field1D::sample(Grid1D(0.0, h, n), f);
}

}  // namespace rkit

#include "rkit/minimize.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>

namespace rkit {

namespace {

// ---- per-dimension helpers -------------------------------------------------

double cell_measure(const Field1D& u) { return u.grid.h; }
double cell_measure(const Field2D& u) { return u.grid.cell_measure(); }
int dimension_of(const Field1D&) { return 1; }
int dimension_of(const Field2D&) { return 2; }
double min_spacing(const Grid1D& g) { return g.h; }
double min_spacing(const Grid2D& g) { return std::min(g.hx, g.hy); }

double mass(const Field1D& u) {
    double acc = 0.0;
    for (double x : u.values) acc += x * x;
    return u.grid.h * acc;
}
double mass(const Field2D& u) {
    double acc = 0.0;
    for (double x : u.values) acc += x * x;
    return u.grid.cell_measure() * acc;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

// (diag_shift I + tau(-Δ_h)) x = rhs, Dirichlet tridiagonal (Thomas).
void implicit_solve(Field1D& x, const std::vector<double>& rhs, double diag_shift, double tau) {
    const std::size_t n = rhs.size();
    const double off = -tau / (x.grid.h * x.grid.h);
    const double diag = diag_shift - 2.0 * off;
    std::vector<double> c(n), d(n);
    c[0] = off / diag;
    d[0] = rhs[0] / diag;
    for (std::size_t i = 1; i < n; ++i) {
        const double m = diag - off * c[i - 1];
        c[i] = off / m;
        d[i] = (rhs[i] - off * d[i - 1]) / m;
    }
    x.values[n - 1] = d[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) x.values[i] = d[i] - c[i] * x.values[i + 1];
}

// Same operator in 2D by conjugate gradients, warm-started from x.
void implicit_solve(Field2D& x, const std::vector<double>& rhs, double diag_shift, double tau) {
    auto apply = [&](const Field2D& p) {
        auto y = neg_laplacian(p);
        for (std::size_t i = 0; i < y.size(); ++i) y[i] = diag_shift * p.values[i] + tau * y[i];
        return y;
    };
    auto ax = apply(x);
    std::vector<double> r(rhs.size());
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = rhs[i] - ax[i];
    Field2D p(x.grid, r);
    double rr = dot(r, r);
    const double stop = 1e-28 * std::max(dot(rhs, rhs), 1e-300);
    for (int it = 0; it < 5000 && rr > stop; ++it) {
        const auto ap = apply(p);
        const double alpha = rr / dot(p.values, ap);
        for (std::size_t i = 0; i < r.size(); ++i) {
            x.values[i] += alpha * p.values[i];
            r[i] -= alpha * ap[i];
        }
        const double rr_new = dot(r, r);
        const double b = rr_new / rr;
        for (std::size_t i = 0; i < r.size(); ++i) p.values[i] = r[i] + b * p.values[i];
        rr = rr_new;
    }
}

std::uint64_t splitmix(std::uint64_t& s) {
    std::uint64_t z = (s += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

double unit(std::mt19937_64& g) { return static_cast<double>(g() >> 11) * 0x1.0p-53; }

Field1D gaussian_start(const Grid1D& g, double width) {
    return Field1D::sample(g, [&](double x) { return std::exp(-0.5 * x * x / (width * width)); });
}
Field2D gaussian_start(const Grid2D& g, double width) {
    return Field2D::sample(g, [&](double x, double y) {
        return std::exp(-0.5 * (x * x + y * y) / (width * width));
    });
}

template <class F>
void randomize(F& u, std::uint64_t seed) {
    std::uint64_t s = seed;
    std::mt19937_64 gen(splitmix(s));
    for (double& x : u.values) x *= 1.0 + 0.5 * (2.0 * unit(gen) - 1.0);
}

template <class F>
void normalize_to(F& u, double target) {
    const double m = mass(u);
    if (target == 0.0) {
        std::fill(u.values.begin(), u.values.end(), 0.0);
        return;
    }
    if (!(m > 0.0)) throw ConstraintError("cannot normalize a zero field to positive mass");
    const double c = std::sqrt(target / m);
    for (double& x : u.values) x *= c;
}

template <class F, class G>
F initial_field(const G& grid, const FlowConfig& cfg, const std::optional<F>& given, double width,
                std::uint64_t salt) {
    if (cfg.init == FlowConfig::Init::Given) {
        if (!given) throw DomainError("init=given requires an initial field");
        if (!(given->grid == grid)) throw GridError("initial field does not live on the run grid");
        return modulus(*given);
    }
    F u = gaussian_start(grid, width);
    if (cfg.init == FlowConfig::Init::RandomSeeded) randomize(u, cfg.seed + salt);
    return u;
}

// ---- the flow ---------------------------------------------------------------

// forces(fields) -> per-component nonlinear force f_k(u) (the part of the
// gradient not coming from the Laplacian); energy(fields) -> EnergyValue.
template <class F>
using ForceFn = std::function<std::vector<std::vector<double>>(const std::vector<F>&)>;
template <class F>
using EnergyFn = std::function<EnergyValue(const std::vector<F>&)>;

template <class F>
std::vector<double> multipliers(const std::vector<F>& u, const std::vector<std::vector<double>>& f,
                                const std::vector<double>& masses) {
    std::vector<double> mu(u.size(), 0.0);
    for (std::size_t k = 0; k < u.size(); ++k) {
        if (masses[k] == 0.0) continue;
        const double fu = cell_measure(u[k]) * dot(f[k], u[k].values);
        mu[k] = (fu - dirichlet_integral(u[k])) / masses[k];
    }
    return mu;
}

template <class F>
MinimizeResultT<F> run_flow(std::vector<F> u, const std::vector<double>& masses,
                            const ForceFn<F>& forces, const EnergyFn<F>& energy,
                            const FlowConfig& cfg) {
    const int dim = dimension_of(u.front());
    const double h = min_spacing(u.front().grid);
    const bool expl = cfg.scheme == FlowConfig::Scheme::Explicit;
    double tau = cfg.tau;
    if (tau == 0.0) tau = expl ? 0.4 * h * h / dim : 10.0;
    if (!(tau > 0.0)) throw DomainError("flow step tau must be positive");
    if (expl && !(tau < h * h / (2.0 * dim)))
        throw DomainError("explicit flow needs tau < h^2/(2N)");

    for (std::size_t k = 0; k < u.size(); ++k) normalize_to(u[k], masses[k]);
    double init_max = 0.0;
    for (const auto& f : u)
        for (double x : f.values) init_max = std::max(init_max, std::fabs(x));

    MinimizeResultT<F> res;
    EnergyValue e_prev = energy(u);
    int it = 0;
    for (it = 1; it <= cfg.max_iter; ++it) {
        const auto f = forces(u);
        if (expl) {
            for (std::size_t k = 0; k < u.size(); ++k) {
                if (masses[k] == 0.0) continue;
                const auto lap = neg_laplacian(u[k]);
                for (std::size_t i = 0; i < lap.size(); ++i)
                    u[k].values[i] -= tau * (lap[i] - f[k][i]);
            }
        } else {
            const auto mu = multipliers(u, f, masses);
            for (std::size_t k = 0; k < u.size(); ++k) {
                if (masses[k] == 0.0) continue;
                std::vector<double> rhs(u[k].values.size());
                for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] = u[k].values[i] + tau * f[k][i];
                implicit_solve(u[k], rhs, 1.0 + tau * std::max(mu[k], 0.0), tau);
            }
        }
        for (std::size_t k = 0; k < u.size(); ++k) normalize_to(u[k], masses[k]);
        const EnergyValue e = energy(u);
        if (!std::isfinite(e.total))
            throw DivergenceError("flow diverged (non-finite energy)", it - 1);
        if (it > cfg.burn_in && e.total > e_prev.total + 1e-14 * std::fabs(e_prev.total))
            res.monotone_energy = false;
        const double delta = std::fabs(e.total - e_prev.total);
        e_prev = e;
        if (delta < cfg.energy_tol) {
            res.converged = true;
            break;
        }
    }
    res.iterations = std::min(it, cfg.max_iter);
    if (!res.converged) res.diagnosis = "max_iter";

    res.energy = e_prev;
    res.multiplier = multipliers(u, forces(u), masses);

    double bmf = 0.0;
    double final_max = 0.0;
    for (std::size_t k = 0; k < u.size(); ++k) {
        if (masses[k] == 0.0) continue;
        bmf = std::max(bmf, boundary_mass_fraction(u[k]));
        for (double x : u[k].values) final_max = std::max(final_max, std::fabs(x));
    }
    res.boundary_mass_fraction = bmf;
    if (bmf > 1e-6 || final_max < 1e-6 * init_max) {
        res.converged = false;
        res.diagnosis = "spreading";
    }
    res.fields = std::move(u);
    return res;
}

// ---- problem-specific callbacks ---------------------------------------------

template <class F, class G>
MinimizeResultT<F> scalar_impl(const NonlinearitySpec& spec, const ConstraintSpec& c, const G& grid,
                               const FlowConfig& cfg, const std::optional<F>& given) {
    if (!(c.alpha > 0.0)) throw ConstraintError("scalar minimization needs alpha > 0");
    double width = cfg.init_width;
    if (width == 0.0) width = 1.0 / expected_decay_rate(spec, c.alpha);
    std::vector<F> u{initial_field<F>(grid, cfg, given, width, 0)};
    ForceFn<F> forces = [&spec](const std::vector<F>& fs) {
        std::vector<std::vector<double>> out(1);
        out[0].resize(fs[0].values.size());
        for (std::size_t i = 0; i < out[0].size(); ++i) out[0][i] = spec.f(fs[0].values[i]);
        return out;
    };
    EnergyFn<F> energy = [&spec](const std::vector<F>& fs) { return scalar_energy(fs[0], spec); };
    return run_flow<F>(std::move(u), {c.alpha}, forces, energy, cfg);
}

template <class F, class G>
MinimizeResultT<F> system_impl(const CoupledGSpec& spec, const ConstraintSpec& c, const G& grid,
                               const FlowConfig& cfg, const std::optional<F>& given_u,
                               const std::optional<F>& given_v) {
    spec.validate();
    if (c.alpha < 0.0 || c.beta < 0.0) throw ConstraintError("masses must be >= 0");
    if (c.alpha == 0.0 && c.beta == 0.0) throw ConstraintError("system needs (alpha, beta) != (0, 0)");
    double width = cfg.init_width;
    if (width == 0.0) width = 1.0 / expected_decay_rate(spec, std::max(c.alpha, c.beta));
    std::vector<F> u{initial_field<F>(grid, cfg, given_u, width, 0),
                     initial_field<F>(grid, cfg, given_v ? given_v : given_u, width, 1)};
    ForceFn<F> forces = [&spec](const std::vector<F>& fs) {
        const std::size_t n = fs[0].values.size();
        std::vector<std::vector<double>> out(2, std::vector<double>(n));
        for (std::size_t i = 0; i < n; ++i) {
            const double a = fs[0].values[i];
            const double b = fs[1].values[i];
            out[0][i] = 2.0 * a * spec.g1(a * a, b * b);
            out[1][i] = 2.0 * b * spec.g2(a * a, b * b);
        }
        return out;
    };
    EnergyFn<F> energy = [&spec](const std::vector<F>& fs) {
        return system_energy(fs[0], fs[1], spec);
    };
    return run_flow<F>(std::move(u), {c.alpha, c.beta}, forces, energy, cfg);
}

}  // namespace

double boundary_mass_fraction(const Field1D& u) {
    const std::size_t n = u.grid.n;
    const std::size_t band = std::max<std::size_t>(1, n / 8);
    double edge = 0.0;
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double m = u.values[i] * u.values[i];
        total += m;
        if (i < band || i + band >= n) edge += m;
    }
    return total > 0.0 ? edge / total : 0.0;
}

double boundary_mass_fraction(const Field2D& u) {
    const auto& g = u.grid;
    const std::size_t bx = std::max<std::size_t>(1, g.nx / 8);
    const std::size_t by = std::max<std::size_t>(1, g.ny / 8);
    double edge = 0.0;
    double total = 0.0;
    for (std::size_t j = 0; j < g.ny; ++j) {
        for (std::size_t i = 0; i < g.nx; ++i) {
            const double m = u.at(i, j) * u.at(i, j);
            total += m;
            if (i < bx || i + bx >= g.nx || j < by || j + by >= g.ny) edge += m;
        }
    }
    return total > 0.0 ? edge / total : 0.0;
}

double expected_decay_rate(const NonlinearitySpec& spec, double alpha) {
    if (spec.kind() == NonlinearitySpec::Kind::Power && spec.dim() == 1) {
        const double p = spec.exponent();
        return 0.25 * std::pow(alpha, (p - 1.0) / (5.0 - p));
    }
    return 1.0;
}

double expected_decay_rate(const CoupledGSpec& spec, double mass) {
    const double r = std::max(spec.a1 > 0.0 ? spec.r1 : 0.0, spec.a2 > 0.0 ? spec.r2 : 0.0);
    if (spec.dim == 1 && r > 1.0) {
        const double p = 2.0 * r - 1.0;
        return 0.25 * std::pow(mass, (p - 1.0) / (5.0 - p));
    }
    return 1.0;
}

double auto_box_length(double decay_rate) {
    if (!(decay_rate > 0.0)) throw DomainError("decay rate must be positive");
    return 2.0 * std::log(2e12) / decay_rate;
}

MinimizeResult minimize_scalar(const NonlinearitySpec& spec, const ConstraintSpec& c,
                               const Grid1D& grid, const FlowConfig& cfg) {
    if (spec.dim() != 1) throw DomainError("nonlinearity built for a different dimension");
    return scalar_impl<Field1D>(spec, c, grid, cfg, cfg.initial_1d);
}

MinimizeResult2D minimize_scalar(const NonlinearitySpec& spec, const ConstraintSpec& c,
                                 const Grid2D& grid, const FlowConfig& cfg) {
    if (spec.dim() != 2) throw DomainError("nonlinearity built for a different dimension");
    return scalar_impl<Field2D>(spec, c, grid, cfg, cfg.initial_2d);
}

MinimizeResult minimize_system(const CoupledGSpec& spec, const ConstraintSpec& c,
                               const Grid1D& grid, const FlowConfig& cfg) {
    if (spec.dim != 1) throw DomainError("coupled spec built for a different dimension");
    return system_impl<Field1D>(spec, c, grid, cfg, cfg.initial_1d, cfg.initial_1d_second);
}

MinimizeResult2D minimize_system(const CoupledGSpec& spec, const ConstraintSpec& c,
                                 const Grid2D& grid, const FlowConfig& cfg) {
    if (spec.dim != 2) throw DomainError("coupled spec built for a different dimension");
    return system_impl<Field2D>(spec, c, grid, cfg, cfg.initial_2d, cfg.initial_2d_second);
}

MinimizeResult minimize_scalar_auto(const NonlinearitySpec& spec, const ConstraintSpec& c,
                                    double h, const FlowConfig& cfg) {
    double L = auto_box_length(expected_decay_rate(spec, c.alpha));
    MinimizeResult res;
    for (int attempt = 0; attempt < 4; ++attempt, L *= 2.0) {
        res = minimize_scalar(spec, c, Grid1D::symmetric_box(L, h), cfg);
        if (res.boundary_mass_fraction <= 1e-10) break;
    }
    return res;
}

MinimizeResult minimize_system_auto(const CoupledGSpec& spec, const ConstraintSpec& c, double h,
                                    const FlowConfig& cfg) {
    // the lighter nonzero component is the wider one
    double m = std::max(c.alpha, c.beta);
    if (c.alpha > 0.0) m = std::min(m, c.alpha);
    if (c.beta > 0.0) m = std::min(m, c.beta);
    double L = auto_box_length(expected_decay_rate(spec, m));
    MinimizeResult res;
    for (int attempt = 0; attempt < 4; ++attempt, L *= 2.0) {
        res = minimize_system(spec, c, Grid1D::symmetric_box(L, h), cfg);
        if (res.boundary_mass_fraction <= 1e-10) break;
    }
    return res;
}

std::vector<SweepRow> energy_curve_sweep(const NonlinearitySpec& spec,
                                         const std::vector<double>& alphas,
                                         std::optional<Grid1D> grid, double h,
                                         const FlowConfig& cfg) {
    if (alphas.empty()) return {};
    for (std::size_t k = 0; k < alphas.size(); ++k) {
        if (!(alphas[k] > 0.0)) throw DomainError("sweep masses must be positive");
        if (k > 0 && !(alphas[k] > alphas[k - 1]))
            throw DomainError("sweep masses must be strictly increasing");
    }
    const Grid1D g =
        grid ? *grid
             : Grid1D::symmetric_box(auto_box_length(expected_decay_rate(spec, alphas.front())), h);
    std::vector<SweepRow> rows;
    FlowConfig run_cfg = cfg;
    for (std::size_t k = 0; k < alphas.size(); ++k) {
        const auto res = minimize_scalar(spec, {alphas[k], 0.0}, g, run_cfg);
        rows.push_back({alphas[k], res.energy.total, res.multiplier.front(), res.iterations,
                        res.converged});
        if (k + 1 < alphas.size()) {
            Field1D next = res.fields.front();
            const double c = std::sqrt(alphas[k + 1] / alphas[k]);
            for (double& x : next.values) x *= c;
            run_cfg.init = FlowConfig::Init::Given;
            run_cfg.initial_1d = std::move(next);
        }
    }
    return rows;
}

}  // namespace rkit

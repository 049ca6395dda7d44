#include "rkit/energy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace rkit {

namespace {

double sorted_sum(std::vector<double>& terms) {
    std::sort(terms.begin(), terms.end());
    double acc = 0.0;
    for (double t : terms) acc += t;
    return acc;
}

void check_dim(int dim) {
    if (dim != 1 && dim != 2) throw DomainError("only dimensions 1 and 2 are supported");
}

double l2(const std::vector<double>& r, double cell) {
    double acc = 0.0;
    for (double x : r) acc += x * x;
    return std::sqrt(cell * acc);
}

template <class F>
double potential_of(const F& u, const NonlinearitySpec& spec, double cell) {
    std::vector<double> terms(u.values.size());
    for (std::size_t i = 0; i < terms.size(); ++i) terms[i] = spec.F(std::fabs(u.values[i]));
    return cell * sorted_sum(terms);
}

template <class F>
double coupled_potential(const F& u, const F& v, const CoupledGSpec& spec, double cell) {
    std::vector<double> terms(u.values.size());
    for (std::size_t i = 0; i < terms.size(); ++i) {
        const double a = u.values[i];
        const double b = v.values[i];
        terms[i] = spec.G(a * a, b * b);
    }
    return cell * sorted_sum(terms);
}

template <class F>
double el_residual(const F& u, double mu, const NonlinearitySpec& spec, double cell) {
    auto r = neg_laplacian(u);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] += mu * u.values[i] - spec.f(u.values[i]);
    return l2(r, cell);
}

template <class F>
std::pair<double, double> sys_residual(const F& u, const F& v, double mu, double nu,
                                       const CoupledGSpec& spec, double cell) {
    if (u.values.size() != v.values.size()) throw GridError("system fields on different grids");
    auto ru = neg_laplacian(u);
    auto rv = neg_laplacian(v);
    for (std::size_t i = 0; i < ru.size(); ++i) {
        const double a = u.values[i];
        const double b = v.values[i];
        ru[i] += mu * a - 2.0 * a * spec.g1(a * a, b * b);
        rv[i] += nu * b - 2.0 * b * spec.g2(a * a, b * b);
    }
    return {l2(ru, cell), l2(rv, cell)};
}

// x^e with 0^e = 0 for e > 0.
double upow(double x, double e) {
    if (x <= 0.0) return 0.0;
    if (e == 1.0) return x;
    if (e == 2.0) return x * x;
    return std::pow(x, e);
}

}  // namespace

NonlinearitySpec NonlinearitySpec::power(double p, int dim) {
    check_dim(dim);
    const double ceiling = 1.0 + 4.0 / dim;
    if (!(p > 1.0 && p < ceiling))
        throw DomainError("power exponent must satisfy 1 < p < 1 + 4/N (got p = " +
                          std::to_string(p) + ")");
    NonlinearitySpec s;
    s.kind_ = Kind::Power;
    s.dim_ = dim;
    s.p_ = p;
    return s;
}

NonlinearitySpec NonlinearitySpec::tabulated(std::vector<double> sv, std::vector<double> Fv, int dim) {
    check_dim(dim);
    if (sv.size() < 2 || sv.size() != Fv.size())
        throw DomainError("tabulated F needs at least two (s, F) pairs");
    if (sv.front() != 0.0 || Fv.front() != 0.0) throw DomainError("tabulated F must start at F(0) = 0");
    for (std::size_t i = 1; i < sv.size(); ++i)
        if (!(sv[i] > sv[i - 1])) throw DomainError("tabulated s must be strictly increasing");
    for (double x : Fv)
        if (!std::isfinite(x)) throw DomainError("tabulated F must be finite");
    NonlinearitySpec s;
    s.kind_ = Kind::Tabulated;
    s.dim_ = dim;
    s.s_ = std::move(sv);
    s.F_ = std::move(Fv);
    return s;
}

NonlinearitySpec NonlinearitySpec::zero(int dim) {
    return tabulated({0.0, std::numeric_limits<double>::max()}, {0.0, 0.0}, dim);
}

double NonlinearitySpec::F(double s) const {
    s = std::fabs(s);
    if (kind_ == Kind::Power) return upow(s, p_ + 1.0) / (p_ + 1.0);
    if (s > s_.back()) throw RangeError("tabulated F does not cover s = " + std::to_string(s));
    const auto it = std::upper_bound(s_.begin(), s_.end(), s);
    if (it == s_.end()) return F_.back();
    const auto k = static_cast<std::size_t>(it - s_.begin());
    const double w = (s - s_[k - 1]) / (s_[k] - s_[k - 1]);
    return F_[k - 1] + w * (F_[k] - F_[k - 1]);
}

double NonlinearitySpec::f(double s) const {
    const double a = std::fabs(s);
    double val;
    if (kind_ == Kind::Power) {
        val = upow(a, p_);
    } else {
        if (a > s_.back()) throw RangeError("tabulated F does not cover s = " + std::to_string(a));
        auto it = std::upper_bound(s_.begin(), s_.end(), a);
        if (it == s_.end()) --it;
        const auto k = static_cast<std::size_t>(it - s_.begin());
        val = (F_[k] - F_[k - 1]) / (s_[k] - s_[k - 1]);
    }
    return s < 0.0 ? -val : val;
}

void CoupledGSpec::validate() const {
    check_dim(dim);
    const double q = 1.0 + 2.0 / dim;
    auto bad = [](const std::string& m) { throw DomainError("coupled G: " + m); };
    if (a1 < 0.0 || a2 < 0.0 || beta < 0.0) bad("coefficients must be >= 0");
    if (a1 > 0.0 && !(r1 > 1.0 && r1 < q)) bad("r1 must lie in (1, 1 + 2/N)");
    if (a2 > 0.0 && !(r2 > 1.0 && r2 < q)) bad("r2 must lie in (1, 1 + 2/N)");
    if (beta > 0.0) {
        if (!(gamma1 >= 1.0 && gamma2 >= 1.0)) bad("coupling exponents must be >= 1");
        if (!(gamma1 + gamma2 < q)) bad("gamma1 + gamma2 must stay below 1 + 2/N");
    }
}

double CoupledGSpec::G(double s1, double s2) const {
    double g = 0.0;
    if (a1 != 0.0) g += a1 * upow(s1, r1);
    if (a2 != 0.0) g += a2 * upow(s2, r2);
    if (beta != 0.0) g += beta * upow(s1, gamma1) * upow(s2, gamma2);
    return g;
}

double CoupledGSpec::g1(double s1, double s2) const {
    double g = 0.0;
    if (a1 != 0.0) g += a1 * r1 * upow(s1, r1 - 1.0);
    if (beta != 0.0) {
        const double d = gamma1 == 1.0 ? 1.0 : upow(s1, gamma1 - 1.0);
        g += beta * gamma1 * d * upow(s2, gamma2);
    }
    return g;
}

double CoupledGSpec::g2(double s1, double s2) const {
    double g = 0.0;
    if (a2 != 0.0) g += a2 * r2 * upow(s2, r2 - 1.0);
    if (beta != 0.0) {
        const double d = gamma2 == 1.0 ? 1.0 : upow(s2, gamma2 - 1.0);
        g += beta * gamma2 * upow(s1, gamma1) * d;
    }
    return g;
}

CoupledGSpec CoupledGSpec::cubic_pair(double beta) {
    CoupledGSpec s;
    s.a1 = 0.25;
    s.r1 = 2.0;
    s.a2 = 0.25;
    s.r2 = 2.0;
    s.beta = beta;
    s.gamma1 = 1.0;
    s.gamma2 = 1.0;
    s.dim = 1;
    s.validate();
    return s;
}

bool certify_monotone_g(const CoupledGSpec& spec, double smax, int lattice) {
    const double ds = smax / (lattice - 1);
    for (int i = 0; i < lattice; ++i) {
        for (int j = 0; j < lattice; ++j) {
            const double s1 = i * ds;
            const double s2 = j * ds;
            const double a = spec.g1(s1, s2);
            const double b = spec.g2(s1, s2);
            if (a < 0.0 || b < 0.0) return false;
            if (i + 1 < lattice &&
                (spec.g1(s1 + ds, s2) < a || spec.g2(s1 + ds, s2) < b))
                return false;
            if (j + 1 < lattice &&
                (spec.g1(s1, s2 + ds) < a || spec.g2(s1, s2 + ds) < b))
                return false;
        }
    }
    return true;
}

bool certify_strict_coupling(const CoupledGSpec& spec, double sigma, int lattice) {
    for (int i = 1; i <= lattice; ++i) {
        for (int j = 1; j <= lattice; ++j) {
            const double s1 = sigma * i / lattice;
            const double s2 = sigma * j / lattice;
            if (!(spec.G(s1, 0.0) + spec.G(0.0, s2) < spec.G(s1, s2))) return false;
        }
    }
    return true;
}

EnergyValue scalar_energy(const Field1D& u, const NonlinearitySpec& spec) {
    if (spec.dim() != 1) throw DomainError("nonlinearity built for a different dimension");
    EnergyValue e;
    e.kinetic = 0.5 * dirichlet_integral(u);
    e.potential = potential_of(u, spec, u.grid.h);
    e.total = e.kinetic - e.potential;
    return e;
}

EnergyValue scalar_energy(const Field2D& u, const NonlinearitySpec& spec) {
    if (spec.dim() != 2) throw DomainError("nonlinearity built for a different dimension");
    EnergyValue e;
    e.kinetic = 0.5 * dirichlet_integral(u);
    e.potential = potential_of(u, spec, u.grid.cell_measure());
    e.total = e.kinetic - e.potential;
    return e;
}

EnergyValue system_energy(const Field1D& u, const Field1D& v, const CoupledGSpec& spec) {
    if (!(u.grid == v.grid)) throw GridError("system energy needs identical grids");
    EnergyValue e;
    e.kinetic = 0.5 * (dirichlet_integral(u) + dirichlet_integral(v));
    e.potential = coupled_potential(u, v, spec, u.grid.h);
    e.total = e.kinetic - e.potential;
    return e;
}

EnergyValue system_energy(const Field2D& u, const Field2D& v, const CoupledGSpec& spec) {
    if (!(u.grid == v.grid)) throw GridError("system energy needs identical grids");
    EnergyValue e;
    e.kinetic = 0.5 * (dirichlet_integral(u) + dirichlet_integral(v));
    e.potential = coupled_potential(u, v, spec, u.grid.cell_measure());
    e.total = e.kinetic - e.potential;
    return e;
}

double euler_lagrange_residual(const Field1D& u, double mu, const NonlinearitySpec& spec) {
    if (u.grid.n < 3) throw GridError("residual needs interior cells");
    return el_residual(u, mu, spec, u.grid.h);
}

double euler_lagrange_residual(const Field2D& u, double mu, const NonlinearitySpec& spec) {
    if (u.grid.nx < 3 || u.grid.ny < 3) throw GridError("residual needs interior cells");
    return el_residual(u, mu, spec, u.grid.cell_measure());
}

std::pair<double, double> system_el_residual(const Field1D& u, const Field1D& v, double mu,
                                             double nu, const CoupledGSpec& spec) {
    return sys_residual(u, v, mu, nu, spec, u.grid.h);
}

std::pair<double, double> system_el_residual(const Field2D& u, const Field2D& v, double mu,
                                             double nu, const CoupledGSpec& spec) {
    return sys_residual(u, v, mu, nu, spec, u.grid.cell_measure());
}

double gagliardo_nirenberg_constant(int dim) {
    // 1D: max u^2 <= sqrt(m K), so |u|_6^6 <= m^2 K.
    // 2D: Ladyzhenskaya's line-by-line argument, |u|_4^4 <= m K / 2.
    // Both survive discretization with zero-extended forward differences.
    check_dim(dim);
    return dim == 1 ? 1.0 : 0.5;
}

double coercivity_bound(const CoupledGSpec& spec, double R) {
    if (!(R > 0.0)) throw DomainError("mass bound R must be positive");
    spec.validate();
    const int N = spec.dim;
    const double q = 1.0 + 2.0 / N;  // s^q = |u|^{2+4/N}
    const double cn = gagliardo_nirenberg_constant(N);
    // eps * C_N * R^{2/N} = 1/5 < 1/4 leaves (1/2 - 1/5) >= 1/4 of the kinetic term.
    const double eps = 0.2 / (cn * std::pow(R, 2.0 / N));

    // s^d <= t^{d-1} s + t^{d-q} s^q for every t > 0 and 1 < d < q.
    // Each component's s^q budget is eps/2 per term that touches it.
    double lin1 = 0.0;
    double lin2 = 0.0;
    auto split = [&](double coeff, double d) {
        if (!(d > 1.0 && d < q)) throw DomainError("supercritical growth in G");
        const double t = std::pow(eps / (2.0 * coeff), 1.0 / (d - q));
        return coeff * std::pow(t, d - 1.0);
    };
    if (spec.a1 > 0.0) lin1 += split(spec.a1, spec.r1);
    if (spec.a2 > 0.0) lin2 += split(spec.a2, spec.r2);
    if (spec.beta > 0.0) {
        // Young: s1^a s2^b <= (a/d) s1^d + (b/d) s2^d.
        const double d = spec.gamma1 + spec.gamma2;
        const double w1 = spec.gamma1 / d;
        const double w2 = spec.gamma2 / d;
        const double c = spec.beta * std::max(w1, w2);
        const double t = std::pow(eps / (2.0 * c), 1.0 / (d - q));
        lin1 += spec.beta * w1 * std::pow(t, d - 1.0);
        lin2 += spec.beta * w2 * std::pow(t, d - 1.0);
    }
    return R * (lin1 + lin2);
}

}  // namespace rkit

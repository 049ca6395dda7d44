#pragma once

#include <utility>
#include <vector>

#include "rkit/grid.hpp"

namespace rkit {

// F(s) with f = F'.  Power family: F(s) = s^{p+1}/(p+1) with 1 < p < 1 + 4/N.
// Tabulated family: F linear between samples, F(0) = 0.  Both act on |u|.
class NonlinearitySpec {
public:
    enum class Kind { Power, Tabulated };

    static NonlinearitySpec power(double p, int dim = 1);
    static NonlinearitySpec tabulated(std::vector<double> s, std::vector<double> F, int dim = 1);
    // F == 0 on [0, inf); pure kinetic functional.
    static NonlinearitySpec zero(int dim = 1);

    Kind kind() const { return kind_; }
    int dim() const { return dim_; }
    double exponent() const { return p_; }
    const std::vector<double>& table_s() const { return s_; }
    const std::vector<double>& table_F() const { return F_; }

    double F(double s) const;
    double f(double s) const;  // odd extension for signed arguments

private:
    NonlinearitySpec() = default;
    Kind kind_ = Kind::Power;
    int dim_ = 1;
    double p_ = 3.0;
    std::vector<double> s_;
    std::vector<double> F_;
};

// G(s1, s2) = a1 s1^r1 + a2 s2^r2 + beta s1^gamma1 s2^gamma2, evaluated at s_j = |u_j|^2.
struct CoupledGSpec {
    double a1 = 0.25;
    double r1 = 2.0;
    double a2 = 0.25;
    double r2 = 2.0;
    double beta = 0.0;
    double gamma1 = 1.0;
    double gamma2 = 1.0;
    int dim = 1;

    // Throws DomainError when the exponents leave the admissible window:
    // 1 < r_j < 1 + 2/N, and for beta > 0: gamma_j >= 1, gamma1 + gamma2 < 1 + 2/N.
    void validate() const;

    double G(double s1, double s2) const;
    double g1(double s1, double s2) const;
    double g2(double s1, double s2) const;

    // Two cubic Schrödinger components with a quartic coupling.
    static CoupledGSpec cubic_pair(double beta = 0.5);
};

// g1, g2 >= 0 and nondecreasing along both axes on a lattice of [0, smax]^2.
bool certify_monotone_g(const CoupledGSpec& spec, double smax, int lattice = 50);
// G(s1,0) + G(0,s2) < G(s1,s2) on the positive lattice of (0, sigma]^2.
bool certify_strict_coupling(const CoupledGSpec& spec, double sigma, int lattice = 50);

struct EnergyValue {
    double kinetic = 0.0;
    double potential = 0.0;
    double total = 0.0;
};

EnergyValue scalar_energy(const Field1D& u, const NonlinearitySpec& spec);
EnergyValue scalar_energy(const Field2D& u, const NonlinearitySpec& spec);

EnergyValue system_energy(const Field1D& u, const Field1D& v, const CoupledGSpec& spec);
EnergyValue system_energy(const Field2D& u, const Field2D& v, const CoupledGSpec& spec);

// Discrete L2 norm of -Δ_h u + mu u - f(u) (Dirichlet second differences).
double euler_lagrange_residual(const Field1D& u, double mu, const NonlinearitySpec& spec);
double euler_lagrange_residual(const Field2D& u, double mu, const NonlinearitySpec& spec);

// Residuals of -Δu + mu u = 2u g1(u^2, v^2) and -Δv + nu v = 2v g2(u^2, v^2),
// the variational derivative of J in each component.
std::pair<double, double> system_el_residual(const Field1D& u, const Field1D& v, double mu,
                                             double nu, const CoupledGSpec& spec);
std::pair<double, double> system_el_residual(const Field2D& u, const Field2D& v, double mu,
                                             double nu, const CoupledGSpec& spec);

// C with (|∇u|^2 + |∇v|^2)/4 <= J[u,v] + C for all pairs of masses <= R,
// valid for the discrete Dirichlet integral.
double coercivity_bound(const CoupledGSpec& spec, double R);

// Discrete Gagliardo–Nirenberg constant: |u|_{2+4/N}^{2+4/N} <= C_N m^{2/N} |∇u|^2.
double gagliardo_nirenberg_constant(int dim);

}  // namespace rkit

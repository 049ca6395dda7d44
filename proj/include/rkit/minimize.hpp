#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rkit/energy.hpp"
#include "rkit/grid.hpp"

namespace rkit {

struct ConstraintSpec {
    double alpha = 1.0;
    double beta = 0.0;
};

struct FlowConfig {
    enum class Scheme { Explicit, SemiImplicit };
    enum class Init { Gaussian, Given, RandomSeeded };

    // Pseudo-time step; 0 picks the scheme default.
    double tau = 0.0;
    int max_iter = 20000;
    double energy_tol = 1e-13;
    Scheme scheme = Scheme::SemiImplicit;
    Init init = Init::Gaussian;
    std::uint64_t seed = 0;
    // Width of the Gaussian start; 0 derives it from the expected ground-state width.
    double init_width = 0.0;
    int burn_in = 10;
    std::optional<Field1D> initial_1d;
    std::optional<Field1D> initial_1d_second;
    std::optional<Field2D> initial_2d;
    std::optional<Field2D> initial_2d_second;
};

template <class FieldT>
struct MinimizeResultT {
    std::vector<FieldT> fields;
    EnergyValue energy;
    std::vector<double> multiplier;  // mu (and nu)
    int iterations = 0;
    bool converged = false;
    bool monotone_energy = true;
    // "", "spreading" (infimum not attained on the box) or "max_iter"
    std::string diagnosis;
    double boundary_mass_fraction = 0.0;
};

using MinimizeResult = MinimizeResultT<Field1D>;
using MinimizeResult2D = MinimizeResultT<Field2D>;

MinimizeResult minimize_scalar(const NonlinearitySpec& spec, const ConstraintSpec& c,
                               const Grid1D& grid, const FlowConfig& cfg = {});
MinimizeResult2D minimize_scalar(const NonlinearitySpec& spec, const ConstraintSpec& c,
                                 const Grid2D& grid, const FlowConfig& cfg = {});

MinimizeResult minimize_system(const CoupledGSpec& spec, const ConstraintSpec& c,
                               const Grid1D& grid, const FlowConfig& cfg = {});
MinimizeResult2D minimize_system(const CoupledGSpec& spec, const ConstraintSpec& c,
                                 const Grid2D& grid, const FlowConfig& cfg = {});

// Expected decay rate b of the 1D ground state (b = alpha/4 for the cubic case).
double expected_decay_rate(const NonlinearitySpec& spec, double alpha);
double expected_decay_rate(const CoupledGSpec& spec, double mass);

// Box length L so that the expected ground state has decayed below 1e-12 at ±L/2.
double auto_box_length(double decay_rate);

// Auto-sized 1D runs: the box is doubled and the run repeated while the mass
// within L/8 of the edges exceeds 1e-10 of the total.
MinimizeResult minimize_scalar_auto(const NonlinearitySpec& spec, const ConstraintSpec& c,
                                    double h, const FlowConfig& cfg = {});
MinimizeResult minimize_system_auto(const CoupledGSpec& spec, const ConstraintSpec& c, double h,
                                    const FlowConfig& cfg = {});

struct SweepRow {
    double alpha = 0.0;
    double energy = 0.0;
    double multiplier = 0.0;
    int iterations = 0;
    bool converged = false;
};

// One minimization per alpha on a shared grid, each warm-started from the
// previous minimizer rescaled to the new mass.  With no grid the box is sized
// for the smallest alpha.
std::vector<SweepRow> energy_curve_sweep(const NonlinearitySpec& spec,
                                         const std::vector<double>& alphas,
                                         std::optional<Grid1D> grid, double h,
                                         const FlowConfig& cfg = {});

// Mass within L/8 of either edge, relative to the total.
double boundary_mass_fraction(const Field1D& u);
double boundary_mass_fraction(const Field2D& u);

}  // namespace rkit

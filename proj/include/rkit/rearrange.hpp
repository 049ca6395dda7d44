#pragma once

#include <cstddef>
#include <vector>

#include "rkit/grid.hpp"

namespace rkit {

// Pairing convention for cells at equal distance from the origin.
struct PlacementRule {
    enum class TieBreak { RightFirst };
    TieBreak tie_break = TieBreak::RightFirst;
};

struct MultiplicityQuery {
    double level = 0.0;
    // Count the crossings created by padding one zero sample on each side.
    bool zero_extend = false;
};

// Cell indices of an n-cell centered grid, nearest to the origin first.
std::vector<std::size_t> placement_order(std::size_t n, PlacementRule rule = {});

// Value multiset sorted non-increasing on cells [0, n*h] (first center at h/2).
Field1D decreasing_rearrangement(const Field1D& f);

// Largest values nearest 0 on an n-cell grid centered at the origin.
Field1D symmetric_rearrangement_1d(const Field1D& f, PlacementRule rule = {});

// symmetric_rearrangement_1d applied to every x1-line; the y axis is untouched.
Field2D steiner_rearrangement(const Field2D& u, PlacementRule rule = {});

Field1D schwarz_rearrangement(const Field1D& u, PlacementRule rule = {});
// Requires hx == hy; cells are filled by increasing Euclidean distance from the origin.
Field2D schwarz_rearrangement(const Field2D& u, PlacementRule rule = {});

// Per line, the merged value multiset of u and v placed symmetric-decreasing on
// n_u + n_v cells, so mu_{u*v}(t) = mu_u(t) + mu_v(t) holds exactly.
Field1D coupled_rearrangement(const Field1D& u, const Field1D& v, PlacementRule rule = {});
Field2D coupled_rearrangement(const Field2D& u, const Field2D& v, PlacementRule rule = {});

// Crossings of the piecewise-linear interpolant of f with the level.
std::size_t multiplicity(const Field1D& f, const MultiplicityQuery& q);

// (f - s)_+ pointwise.
Field1D truncate_shift(const Field1D& f, double s);
Field2D truncate_shift(const Field2D& f, double s);

// Sorted (non-increasing) copy of the values; the multiset fingerprint used by
// the exact checks.
std::vector<double> sorted_multiset(std::span<const double> values);

}  // namespace rkit

#pragma once

#include "uzawa/fem/grid.hpp"

#include <array>
#include <vector>

namespace uzawa::fem {

/// Per-geometry boundary description: Dirichlet velocity data on every edge
/// except natural (do-nothing) outflow edges.
struct BoundaryProfile {
    Domain domain;

    /// Dirichlet velocity at a boundary point.
    std::array<double, 2> value(double x, double y) const;

    /// True for the do-nothing outflow edge of the obstacle and step geometries.
    bool is_neumann(const StructuredGrid& grid, const BoundaryEdge& edge) const;
};

/**
 * Boundary data for a geometry:
 *  - channel: u = (1 - y^2, 0) at x = -1 and at the Dirichlet outflow x = 1, walls at rest
 *  - cavity: lid u = (1, 0) along all of y = 1 including the corners, walls at rest
 *  - obstacle: inflow (1 - y^2, 0) at x = 0, natural outflow at x = 8
 *  - step: inflow (4y(1 - y), 0) at x = -1, natural outflow at x = 5
 */
BoundaryProfile boundary_profiles(Domain domain);

/// Dirichlet flags and values per velocity dof (all x components, then all y).
struct DirichletData {
    std::vector<char> fixed;
    std::vector<double> values;
    std::size_t count() const;
};

/// A node is fixed when it lies on at least one Dirichlet edge.
DirichletData classify_boundary(const StructuredGrid& grid, const BoundaryProfile& profile);

} // namespace uzawa::fem

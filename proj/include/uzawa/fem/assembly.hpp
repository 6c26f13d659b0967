#pragma once

#include "uzawa/fem/boundary.hpp"
#include "uzawa/fem/grid.hpp"
#include "uzawa/linalg/sparse_matrix.hpp"

#include <optional>
#include <string_view>

namespace uzawa::fem {

enum class Equation { Stokes, Oseen };

std::string_view to_string(Equation e);
Equation parse_equation(std::string_view name);

/// What to discretize on a grid. Oseen needs a wind of velocity-dof length;
/// Stokes must not carry one.
struct ProblemSpec {
    Equation equation = Equation::Stokes;
    double nu = 1.0;
    std::optional<la::Vector> wind;
};

/// The four velocity/pressure blocks of the component split.
struct ComponentBlocks {
    la::SparseMatrix a1, a2, b1, b2;
};

/**
 * Discrete saddle-point system [[A, B^T], [B, 0]] (u, p) = (f, g).
 *
 * Velocity dofs are ordered all x components then all y components. Dirichlet
 * dofs keep an identity row and column in A with the boundary value in f; the
 * matching columns of B are zero and their contribution is lifted into g.
 */
struct SaddleSystem {
    Domain domain = Domain::Channel;
    std::size_t grid_n = 0;
    Equation equation = Equation::Stokes;
    double nu = 1.0;

    la::SparseMatrix A;  ///< velocity operator, nu*K (+ N(wind))
    la::SparseMatrix B;  ///< discrete divergence, -(q, div v)
    la::Vector f;
    la::Vector g;
    la::Vector Mv_diag;  ///< diagonal of the velocity mass matrix (both components)
    la::SparseMatrix Mp; ///< pressure mass matrix
    DirichletData dirichlet;

    std::size_t num_velocity() const noexcept { return A.rows(); }
    std::size_t num_pressure() const noexcept { return B.rows(); }
    std::size_t size() const noexcept { return num_velocity() + num_pressure(); }

    /// b = (f, g)
    la::Vector rhs() const { return la::concat(f, g); }
    /// The full block operator applied to (u, p).
    la::Vector apply(std::span<const double> xi) const;
    /// b - A xi
    la::Vector residual(std::span<const double> xi) const;

    /// Throws when A has entries coupling the x and y velocity components.
    ComponentBlocks component_blocks() const;

    /// True when B^T 1 = 0, i.e. pressure is determined only up to a constant.
    bool has_pressure_nullspace(double tol = 1e-10) const;
};

// Pre-boundary-condition scalar Q2 matrices over all velocity nodes.
la::SparseMatrix assemble_scalar_stiffness(const StructuredGrid& grid);
la::SparseMatrix assemble_scalar_mass(const StructuredGrid& grid);
/// (w . grad phi_j, phi_i) with w interpolated in Q2 from a wind of length 2*nodes.
la::SparseMatrix assemble_convection(const StructuredGrid& grid, std::span<const double> wind);
/// -(psi_q, div phi) over both velocity components, before boundary conditions.
la::SparseMatrix assemble_divergence(const StructuredGrid& grid);
la::SparseMatrix assemble_pressure_mass(const StructuredGrid& grid);

SaddleSystem assemble(const StructuredGrid& grid, const ProblemSpec& spec);

/// Maps between component-split ordering (x block, y block) and interleaved
/// ordering (x0, y0, x1, y1, ...). interleaved_to_split(n)[k] is the split
/// index of interleaved entry k; split_to_interleaved is its inverse.
std::vector<std::size_t> split_to_interleaved(std::size_t num_nodes);
std::vector<std::size_t> interleaved_to_split(std::size_t num_nodes);

} // namespace uzawa::fem

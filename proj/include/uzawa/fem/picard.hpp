#pragma once

#include "uzawa/fem/grid.hpp"
#include "uzawa/linalg/vector.hpp"

namespace uzawa::fem {

/**
 * Convection field for the Oseen benchmarks: the k-th Picard iterate for the
 * steady Navier-Stokes equations, started from the Stokes solution.
 *
 * v_0 is the Stokes velocity; v_{j+1} is the velocity of the Oseen problem with
 * wind v_j. Every saddle solve uses the pressure Schur complement with
 * unrestarted GMRES (or CG for Stokes) to relative tolerance 1e-10.
 * Throws SolverError naming the Picard step whose solve failed.
 */
la::Vector picard_wind(const StructuredGrid& grid, double nu, std::size_t k);

} // namespace uzawa::fem

#pragma once

#include "uzawa/fem/assembly.hpp"

#include <filesystem>

namespace uzawa::fem {

/**
 * Writes a saddle system for replay in other tools:
 *
 *   A.mtx, B.mtx, Mp.mtx     Matrix Market coordinate, general
 *   f.mtx, g.mtx, Mv_diag.mtx Matrix Market array
 *   system.json              sizes, ordering, Dirichlet dofs and node coordinates
 *
 * The directory is created when missing.
 */
void export_system(const StructuredGrid& grid, const SaddleSystem& sys, const std::filesystem::path& dir);

} // namespace uzawa::fem

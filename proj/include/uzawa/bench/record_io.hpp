#pragma once

#include "uzawa/bench/experiment.hpp"
#include "uzawa/bench/tables.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

namespace uzawa::bench {

enum class Format { Csv, Json };

Format parse_format(std::string_view name);

/**
 * Convergence record serialization.
 *
 * CSV: header "iter,relative_residual", one row per entry of residual_history
 * (iter 0 is the starting residual).
 *
 * JSON: an object with "config" (problem, equation, nu, grid, method, window,
 * omega, beta, qb, tol, max_iters, inner, picard_steps), "grid_label",
 * "num_unknowns", "omega", "beta", "iterations", "status",
 * "final_relative_residual", "residual_history" and "wall_time".
 */
std::string record_to_csv(const RunRecord& r);
std::string record_to_json(const RunRecord& r);
RunRecord record_from_json(std::string_view text);

void emit(const RunRecord& r, Format format, std::ostream& out);
void emit(const RunRecord& r, Format format, const std::filesystem::path& path);

/// Table summaries. CSV columns: table, nu, grid, method, window, omega, beta,
/// reported, iterations, status, deviation, note.
std::string table_to_csv(const TableSummary& t);
std::string table_to_json(const TableSummary& t);
void emit(const TableSummary& t, Format format, const std::filesystem::path& path);

} // namespace uzawa::bench

#pragma once

#include "uzawa/bench/experiment.hpp"

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace uzawa::bench {

/// The bundled transcription of the published iteration tables (JSON text).
std::string_view reference_tables_json();

/// One published cell: parameters and the reported count ("12", ">1000", "*").
struct ReferenceCell {
    int table = 0;
    fem::Domain problem = fem::Domain::Channel;
    fem::Equation equation = fem::Equation::Stokes;
    double nu = 1.0;
    std::size_t grid = 16;
    Method method = Method::APU;
    std::size_t window = 0;
    std::optional<double> omega;  ///< empty for "auto" or where none was published
    std::optional<double> beta;
    std::optional<saddle::QbKind> qb;
    std::string reported;
};

std::vector<ReferenceCell> reference_cells(int table);
/// Number of tables in the bundled file.
int reference_table_count();
std::string reference_table_title(int table);

/// Published omega / beta for an Oseen cell, if any.
std::optional<double> reference_omega(fem::Domain d, fem::Equation e, double nu, std::size_t grid);
std::optional<double> reference_beta(fem::Domain d, fem::Equation e, double nu, std::size_t grid);

struct TableCellResult {
    ReferenceCell reference;
    bool skipped = false;
    std::string note;
    RunRecord record;
    /// iterations - reported, when both are plain numbers.
    std::optional<long> deviation;
};

struct TableSummary {
    int table = 0;
    std::string title;
    std::vector<TableCellResult> cells;
};

struct TableOptions {
    std::size_t max_grid = 64;
    saddle::InnerMethod inner = saddle::InnerMethod::Direct;
    /// Called after each finished cell.
    std::function<void(const TableCellResult&)> progress;
};

TableSummary run_table(int table, const TableOptions& opts = {});

} // namespace uzawa::bench

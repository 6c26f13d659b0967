#pragma once

#include "uzawa/accel/anderson.hpp"
#include "uzawa/fem/assembly.hpp"
#include "uzawa/saddle/inner_solver.hpp"
#include "uzawa/saddle/schur_preconditioner.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace uzawa::bench {

/// Method names as used in the benchmark tables.
enum class Method {
    NASU,    ///< standard Uzawa
    ASU,     ///< standard Uzawa with Anderson acceleration
    NAPU,    ///< preconditioned Uzawa
    APU,     ///< preconditioned Uzawa with Anderson acceleration
    PGMRES,  ///< GMRES on the Uzawa-preconditioned system
    RDF,     ///< GMRES on the sign-flipped system with the RDF preconditioner
};

std::string_view to_string(Method m);
Method parse_method(std::string_view name);

struct ExperimentConfig {
    fem::Domain problem = fem::Domain::Channel;
    fem::Equation equation = fem::Equation::Stokes;
    double nu = 1.0;
    std::size_t grid = 16;
    Method method = Method::APU;
    /// Anderson depth (ASU, APU) or GMRES restart (PGMRES, RDF). Ignored by NASU/NAPU.
    std::size_t window = 20;
    /// Empty means "auto": estimated for Stokes, looked up in the reference tables for Oseen.
    std::optional<double> omega;
    /// RDF only. Empty means the reference-table value for this cell.
    std::optional<double> beta;
    /// Q_B override. Defaults: identity for NASU/ASU, pressure mass (Stokes) or LSC (Oseen) otherwise.
    std::optional<saddle::QbKind> qb;
    double tol = 1e-6;
    std::size_t max_iters = 1000;
    saddle::InnerMethod inner = saddle::InnerMethod::Direct;
    std::size_t picard_steps = 5;

    /// Throws std::invalid_argument on incompatible settings.
    void validate() const;
    saddle::QbKind effective_qb() const;
    bool uses_omega() const noexcept { return method != Method::RDF; }
};

struct RunRecord {
    ExperimentConfig config;
    std::string grid_label;
    std::size_t num_unknowns = 0;
    /// The omega / beta actually used (after auto resolution); 0 when not applicable.
    double omega = 0.0;
    double beta = 0.0;
    std::size_t iterations = 0;
    accel::Status status = accel::Status::MaxIterations;
    double final_relative_residual = 0.0;
    /// Relative residual after 0, 1, ..., iterations steps.
    std::vector<double> residual_history;
    double wall_time = 0.0;  ///< seconds, solve phase only
};

/// "converged", "exceeded_<max_iters>" or "diverged".
std::string status_label(accel::Status s, std::size_t max_iters);

/// Assembles the configured problem (with the Picard wind for Oseen) and runs it.
RunRecord run_experiment(const ExperimentConfig& cfg);

/// Runs the configured method on an already assembled system. omega and beta
/// must be resolvable without reference lookups (given explicitly or Stokes auto).
RunRecord run_on_system(const fem::SaddleSystem& sys, const ExperimentConfig& cfg);

/// Assembles the system a config describes. Picard winds are cached per
/// (problem, grid, nu, steps) for the lifetime of the process.
fem::SaddleSystem assemble_problem(const ExperimentConfig& cfg);

} // namespace uzawa::bench

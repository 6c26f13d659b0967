#pragma once

#include "uzawa/linalg/linear_operator.hpp"
#include "uzawa/linalg/vector.hpp"

#include <cstddef>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

namespace uzawa::la {

/// Outcome of an iterative solve. residual_history[k] is the residual after k
/// iterations relative to ||b||_2, so it always has iterations+1 entries.
struct SolveReport {
    std::size_t iterations = 0;
    double final_relative_residual = 0.0;
    bool converged = false;
    bool stagnated = false;
    std::vector<double> residual_history;
};

struct CgOptions {
    double tol = 1e-12;
    std::size_t max_iters = 10000;
    /// Applies an SPD preconditioner (z = P^{-1} r). Empty means none.
    std::optional<LinearOperator> preconditioner;
    /// Projects a vector onto the complement of a known null space in place.
    /// Needed for consistent semidefinite systems (e.g. enclosed-flow pressure).
    std::function<void(std::span<double>)> project;
};

/// Preconditioned conjugate gradients. Throws SolverError on non-positive curvature.
std::pair<Vector, SolveReport> cg_solve(const LinearOperator& m, std::span<const double> b, const CgOptions& opts);

inline std::pair<Vector, SolveReport> cg_solve(const LinearOperator& m, std::span<const double> b, double tol,
                                               std::size_t max_iters)
{
    CgOptions opts;
    opts.tol = tol;
    opts.max_iters = max_iters;
    return cg_solve(m, b, opts);
}

struct GmresOptions {
    std::size_t restart = 30;
    double tol = 1e-6;
    std::size_t max_iters = 1000;
    /// Called with (k, x_k) after every Arnoldi step when set. Forming x_k costs
    /// an extra O(n k) per step, so leave empty unless iterates are needed.
    std::function<void(std::size_t, const Vector&)> observer;
};

/**
 * Restarted GMRES with modified Gram-Schmidt Arnoldi and selective
 * reorthogonalization. The convergence test is ||b - M x_k|| <= tol ||b||.
 *
 * residual_history holds the least-squares residual estimate per step, replaced
 * by the recomputed true residual at every restart boundary and at exit.
 */
std::pair<Vector, SolveReport> gmres_solve(const LinearOperator& m, std::span<const double> b,
                                           std::span<const double> x0, const GmresOptions& opts);

inline std::pair<Vector, SolveReport> gmres_solve(const LinearOperator& m, std::span<const double> b,
                                                  std::span<const double> x0, std::size_t restart, double tol,
                                                  std::size_t max_iters)
{
    GmresOptions opts;
    opts.restart = restart;
    opts.tol = tol;
    opts.max_iters = max_iters;
    return gmres_solve(m, b, x0, opts);
}

} // namespace uzawa::la

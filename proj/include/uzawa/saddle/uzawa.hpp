#pragma once

#include "uzawa/accel/anderson.hpp"
#include "uzawa/fem/assembly.hpp"
#include "uzawa/saddle/inner_solver.hpp"
#include "uzawa/saddle/schur_preconditioner.hpp"

#include <memory>
#include <optional>
#include <utility>

namespace uzawa::saddle {

enum class QaKind {
    ExactA,       ///< Q_A = A, applied with the inner solver
    GivenMatrix,  ///< Q_A supplied in UzawaConfig::qa_matrix
};

struct UzawaConfig {
    double omega = 1.0;
    QaKind qa = QaKind::ExactA;
    std::optional<SparseMatrix> qa_matrix;
    QbKind qb = QbKind::Identity;
    /// Tolerance for iterative inner solves (Krylov A solves, LSC Poisson solves).
    double inner_tol = 1e-10;
    InnerMethod inner = InnerMethod::Direct;

    /// Throws std::invalid_argument on omega <= 0, inner_tol outside (0, 1e-6],
    /// or a GivenMatrix config without a matrix.
    void validate() const;
};

/// Actions of the splitting A = M - N with
/// M = [[Q_A, 0], [B, -Q_B/omega]] and N = [[Q_A - A, -B^T], [0, -Q_B/omega]].
struct SplitOperators {
    LinearOperator M_apply;
    LinearOperator M_apply_inverse;
    LinearOperator N_apply;
};

struct SchurRouteResult {
    Vector u;
    Vector p;
    la::SolveReport report;
};

/**
 * Preconditioned Uzawa iteration
 *
 *     u_{k+1} = u_k + Q_A^{-1} (f - A u_k - B^T p_k)
 *     p_{k+1} = p_k + omega Q_B^{-1} (B u_{k+1} - g)
 *
 * and the operators derived from it. Standard Uzawa is Q_A = A, Q_B = I. With
 * Q_A = A the velocity update is computed as A^{-1} (f - B^T p_k), so it does
 * not depend on u_k at all.
 *
 * Iterates are stacked as xi = (u, p). The object holds copies of the system
 * matrices and is cheap to copy.
 */
class PreconditionedUzawa {
public:
    PreconditionedUzawa(const fem::SaddleSystem& sys, const UzawaConfig& cfg);

    std::size_t num_velocity() const noexcept;
    std::size_t num_pressure() const noexcept;
    std::size_t size() const noexcept { return num_velocity() + num_pressure(); }
    const UzawaConfig& config() const noexcept;

    std::pair<Vector, Vector> step(std::span<const double> u, std::span<const double> p) const;
    /// G(xi) = M^{-1}(N xi + b), evaluated as one step.
    Vector evaluate(std::span<const double> xi) const;
    accel::FixedPointMap fixed_point_map() const;

    SplitOperators split_operators() const;

    /// M^{-1} A and M^{-1} b for any Q_A.
    std::pair<LinearOperator, Vector> left_preconditioned_system() const;
    /// [[I, A^{-1} B^T], [0, omega Q_B^{-1} B A^{-1} B^T]] and its rhs; needs Q_A = A.
    /// One A solve and one Q_B^{-1} application per product.
    std::pair<LinearOperator, Vector> pgmres_system() const;

    /// Solves Q_B^{-1} S p = Q_B^{-1} (B A^{-1} f - g), S = B A^{-1} B^T, then
    /// u = A^{-1} (f - B^T p). Uses PCG when A is symmetric and Q_B is SPD,
    /// otherwise unrestarted GMRES. Needs Q_A = A.
    SchurRouteResult solve_schur(double tol, std::size_t max_iters = 2000) const;

    /// A^{-1} r with the configured inner solver.
    Vector solve_a(std::span<const double> r) const;
    const SchurPreconditioner& schur_preconditioner() const;

private:
    struct Impl;
    std::shared_ptr<const Impl> impl_;
};

std::pair<Vector, Vector> uzawa_step(const fem::SaddleSystem& sys, const UzawaConfig& cfg, std::span<const double> u,
                                     std::span<const double> p);
accel::FixedPointMap uzawa_fixed_point_map(const fem::SaddleSystem& sys, const UzawaConfig& cfg);
std::pair<LinearOperator, Vector> pgmres_operator(const fem::SaddleSystem& sys, const UzawaConfig& cfg);
SchurRouteResult schur_solve_route(const fem::SaddleSystem& sys, const UzawaConfig& cfg, double tol);

} // namespace uzawa::saddle

#pragma once

#include "uzawa/fem/assembly.hpp"
#include "uzawa/saddle/inner_solver.hpp"

#include <memory>
#include <string_view>

namespace uzawa::saddle {

/// Choice of the pressure-space preconditioner Q_B.
enum class QbKind {
    Identity,
    PressureMass,
    LSC,  ///< scaled BFBt least-squares commutator
};

std::string_view to_string(QbKind k);
QbKind parse_qb(std::string_view name);

/**
 * Q_B for the pressure update p += omega Q_B^{-1} (B u - g).
 *
 * The LSC variant applies
 *
 *     Q_B^{-1} r = (B M^{-1} B^T)^{-1} B M^{-1} A M^{-1} B^T (B M^{-1} B^T)^{-1} r,
 *
 * with M the diagonal of the velocity mass matrix. The two Poisson-type solves
 * use Jacobi-CG at inner_tol; the middle factor is a product, not a solve.
 * When B^T 1 = 0 the constant pressure mode is projected out of every solve.
 */
class SchurPreconditioner {
public:
    SchurPreconditioner(const fem::SaddleSystem& sys, QbKind kind, double inner_tol = 1e-10);

    QbKind kind() const noexcept;
    std::size_t size() const noexcept;

    /// Q_B^{-1} r
    Vector apply_inverse(std::span<const double> r) const;
    /// Q_B p. For LSC this needs a Krylov solve with B M^{-1} A M^{-1} B^T; test use only.
    Vector apply(std::span<const double> p) const;

    LinearOperator inverse_operator() const;
    /// Whether Q_B is symmetric positive definite (identity or mass matrix).
    bool is_spd() const noexcept;

private:
    struct Impl;
    std::shared_ptr<const Impl> impl_;
};

/// One-off LSC application; builds the Poisson operator each call.
Vector lsc_apply(const fem::SaddleSystem& sys, std::span<const double> r, double inner_tol = 1e-10);

} // namespace uzawa::saddle

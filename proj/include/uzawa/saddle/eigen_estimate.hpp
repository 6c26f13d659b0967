#pragma once

#include "uzawa/fem/assembly.hpp"
#include "uzawa/saddle/inner_solver.hpp"
#include "uzawa/saddle/schur_preconditioner.hpp"

namespace uzawa::saddle {

/// Extreme eigenvalues of the (preconditioned) Schur complement and the
/// Uzawa relaxation parameter 2 / (lambda_min + lambda_max).
struct SchurEstimate {
    double lambda_min = 0.0;
    double lambda_max = 0.0;
    double omega_opt = 0.0;
    std::size_t lanczos_steps = 0;
};

struct EigenOptions {
    /// Relative accuracy of both extreme eigenvalues.
    double rel_tol = 1e-4;
    std::size_t max_steps = 400;
    /// Identity gives the spectrum of S = B A^{-1} B^T, PressureMass that of Mp^{-1} S.
    QbKind qb = QbKind::Identity;
    InnerMethod inner = InnerMethod::Direct;
    double inner_tol = 1e-12;
};

/**
 * Lanczos with full reorthogonalization on S (or Mp^{-1} S in the Mp inner
 * product). A must be symmetric. When B^T 1 = 0 the constant pressure is
 * deflated, so lambda_min is the smallest eigenvalue on its complement.
 * Throws SolverError when the Ritz values do not settle within max_steps.
 */
SchurEstimate estimate_schur_omega(const fem::SaddleSystem& sys, const EigenOptions& opts = {});

} // namespace uzawa::saddle

#pragma once

#include "uzawa/accel/anderson.hpp"
#include "uzawa/fem/assembly.hpp"
#include "uzawa/saddle/rdf.hpp"
#include "uzawa/saddle/uzawa.hpp"

#include <functional>

namespace uzawa::saddle {

/// Stopping rule ||r_k|| / ||b|| <= tol shared by all outer methods.
struct StopRule {
    double tol = 1e-6;
    std::size_t max_iters = 1000;
    /// Fixed-point runs are declared diverged once the residual exceeds this
    /// multiple of the initial residual (or stops being finite).
    double divergence_factor = 1e8;
};

struct MethodResult {
    Vector solution;  ///< (u, p)
    accel::Status status = accel::Status::MaxIterations;
    la::SolveReport report;
};

/// ||b - K xi|| / ||b|| for the original saddle system (absolute if b = 0).
double saddle_relative_residual(const fem::SaddleSystem& sys, std::span<const double> xi);

/// NASU/NAPU for window 0, ASU/APU (Anderson depth = window) otherwise. Zero start.
MethodResult run_uzawa(const fem::SaddleSystem& sys, const PreconditionedUzawa& uzawa, std::size_t window,
                       const StopRule& stop);

/// GMRES(restart) on the Uzawa left-preconditioned system; zero start. Uses the
/// one-A-solve form when Q_A = A. The residual is that of the preconditioned system.
MethodResult run_pgmres(const PreconditionedUzawa& uzawa, std::size_t restart, const StopRule& stop,
                        std::function<void(std::size_t, const Vector&)> observer = {});

/// GMRES(restart) on M_beta^{-1} [[A, B^T], [-B, 0]] x = M_beta^{-1} (f, -g); zero start.
MethodResult run_rdf(const fem::SaddleSystem& sys, const RdfConfig& cfg, std::size_t restart, const StopRule& stop);

} // namespace uzawa::saddle

#pragma once

#include "uzawa/fem/assembly.hpp"
#include "uzawa/saddle/inner_solver.hpp"

#include <array>
#include <memory>
#include <utility>

namespace uzawa::saddle {

struct RdfConfig {
    double beta = 1.0;
    /// Tolerance for Krylov solves with A_i + B_i^T B_i / beta.
    double inner_tol = 1e-10;
    InnerMethod inner = InnerMethod::Direct;

    void validate() const;
};

/**
 * Action of M_beta^{-1} for the relaxed dimensional factorization
 *
 *     M_beta = [[ A1, -B1^T B2 / beta, B1^T ],
 *               [ 0,   A2,             B2^T ],
 *               [-B1, -B2,             beta I]]
 *
 * applied through M_beta = F1 F2 F3 F4 (see rdf_factors), which needs one solve
 * with each of A1 + B1^T B1 / beta and A2 + B2^T B2 / beta. The velocity block
 * of the system must be component-split.
 */
LinearOperator rdf_preconditioner(const fem::SaddleSystem& sys, const RdfConfig& cfg);

/// M_beta assembled as a sparse matrix.
SparseMatrix rdf_matrix(const fem::SaddleSystem& sys, double beta);

/// The four factors F1..F4 with M_beta = F1 F2 F3 F4.
std::array<SparseMatrix, 4> rdf_factors(const fem::SaddleSystem& sys, double beta);

/// [[A, B^T], [-B, 0]] and (f, -g): the sign-flipped system RDF is applied to.
std::pair<LinearOperator, Vector> alternate_saddle_system(const fem::SaddleSystem& sys);

} // namespace uzawa::saddle

#pragma once

#include "uzawa/linalg/banded_lu.hpp"
#include "uzawa/linalg/krylov.hpp"
#include "uzawa/linalg/linear_operator.hpp"
#include "uzawa/linalg/sparse_matrix.hpp"

#include <memory>
#include <string_view>
#include <vector>

namespace uzawa::saddle {

using la::LinearOperator;
using la::SparseMatrix;
using la::Vector;

/// How solves with A (and the RDF blocks) are carried out.
enum class InnerMethod {
    Direct,  ///< banded LU, per diagonal block
    Krylov,  ///< Jacobi-preconditioned CG (symmetric) or GMRES (otherwise)
};

std::string_view to_string(InnerMethod m);
InnerMethod parse_inner_method(std::string_view name);

/**
 * Reusable solver for a fixed square sparse matrix. With the direct method a
 * matrix whose two half-size diagonal blocks decouple is factored blockwise.
 * Krylov solves throw SolverError when they miss the tolerance.
 */
class MatrixSolver {
public:
    MatrixSolver(const SparseMatrix& m, InnerMethod method, double tol);

    Vector solve(std::span<const double> rhs) const;
    void solve(std::span<const double> rhs, std::span<double> out) const;
    LinearOperator inverse_operator() const;

    std::size_t size() const noexcept;
    bool symmetric() const noexcept;

private:
    struct Impl;
    std::shared_ptr<const Impl> impl_;
};

bool is_symmetric(const SparseMatrix& m, double rel_tol = 1e-12);

} // namespace uzawa::saddle

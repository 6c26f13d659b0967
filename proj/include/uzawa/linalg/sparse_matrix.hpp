#pragma once

#include "uzawa/linalg/vector.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace uzawa::la {

/// (row, col, value) entry used to build a SparseMatrix. Duplicates are summed.
struct Triplet {
    std::size_t row;
    std::size_t col;
    double value;
};

/**
 * Compressed-sparse-row real matrix.
 *
 * Always held in canonical form: column indices strictly increasing within a
 * row and no duplicate entries. Construction from triplets sorts and merges.
 */
class SparseMatrix {
public:
    SparseMatrix() = default;
    SparseMatrix(std::size_t nrows, std::size_t ncols);

    /// Build from unsorted triplets; duplicates are summed, explicit zeros kept.
    static SparseMatrix from_triplets(std::size_t nrows, std::size_t ncols, std::vector<Triplet> entries);

    /// Adopt raw CSR arrays; validates and canonicalizes.
    static SparseMatrix from_csr(std::size_t nrows, std::size_t ncols, std::vector<std::size_t> row_offsets,
                                 std::vector<std::size_t> col_indices, std::vector<double> values);

    static SparseMatrix identity(std::size_t n);
    static SparseMatrix diagonal(std::span<const double> d);

    std::size_t rows() const noexcept { return nrows_; }
    std::size_t cols() const noexcept { return ncols_; }
    std::size_t nnz() const noexcept { return values_.size(); }

    std::span<const std::size_t> row_offsets() const noexcept { return row_offsets_; }
    std::span<const std::size_t> col_indices() const noexcept { return col_indices_; }
    std::span<const double> values() const noexcept { return values_; }

    /// Entry lookup by binary search; zero when not stored.
    double at(std::size_t i, std::size_t j) const;

    /// y = M x
    Vector multiply(std::span<const double> x) const;
    void multiply(std::span<const double> x, std::span<double> y) const;
    /// y = M^T x without forming the transpose.
    Vector multiply_transpose(std::span<const double> x) const;
    void multiply_transpose(std::span<const double> x, std::span<double> y) const;

    SparseMatrix transpose() const;
    Vector diagonal_entries() const;
    double max_abs() const;

    /// Rows [r0, r1) and columns [c0, c1) as a new matrix.
    SparseMatrix block(std::size_t r0, std::size_t r1, std::size_t c0, std::size_t c1) const;

    /// Lower and upper bandwidth of the stored pattern.
    std::size_t lower_bandwidth() const;
    std::size_t upper_bandwidth() const;

    /// Row-major dense copy, for small oracles and debugging.
    std::vector<double> to_dense() const;

    std::vector<Triplet> to_triplets() const;

private:
    std::size_t nrows_ = 0;
    std::size_t ncols_ = 0;
    std::vector<std::size_t> row_offsets_{0};
    std::vector<std::size_t> col_indices_;
    std::vector<double> values_;
};

/// Free-function forms matching the solver-facing API.
inline Vector spmv(const SparseMatrix& m, std::span<const double> x) { return m.multiply(x); }
inline Vector spmv_transpose(const SparseMatrix& m, std::span<const double> x) { return m.multiply_transpose(x); }

/// alpha*A + beta*B (same shape).
SparseMatrix add(const SparseMatrix& a, const SparseMatrix& b, double alpha = 1.0, double beta = 1.0);

/// Sparse product A*B.
SparseMatrix multiply(const SparseMatrix& a, const SparseMatrix& b);

/// A * diag(d) * B, used for B M^{-1} B^T style products.
SparseMatrix multiply_scaled(const SparseMatrix& a, std::span<const double> d, const SparseMatrix& b);

} // namespace uzawa::la

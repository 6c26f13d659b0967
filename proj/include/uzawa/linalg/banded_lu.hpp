#pragma once

#include "uzawa/linalg/linear_operator.hpp"
#include "uzawa/linalg/sparse_matrix.hpp"

#include <span>
#include <vector>

namespace uzawa::la {

/**
 * LU factorization with partial pivoting of a square sparse matrix stored in
 * LAPACK band format. Intended for the structured-grid velocity blocks, whose
 * bandwidth is a few grid lines wide.
 */
class BandedLU {
public:
    explicit BandedLU(const SparseMatrix& m);

    std::size_t size() const noexcept { return n_; }
    std::size_t lower_bandwidth() const noexcept { return kl_; }
    std::size_t upper_bandwidth() const noexcept { return ku_; }

    void solve_in_place(std::span<double> rhs) const;
    Vector solve(std::span<const double> rhs) const;

private:
    std::size_t n_ = 0;
    std::size_t kl_ = 0;
    std::size_t ku_ = 0;
    std::vector<double> band_;
    std::vector<int> pivots_;
};

} // namespace uzawa::la

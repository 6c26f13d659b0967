#pragma once

#include "uzawa/linalg/vector.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace uzawa::la {

/// Small column-major dense matrix for least-squares windows and oracles.
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[j * rows_ + i]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[j * rows_ + i]; }

    std::span<double> column(std::size_t j) { return {data_.data() + j * rows_, rows_}; }
    std::span<const double> column(std::size_t j) const { return {data_.data() + j * rows_, rows_}; }

    Vector multiply(std::span<const double> x) const;
    double frobenius_norm() const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

struct LeastSquaresResult {
    Vector x;
    /// Columns rejected by the degeneracy guard; their coefficients are zero.
    std::vector<std::size_t> dropped;
};

/// Relative threshold on |R_jj| / ||F||_F below which a column is treated as dependent.
inline constexpr double kColumnDropTolerance = 1e-12;

/**
 * argmin ||F x - rhs||_2 by Householder QR, processing columns left to right.
 * A column whose remaining norm (the R diagonal it would produce) falls below
 * kColumnDropTolerance * ||F||_F is dropped and its coefficient set to zero.
 */
LeastSquaresResult least_squares(const DenseMatrix& f, std::span<const double> rhs);

inline Vector least_squares_solve(const DenseMatrix& f, std::span<const double> rhs)
{
    return least_squares(f, rhs).x;
}

} // namespace uzawa::la

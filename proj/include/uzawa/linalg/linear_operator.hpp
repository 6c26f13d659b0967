#pragma once

#include "uzawa/linalg/sparse_matrix.hpp"
#include "uzawa/linalg/vector.hpp"

#include <functional>
#include <span>
#include <string>
#include <utility>

namespace uzawa::la {

/**
 * Matrix-free linear map. The callable writes apply(x) into its output span,
 * which is pre-sized to nrows; it may assume the output is not aliased with x.
 */
class LinearOperator {
public:
    using ApplyFn = std::function<void(std::span<const double>, std::span<double>)>;

    LinearOperator() = default;
    LinearOperator(std::size_t nrows, std::size_t ncols, ApplyFn fn)
        : nrows_(nrows), ncols_(ncols), fn_(std::move(fn))
    {}

    /// Wraps a sparse matrix by reference-counted copy.
    static LinearOperator from_matrix(SparseMatrix m);
    static LinearOperator identity(std::size_t n);

    std::size_t rows() const noexcept { return nrows_; }
    std::size_t cols() const noexcept { return ncols_; }

    void apply(std::span<const double> x, std::span<double> y) const
    {
        if (x.size() != ncols_) {
            throw DimensionError("operator expects length " + std::to_string(ncols_) + ", got " +
                                 std::to_string(x.size()));
        }
        require_size(y.size(), nrows_, "operator output");
        fn_(x, y);
    }

    Vector operator()(std::span<const double> x) const
    {
        Vector y(nrows_);
        apply(x, y);
        return y;
    }

private:
    std::size_t nrows_ = 0;
    std::size_t ncols_ = 0;
    ApplyFn fn_;
};

/// Densify an operator column by column (row-major output). Desk-scale only.
std::vector<double> densify(const LinearOperator& op);

} // namespace uzawa::la

#include "uzawa/linalg/linear_operator.hpp"

#include <memory>

namespace uzawa::la {

LinearOperator LinearOperator::from_matrix(SparseMatrix m)
{
    auto shared = std::make_shared<const SparseMatrix>(std::move(m));
    return {shared->rows(), shared->cols(),
            [shared](std::span<const double> x, std::span<double> y) { shared->multiply(x, y); }};
}

LinearOperator LinearOperator::identity(std::size_t n)
{
    return {n, n, [](std::span<const double> x, std::span<double> y) { std::copy(x.begin(), x.end(), y.begin()); }};
}

std::vector<double> densify(const LinearOperator& op)
{
    const std::size_t n = op.rows();
    const std::size_t m = op.cols();
    std::vector<double> dense(n * m, 0.0);
    Vector e(m, 0.0);
    Vector col(n);
    for (std::size_t j = 0; j < m; ++j) {
        e[j] = 1.0;
        op.apply(e, col);
        e[j] = 0.0;
        for (std::size_t i = 0; i < n; ++i) dense[i * m + j] = col[i];
    }
    return dense;
}

} // namespace uzawa::la

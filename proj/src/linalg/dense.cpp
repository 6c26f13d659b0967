#include "uzawa/linalg/dense.hpp"

#include <cmath>
#include <stdexcept>

namespace uzawa::la {

Vector DenseMatrix::multiply(std::span<const double> x) const
{
    require_size(x.size(), cols_, "DenseMatrix::multiply");
    Vector y(rows_, 0.0);
    for (std::size_t j = 0; j < cols_; ++j) axpy(x[j], column(j), y);
    return y;
}

double DenseMatrix::frobenius_norm() const
{
    return norm2(data_);
}

LeastSquaresResult least_squares(const DenseMatrix& f, std::span<const double> rhs)
{
    const std::size_t n = f.rows();
    const std::size_t k = f.cols();
    if (k == 0) throw std::invalid_argument("least_squares: matrix has no columns");
    if (n < k) throw DimensionError("least_squares: need rows >= cols");
    require_size(rhs.size(), n, "least_squares rhs");
    for (std::size_t j = 0; j < k; ++j)
        if (!all_finite(f.column(j))) throw std::invalid_argument("least_squares: non-finite entry in matrix");
    if (!all_finite(rhs)) throw std::invalid_argument("least_squares: non-finite entry in rhs");

    DenseMatrix r = f;
    Vector qtb(rhs.begin(), rhs.end());
    const double threshold = kColumnDropTolerance * f.frobenius_norm();

    LeastSquaresResult result;
    result.x.assign(k, 0.0);
    std::vector<std::size_t> kept;
    Vector v(n);

    for (std::size_t j = 0; j < k; ++j) {
        const std::size_t row = kept.size();
        auto col = r.column(j);
        double sigma = 0.0;
        for (std::size_t i = row; i < n; ++i) sigma += col[i] * col[i];
        sigma = std::sqrt(sigma);
        if (sigma <= threshold || row >= n) {
            result.dropped.push_back(j);
            continue;
        }
        // Householder reflector mapping col[row:] onto -sign(col[row]) * sigma * e_row.
        const double alpha = col[row] >= 0.0 ? -sigma : sigma;
        std::fill(v.begin(), v.end(), 0.0);
        v[row] = col[row] - alpha;
        for (std::size_t i = row + 1; i < n; ++i) v[i] = col[i];
        double vnorm2 = 0.0;
        for (std::size_t i = row; i < n; ++i) vnorm2 += v[i] * v[i];

        auto reflect = [&](std::span<double> y) {
            double s = 0.0;
            for (std::size_t i = row; i < n; ++i) s += v[i] * y[i];
            s = 2.0 * s / vnorm2;
            for (std::size_t i = row; i < n; ++i) y[i] -= s * v[i];
        };
        if (vnorm2 > 0.0) {
            for (std::size_t jj = j + 1; jj < k; ++jj) reflect(r.column(jj));
            reflect(qtb);
        }
        col[row] = alpha;
        for (std::size_t i = row + 1; i < n; ++i) col[i] = 0.0;
        kept.push_back(j);
    }

    for (std::size_t idx = kept.size(); idx-- > 0;) {
        double s = qtb[idx];
        for (std::size_t t = idx + 1; t < kept.size(); ++t) s -= r(idx, kept[t]) * result.x[kept[t]];
        result.x[kept[idx]] = s / r(idx, kept[idx]);
    }
    return result;
}

} // namespace uzawa::la

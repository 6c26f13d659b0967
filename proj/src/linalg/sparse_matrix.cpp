#include "uzawa/linalg/sparse_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace uzawa::la {

SparseMatrix::SparseMatrix(std::size_t nrows, std::size_t ncols)
    : nrows_(nrows), ncols_(ncols), row_offsets_(nrows + 1, 0)
{}

SparseMatrix SparseMatrix::from_triplets(std::size_t nrows, std::size_t ncols, std::vector<Triplet> entries)
{
    for (const auto& t : entries) {
        if (t.row >= nrows || t.col >= ncols) {
            throw DimensionError("triplet (" + std::to_string(t.row) + ", " + std::to_string(t.col) +
                                 ") outside " + std::to_string(nrows) + "x" + std::to_string(ncols) + " matrix");
        }
    }
    std::sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });

    SparseMatrix m(nrows, ncols);
    m.col_indices_.reserve(entries.size());
    m.values_.reserve(entries.size());
    std::size_t k = 0;
    for (std::size_t i = 0; i < nrows; ++i) {
        while (k < entries.size() && entries[k].row == i) {
            const std::size_t j = entries[k].col;
            double v = 0.0;
            while (k < entries.size() && entries[k].row == i && entries[k].col == j) v += entries[k++].value;
            m.col_indices_.push_back(j);
            m.values_.push_back(v);
        }
        m.row_offsets_[i + 1] = m.values_.size();
    }
    return m;
}

SparseMatrix SparseMatrix::from_csr(std::size_t nrows, std::size_t ncols, std::vector<std::size_t> row_offsets,
                                    std::vector<std::size_t> col_indices, std::vector<double> values)
{
    if (row_offsets.size() != nrows + 1 || row_offsets.front() != 0 || row_offsets.back() != values.size() ||
        col_indices.size() != values.size()) {
        throw DimensionError("inconsistent CSR arrays");
    }
    std::vector<Triplet> t;
    t.reserve(values.size());
    for (std::size_t i = 0; i < nrows; ++i) {
        if (row_offsets[i + 1] < row_offsets[i]) throw DimensionError("row_offsets must be non-decreasing");
        for (std::size_t k = row_offsets[i]; k < row_offsets[i + 1]; ++k) t.push_back({i, col_indices[k], values[k]});
    }
    return from_triplets(nrows, ncols, std::move(t));
}

SparseMatrix SparseMatrix::identity(std::size_t n)
{
    const Vector ones(n, 1.0);
    return diagonal(ones);
}

SparseMatrix SparseMatrix::diagonal(std::span<const double> d)
{
    SparseMatrix m(d.size(), d.size());
    m.col_indices_.resize(d.size());
    m.values_.assign(d.begin(), d.end());
    std::iota(m.col_indices_.begin(), m.col_indices_.end(), std::size_t{0});
    std::iota(m.row_offsets_.begin(), m.row_offsets_.end(), std::size_t{0});
    return m;
}

double SparseMatrix::at(std::size_t i, std::size_t j) const
{
    const auto first = col_indices_.begin() + static_cast<std::ptrdiff_t>(row_offsets_[i]);
    const auto last = col_indices_.begin() + static_cast<std::ptrdiff_t>(row_offsets_[i + 1]);
    const auto it = std::lower_bound(first, last, j);
    if (it == last || *it != j) return 0.0;
    return values_[static_cast<std::size_t>(it - col_indices_.begin())];
}

Vector SparseMatrix::multiply(std::span<const double> x) const
{
    Vector y(nrows_);
    multiply(x, y);
    return y;
}

void SparseMatrix::multiply(std::span<const double> x, std::span<double> y) const
{
    if (x.size() != ncols_) {
        throw DimensionError("spmv: matrix has " + std::to_string(ncols_) + " columns but vector has length " +
                             std::to_string(x.size()));
    }
    require_size(y.size(), nrows_, "spmv output");
    for (std::size_t i = 0; i < nrows_; ++i) {
        double s = 0.0;
        for (std::size_t k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k) s += values_[k] * x[col_indices_[k]];
        y[i] = s;
    }
}

Vector SparseMatrix::multiply_transpose(std::span<const double> x) const
{
    Vector y(ncols_);
    multiply_transpose(x, y);
    return y;
}

void SparseMatrix::multiply_transpose(std::span<const double> x, std::span<double> y) const
{
    if (x.size() != nrows_) {
        throw DimensionError("spmv_transpose: matrix has " + std::to_string(nrows_) +
                             " rows but vector has length " + std::to_string(x.size()));
    }
    require_size(y.size(), ncols_, "spmv_transpose output");
    std::fill(y.begin(), y.end(), 0.0);
    for (std::size_t i = 0; i < nrows_; ++i) {
        const double xi = x[i];
        for (std::size_t k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k) y[col_indices_[k]] += values_[k] * xi;
    }
}

SparseMatrix SparseMatrix::transpose() const
{
    SparseMatrix t(ncols_, nrows_);
    std::vector<std::size_t> count(ncols_ + 1, 0);
    for (std::size_t j : col_indices_) ++count[j + 1];
    std::partial_sum(count.begin(), count.end(), t.row_offsets_.begin());
    t.col_indices_.resize(nnz());
    t.values_.resize(nnz());
    std::vector<std::size_t> next(t.row_offsets_.begin(), t.row_offsets_.end() - 1);
    for (std::size_t i = 0; i < nrows_; ++i) {
        for (std::size_t k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k) {
            const std::size_t pos = next[col_indices_[k]]++;
            t.col_indices_[pos] = i;
            t.values_[pos] = values_[k];
        }
    }
    return t;
}

Vector SparseMatrix::diagonal_entries() const
{
    Vector d(std::min(nrows_, ncols_), 0.0);
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = at(i, i);
    return d;
}

double SparseMatrix::max_abs() const
{
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

SparseMatrix SparseMatrix::block(std::size_t r0, std::size_t r1, std::size_t c0, std::size_t c1) const
{
    if (r0 > r1 || r1 > nrows_ || c0 > c1 || c1 > ncols_) throw DimensionError("block: range out of bounds");
    SparseMatrix b(r1 - r0, c1 - c0);
    for (std::size_t i = r0; i < r1; ++i) {
        for (std::size_t k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k) {
            const std::size_t j = col_indices_[k];
            if (j >= c0 && j < c1) {
                b.col_indices_.push_back(j - c0);
                b.values_.push_back(values_[k]);
            }
        }
        b.row_offsets_[i - r0 + 1] = b.values_.size();
    }
    return b;
}

std::size_t SparseMatrix::lower_bandwidth() const
{
    std::size_t bw = 0;
    for (std::size_t i = 0; i < nrows_; ++i)
        if (row_offsets_[i] < row_offsets_[i + 1] && col_indices_[row_offsets_[i]] < i)
            bw = std::max(bw, i - col_indices_[row_offsets_[i]]);
    return bw;
}

std::size_t SparseMatrix::upper_bandwidth() const
{
    std::size_t bw = 0;
    for (std::size_t i = 0; i < nrows_; ++i)
        if (row_offsets_[i] < row_offsets_[i + 1] && col_indices_[row_offsets_[i + 1] - 1] > i)
            bw = std::max(bw, col_indices_[row_offsets_[i + 1] - 1] - i);
    return bw;
}

std::vector<double> SparseMatrix::to_dense() const
{
    std::vector<double> d(nrows_ * ncols_, 0.0);
    for (std::size_t i = 0; i < nrows_; ++i)
        for (std::size_t k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k) d[i * ncols_ + col_indices_[k]] = values_[k];
    return d;
}

std::vector<Triplet> SparseMatrix::to_triplets() const
{
    std::vector<Triplet> t;
    t.reserve(nnz());
    for (std::size_t i = 0; i < nrows_; ++i)
        for (std::size_t k = row_offsets_[i]; k < row_offsets_[i + 1]; ++k) t.push_back({i, col_indices_[k], values_[k]});
    return t;
}

SparseMatrix add(const SparseMatrix& a, const SparseMatrix& b, double alpha, double beta)
{
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw DimensionError("add: shapes " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) + " and " +
                             std::to_string(b.rows()) + "x" + std::to_string(b.cols()) + " differ");
    }
    auto t = a.to_triplets();
    for (auto& e : t) e.value *= alpha;
    for (auto e : b.to_triplets()) {
        e.value *= beta;
        t.push_back(e);
    }
    return SparseMatrix::from_triplets(a.rows(), a.cols(), std::move(t));
}

SparseMatrix multiply(const SparseMatrix& a, const SparseMatrix& b)
{
    const Vector ones(a.cols(), 1.0);
    return multiply_scaled(a, ones, b);
}

SparseMatrix multiply_scaled(const SparseMatrix& a, std::span<const double> d, const SparseMatrix& b)
{
    if (a.cols() != b.rows()) {
        throw DimensionError("multiply: inner dimensions " + std::to_string(a.cols()) + " and " +
                             std::to_string(b.rows()) + " differ");
    }
    require_size(d.size(), a.cols(), "multiply_scaled diagonal");
    const auto ao = a.row_offsets();
    const auto ac = a.col_indices();
    const auto av = a.values();
    const auto bo = b.row_offsets();
    const auto bc = b.col_indices();
    const auto bv = b.values();

    // Gustavson's row-by-row product with a dense accumulator.
    std::vector<double> acc(b.cols(), 0.0);
    std::vector<char> used(b.cols(), 0);
    std::vector<std::size_t> pattern;
    std::vector<std::size_t> offsets{0};
    std::vector<std::size_t> cols;
    std::vector<double> vals;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        pattern.clear();
        for (std::size_t ka = ao[i]; ka < ao[i + 1]; ++ka) {
            const std::size_t k = ac[ka];
            const double s = av[ka] * d[k];
            for (std::size_t kb = bo[k]; kb < bo[k + 1]; ++kb) {
                const std::size_t j = bc[kb];
                if (!used[j]) {
                    used[j] = 1;
                    pattern.push_back(j);
                }
                acc[j] += s * bv[kb];
            }
        }
        std::sort(pattern.begin(), pattern.end());
        for (std::size_t j : pattern) {
            cols.push_back(j);
            vals.push_back(acc[j]);
            acc[j] = 0.0;
            used[j] = 0;
        }
        offsets.push_back(cols.size());
    }
    return SparseMatrix::from_csr(a.rows(), b.cols(), std::move(offsets), std::move(cols), std::move(vals));
}

} // namespace uzawa::la

#include "uzawa/linalg/banded_lu.hpp"

#include <lapacke.h>

#include <string>

namespace uzawa::la {

BandedLU::BandedLU(const SparseMatrix& m)
    : n_(m.rows()), kl_(m.lower_bandwidth()), ku_(m.upper_bandwidth())
{
    if (m.rows() != m.cols()) throw DimensionError("BandedLU: matrix must be square");
    const std::size_t ldab = 2 * kl_ + ku_ + 1;
    band_.assign(ldab * n_, 0.0);
    pivots_.assign(n_, 0);

    // Column-major band storage: A(i, j) lives at row kl + ku + i - j of column j.
    const auto offsets = m.row_offsets();
    const auto cols = m.col_indices();
    const auto vals = m.values();
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t k = offsets[i]; k < offsets[i + 1]; ++k) {
            const std::size_t j = cols[k];
            band_[j * ldab + (kl_ + ku_ + i - j)] = vals[k];
        }

    if (n_ == 0) return;
    const lapack_int info =
        LAPACKE_dgbtrf(LAPACK_COL_MAJOR, static_cast<lapack_int>(n_), static_cast<lapack_int>(n_),
                       static_cast<lapack_int>(kl_), static_cast<lapack_int>(ku_), band_.data(),
                       static_cast<lapack_int>(ldab), pivots_.data());
    if (info != 0) {
        throw SolverError("BandedLU: factorization failed (dgbtrf info = " + std::to_string(info) +
                          "); matrix is singular");
    }
}

void BandedLU::solve_in_place(std::span<double> rhs) const
{
    require_size(rhs.size(), n_, "BandedLU::solve");
    if (n_ == 0) return;
    const std::size_t ldab = 2 * kl_ + ku_ + 1;
    const lapack_int info =
        LAPACKE_dgbtrs(LAPACK_COL_MAJOR, 'N', static_cast<lapack_int>(n_), static_cast<lapack_int>(kl_),
                       static_cast<lapack_int>(ku_), 1, band_.data(), static_cast<lapack_int>(ldab),
                       pivots_.data(), rhs.data(), static_cast<lapack_int>(n_));
    if (info != 0) throw SolverError("BandedLU: dgbtrs failed with info = " + std::to_string(info));
}

Vector BandedLU::solve(std::span<const double> rhs) const
{
    Vector x(rhs.begin(), rhs.end());
    solve_in_place(x);
    return x;
}

} // namespace uzawa::la

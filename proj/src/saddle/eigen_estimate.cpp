#include "uzawa/saddle/eigen_estimate.hpp"

#include <lapacke.h>

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace uzawa::saddle {

namespace {

struct Tridiagonal {
    Vector evals;
    std::vector<double> evecs;  // column-major, k x k
};

Tridiagonal eig_tridiagonal(const Vector& alpha, const Vector& beta)
{
    const auto k = static_cast<lapack_int>(alpha.size());
    Tridiagonal t;
    t.evals = alpha;
    Vector e(beta.begin(), beta.begin() + (k > 0 ? k - 1 : 0));
    e.resize(std::max<lapack_int>(k, 1));
    t.evecs.assign(static_cast<std::size_t>(k) * k, 0.0);
    const lapack_int info = LAPACKE_dstev(LAPACK_COL_MAJOR, 'V', k, t.evals.data(), e.data(), t.evecs.data(), k);
    if (info != 0) throw la::SolverError("Lanczos: tridiagonal eigensolver failed (info " + std::to_string(info) + ")");
    return t;
}

} // namespace

SchurEstimate estimate_schur_omega(const fem::SaddleSystem& sys, const EigenOptions& opts)
{
    if (!is_symmetric(sys.A, 1e-10))
        throw std::invalid_argument("estimate_schur_omega: A must be symmetric (Stokes systems only)");
    if (opts.qb == QbKind::LSC) throw std::invalid_argument("estimate_schur_omega: LSC weighting is not supported");

    const std::size_t np = sys.num_pressure();
    const MatrixSolver a_solver(sys.A, opts.inner, opts.inner_tol);
    const SchurPreconditioner w(sys, opts.qb);
    const bool deflate = sys.has_pressure_nullspace();

    auto apply_s = [&](const Vector& x) { return sys.B.multiply(a_solver.solve(sys.B.multiply_transpose(x))); };
    auto w_dot = [&](const Vector& x, const Vector& y) {
        return opts.qb == QbKind::Identity ? la::dot(x, y) : la::dot(x, w.apply(y));
    };

    const Vector ones(np, 1.0);
    const Vector w_ones = opts.qb == QbKind::Identity ? ones : w.apply(ones);
    const double ones_norm2 = la::dot(ones, w_ones);
    auto deflate_ones = [&](Vector& x) {
        if (!deflate) return;
        const double c = la::dot(x, w_ones) / ones_norm2;
        la::axpy(-c, ones, x);
    };

    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    Vector q(np);
    for (double& v : q) v = dist(rng);
    deflate_ones(q);
    la::scale(1.0 / std::sqrt(w_dot(q, q)), q);

    const std::size_t dim = deflate ? np - 1 : np;
    if (dim == 0) throw std::invalid_argument("estimate_schur_omega: pressure space has no nontrivial modes");
    const std::size_t cap = std::min(opts.max_steps, dim);
    std::vector<Vector> basis;
    Vector alpha, beta;

    for (std::size_t j = 0; j < cap; ++j) {
        basis.push_back(q);
        const Vector sq = apply_s(q);
        const double a = la::dot(sq, q);
        alpha.push_back(a);
        Vector r = opts.qb == QbKind::Identity ? sq : w.apply_inverse(sq);
        for (int pass = 0; pass < 2; ++pass) {
            for (const auto& v : basis) la::axpy(-w_dot(r, v), v, r);
            deflate_ones(r);
        }
        const double b = std::sqrt(std::max(w_dot(r, r), 0.0));

        const auto t = eig_tridiagonal(alpha, beta);
        const std::size_t k = alpha.size();
        const double lmin = t.evals.front();
        const double lmax = t.evals.back();
        const double res_min = std::abs(b * t.evecs[(k - 1) + 0 * k]);
        const double res_max = std::abs(b * t.evecs[(k - 1) + (k - 1) * k]);
        const bool exhausted = k == dim || b <= 1e-14 * std::abs(lmax);
        if (exhausted || (k >= 2 && res_min <= opts.rel_tol * std::abs(lmin) && res_max <= opts.rel_tol * lmax)) {
            if (!(lmin > 0.0)) throw la::SolverError("estimate_schur_omega: Schur complement is not positive definite");
            return {lmin, lmax, 2.0 / (lmin + lmax), k};
        }
        beta.push_back(b);
        q = r;
        la::scale(1.0 / b, q);
    }
    throw la::SolverError("estimate_schur_omega: extreme eigenvalues not resolved to " + std::to_string(opts.rel_tol) +
                          " within " + std::to_string(cap) + " Lanczos steps");
}

} // namespace uzawa::saddle

#include "uzawa/saddle/inner_solver.hpp"

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

namespace uzawa::saddle {

std::string_view to_string(InnerMethod m)
{
    return m == InnerMethod::Direct ? "direct" : "krylov";
}

InnerMethod parse_inner_method(std::string_view name)
{
    if (name == "direct") return InnerMethod::Direct;
    if (name == "krylov") return InnerMethod::Krylov;
    throw std::invalid_argument("unknown inner solver '" + std::string(name) + "' (expected direct or krylov)");
}

bool is_symmetric(const SparseMatrix& m, double rel_tol)
{
    if (m.rows() != m.cols()) return false;
    const double scale = m.max_abs();
    const auto diff = la::add(m, m.transpose(), 1.0, -1.0);
    return diff.max_abs() <= rel_tol * std::max(scale, 1e-300);
}

struct MatrixSolver::Impl {
    InnerMethod method;
    double tol;
    std::size_t n;
    bool symmetric;
    // Direct: one or two banded factors covering consecutive diagonal blocks.
    std::vector<la::BandedLU> blocks;
    std::vector<std::size_t> block_start;
    // Krylov
    SparseMatrix matrix;
    Vector inv_diag;

    void solve(std::span<const double> rhs, std::span<double> out) const
    {
        la::require_size(rhs.size(), n, "MatrixSolver rhs");
        la::require_size(out.size(), n, "MatrixSolver output");
        if (method == InnerMethod::Direct) {
            std::copy(rhs.begin(), rhs.end(), out.begin());
            for (std::size_t b = 0; b < blocks.size(); ++b)
                blocks[b].solve_in_place(out.subspan(block_start[b], blocks[b].size()));
            return;
        }
        const LinearOperator a(n, n, [this](std::span<const double> x, std::span<double> y) { matrix.multiply(x, y); });
        if (symmetric) {
            la::CgOptions opts;
            opts.tol = tol;
            opts.max_iters = 20 * n + 100;
            const Vector d = inv_diag;
            opts.preconditioner = LinearOperator(n, n, [d](std::span<const double> x, std::span<double> y) {
                for (std::size_t i = 0; i < x.size(); ++i) y[i] = d[i] * x[i];
            });
            auto [x, rep] = la::cg_solve(a, rhs, opts);
            if (!rep.converged)
                throw la::SolverError("inner CG solve missed tolerance: residual " +
                                      std::to_string(rep.final_relative_residual));
            std::copy(x.begin(), x.end(), out.begin());
            return;
        }
        // Right Jacobi scaling keeps the true residual as the GMRES target.
        const Vector d = inv_diag;
        const SparseMatrix& m = matrix;
        LinearOperator scaled(n, n, [&m, d](std::span<const double> y, std::span<double> z) {
            Vector t(y.size());
            for (std::size_t i = 0; i < y.size(); ++i) t[i] = d[i] * y[i];
            m.multiply(t, z);
        });
        la::GmresOptions opts;
        opts.restart = 200;
        opts.tol = tol;
        opts.max_iters = 20 * n + 1000;
        const Vector zero(n, 0.0);
        auto [y, rep] = la::gmres_solve(scaled, rhs, zero, opts);
        if (!rep.converged)
            throw la::SolverError("inner GMRES solve missed tolerance: residual " +
                                  std::to_string(rep.final_relative_residual));
        for (std::size_t i = 0; i < n; ++i) out[i] = d[i] * y[i];
    }
};

MatrixSolver::MatrixSolver(const SparseMatrix& m, InnerMethod method, double tol)
{
    if (m.rows() != m.cols()) throw la::DimensionError("MatrixSolver: matrix must be square");
    auto impl = std::make_shared<Impl>();
    impl->method = method;
    impl->tol = tol;
    impl->n = m.rows();
    impl->symmetric = is_symmetric(m);
    if (method == InnerMethod::Direct) {
        const std::size_t n = m.rows();
        const std::size_t half = n / 2;
        const bool split = n >= 2 && n % 2 == 0 && m.block(0, half, half, n).nnz() == 0 &&
                           m.block(half, n, 0, half).nnz() == 0;
        if (split) {
            impl->blocks.emplace_back(m.block(0, half, 0, half));
            impl->blocks.emplace_back(m.block(half, n, half, n));
            impl->block_start = {0, half};
        } else {
            impl->blocks.emplace_back(m);
            impl->block_start = {0};
        }
    } else {
        impl->matrix = m;
        impl->inv_diag = m.diagonal_entries();
        for (double& v : impl->inv_diag) {
            if (v == 0.0) throw la::SolverError("MatrixSolver: zero diagonal entry, Jacobi scaling unavailable");
            v = 1.0 / v;
        }
    }
    impl_ = std::move(impl);
}

Vector MatrixSolver::solve(std::span<const double> rhs) const
{
    Vector out(impl_->n);
    impl_->solve(rhs, out);
    return out;
}

void MatrixSolver::solve(std::span<const double> rhs, std::span<double> out) const
{
    impl_->solve(rhs, out);
}

LinearOperator MatrixSolver::inverse_operator() const
{
    auto impl = impl_;
    return {impl->n, impl->n, [impl](std::span<const double> x, std::span<double> y) { impl->solve(x, y); }};
}

std::size_t MatrixSolver::size() const noexcept
{
    return impl_->n;
}

bool MatrixSolver::symmetric() const noexcept
{
    return impl_->symmetric;
}

} // namespace uzawa::saddle

#include "uzawa/linalg/krylov.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace uzawa::la {

namespace {

Vector residual(const LinearOperator& m, std::span<const double> b, std::span<const double> x)
{
    Vector r = m(x);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = b[i] - r[i];
    return r;
}

} // namespace

std::pair<Vector, SolveReport> cg_solve(const LinearOperator& m, std::span<const double> b, const CgOptions& opts)
{
    if (m.rows() != m.cols()) throw DimensionError("cg_solve: operator must be square");
    require_size(b.size(), m.rows(), "cg_solve rhs");
    if (!(opts.tol > 0.0)) throw std::invalid_argument("cg_solve: tol must be positive");

    const std::size_t n = b.size();
    SolveReport report;
    Vector x(n, 0.0);
    const double bnorm = norm2(b);
    if (bnorm == 0.0) {
        report.converged = true;
        report.residual_history.push_back(0.0);
        return {x, report};
    }

    auto project = [&](std::span<double> v) {
        if (opts.project) opts.project(v);
    };
    auto precondition = [&](const Vector& r) {
        Vector z = opts.preconditioner ? (*opts.preconditioner)(r) : r;
        project(z);
        return z;
    };

    Vector r(b.begin(), b.end());
    project(r);
    report.residual_history.push_back(norm2(r) / bnorm);

    // A few cycles guard against drift between the recursive and true residual.
    constexpr int max_cycles = 5;
    for (int cycle = 0; cycle < max_cycles; ++cycle) {
        if (report.residual_history.back() <= opts.tol) break;
        Vector z = precondition(r);
        Vector p = z;
        double rz = dot(r, z);
        Vector q(n);
        while (report.iterations < opts.max_iters) {
            m.apply(p, q);
            project(q);
            const double pq = dot(p, q);
            if (!(pq > 0.0)) {
                throw SolverError("cg_solve: non-positive curvature p^T M p = " + std::to_string(pq) +
                                  " at iteration " + std::to_string(report.iterations) +
                                  "; operator is not positive definite");
            }
            const double alpha = rz / pq;
            axpy(alpha, p, x);
            axpy(-alpha, q, r);
            ++report.iterations;
            const double res = norm2(r) / bnorm;
            report.residual_history.push_back(res);
            if (res <= opts.tol) break;
            z = precondition(r);
            const double rz_new = dot(r, z);
            const double beta = rz_new / rz;
            rz = rz_new;
            for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
        }
        r = residual(m, b, x);
        project(r);
        report.residual_history.back() = norm2(r) / bnorm;
        if (report.iterations >= opts.max_iters) break;
    }
    report.final_relative_residual = report.residual_history.back();
    report.converged = report.final_relative_residual <= opts.tol;
    return {x, report};
}

std::pair<Vector, SolveReport> gmres_solve(const LinearOperator& m, std::span<const double> b,
                                           std::span<const double> x0, const GmresOptions& opts)
{
    if (m.rows() != m.cols()) throw DimensionError("gmres_solve: operator must be square");
    require_size(b.size(), m.rows(), "gmres_solve rhs");
    require_size(x0.size(), m.rows(), "gmres_solve initial guess");
    if (opts.restart == 0) throw std::invalid_argument("gmres_solve: restart must be >= 1");

    const std::size_t n = b.size();
    SolveReport report;
    const double bnorm = norm2(b);
    if (bnorm == 0.0) {
        report.converged = true;
        report.residual_history.push_back(0.0);
        return {Vector(n, 0.0), report};
    }

    Vector x(x0.begin(), x0.end());
    Vector r = residual(m, b, x);
    double beta = norm2(r);
    report.residual_history.push_back(beta / bnorm);

    const std::size_t kmax = opts.restart;
    std::vector<Vector> basis(kmax + 1, Vector(n));
    // Hessenberg stored column-major: h[j] holds column j (length kmax+1).
    std::vector<Vector> h(kmax, Vector(kmax + 1, 0.0));
    Vector cs(kmax), sn(kmax), g(kmax + 1), y(kmax);
    Vector w(n);

    auto back_substitute = [&](std::size_t k) {
        for (std::size_t ii = k; ii-- > 0;) {
            double s = g[ii];
            for (std::size_t jj = ii + 1; jj < k; ++jj) s -= h[jj][ii] * y[jj];
            y[ii] = s / h[ii][ii];
        }
    };

    while (report.residual_history.back() > opts.tol && report.iterations < opts.max_iters) {
        const double cycle_start = beta;
        for (std::size_t i = 0; i < n; ++i) basis[0][i] = r[i] / beta;
        std::fill(g.begin(), g.end(), 0.0);
        g[0] = beta;

        std::size_t k = 0;
        bool breakdown = false;
        while (k < kmax && report.iterations < opts.max_iters) {
            const std::size_t j = k;
            m.apply(basis[j], w);
            std::fill(h[j].begin(), h[j].end(), 0.0);
            const double norm_before = norm2(w);
            for (std::size_t i = 0; i <= j; ++i) {
                const double hij = dot(w, basis[i]);
                h[j][i] += hij;
                axpy(-hij, basis[i], w);
            }
            double hnext = norm2(w);
            if (hnext < 0.7071 * norm_before) {
                // Second Gram-Schmidt pass when cancellation is severe.
                for (std::size_t i = 0; i <= j; ++i) {
                    const double hij = dot(w, basis[i]);
                    h[j][i] += hij;
                    axpy(-hij, basis[i], w);
                }
                hnext = norm2(w);
            }
            h[j][j + 1] = hnext;

            for (std::size_t i = 0; i < j; ++i) {
                const double t = cs[i] * h[j][i] + sn[i] * h[j][i + 1];
                h[j][i + 1] = -sn[i] * h[j][i] + cs[i] * h[j][i + 1];
                h[j][i] = t;
            }
            const double denom = std::hypot(h[j][j], h[j][j + 1]);
            cs[j] = denom == 0.0 ? 1.0 : h[j][j] / denom;
            sn[j] = denom == 0.0 ? 0.0 : h[j][j + 1] / denom;
            h[j][j] = denom;
            h[j][j + 1] = 0.0;
            g[j + 1] = -sn[j] * g[j];
            g[j] = cs[j] * g[j];

            ++k;
            ++report.iterations;
            breakdown = hnext <= 1e-14 * norm_before;
            const double res = std::abs(g[k]) / bnorm;
            report.residual_history.push_back(res);

            if (opts.observer) {
                back_substitute(k);
                Vector xk = x;
                for (std::size_t jj = 0; jj < k; ++jj) axpy(y[jj], basis[jj], xk);
                opts.observer(report.iterations, xk);
            }
            if (res <= opts.tol || breakdown) break;
            for (std::size_t i = 0; i < n; ++i) basis[k][i] = w[i] / hnext;
        }

        back_substitute(k);
        for (std::size_t jj = 0; jj < k; ++jj) axpy(y[jj], basis[jj], x);
        r = residual(m, b, x);
        beta = norm2(r);
        report.residual_history.back() = beta / bnorm;
        if (beta / bnorm <= opts.tol) break;
        if (!breakdown && beta >= cycle_start * (1.0 - 1e-12)) {
            report.stagnated = true;
            break;
        }
        if (beta == 0.0) break;
    }
    report.final_relative_residual = report.residual_history.back();
    report.converged = report.final_relative_residual <= opts.tol;
    return {x, report};
}

} // namespace uzawa::la

#include "uzawa/saddle/uzawa.hpp"

#include <numeric>
#include <stdexcept>
#include <string>

namespace uzawa::saddle {

void UzawaConfig::validate() const
{
    if (!(omega > 0.0)) throw std::invalid_argument("UzawaConfig: omega must be positive, got " + std::to_string(omega));
    if (!(inner_tol > 0.0 && inner_tol <= 1e-6))
        throw std::invalid_argument("UzawaConfig: inner_tol must lie in (0, 1e-6], got " + std::to_string(inner_tol));
    if (qa == QaKind::GivenMatrix && !qa_matrix)
        throw std::invalid_argument("UzawaConfig: qa = GivenMatrix requires qa_matrix");
}

struct PreconditionedUzawa::Impl {
    UzawaConfig cfg;
    std::size_t nv = 0;
    std::size_t np = 0;
    SparseMatrix a;
    SparseMatrix b;
    Vector f;
    Vector g;
    bool nullspace = false;
    MatrixSolver a_solver;
    std::optional<MatrixSolver> qa_solver;  // GivenMatrix only
    SchurPreconditioner qb;

    Impl(const fem::SaddleSystem& sys, const UzawaConfig& c)
        : cfg(c),
          nv(sys.num_velocity()),
          np(sys.num_pressure()),
          a(sys.A),
          b(sys.B),
          f(sys.f),
          g(sys.g),
          nullspace(sys.has_pressure_nullspace()),
          a_solver(sys.A, c.inner, c.inner_tol),
          qb(sys, c.qb, c.inner_tol)
    {
        if (cfg.qa == QaKind::GivenMatrix) {
            const auto& q = *cfg.qa_matrix;
            if (q.rows() != nv || q.cols() != nv)
                throw la::DimensionError("UzawaConfig: Q_A is " + std::to_string(q.rows()) + "x" +
                                         std::to_string(q.cols()) + ", expected " + std::to_string(nv) + "x" +
                                         std::to_string(nv));
            qa_solver.emplace(q, cfg.inner, cfg.inner_tol);
        }
    }

    Vector solve_qa(std::span<const double> r) const
    {
        return qa_solver ? qa_solver->solve(r) : a_solver.solve(r);
    }

    Vector pressure_update(std::span<const double> p, std::span<const double> u_next) const
    {
        Vector r = b.multiply(u_next);
        la::axpy(-1.0, g, r);
        const Vector z = qb.apply_inverse(r);
        Vector out(p.begin(), p.end());
        la::axpy(cfg.omega, z, out);
        return out;
    }

    std::pair<Vector, Vector> step(std::span<const double> u, std::span<const double> p) const
    {
        la::require_size(u.size(), nv, "Uzawa step velocity");
        la::require_size(p.size(), np, "Uzawa step pressure");
        Vector r = f;
        la::axpy(-1.0, b.multiply_transpose(p), r);
        Vector u_next;
        if (cfg.qa == QaKind::ExactA) {
            u_next = a_solver.solve(r);
        } else {
            la::axpy(-1.0, a.multiply(u), r);
            u_next = Vector(u.begin(), u.end());
            la::axpy(1.0, solve_qa(r), u_next);
        }
        Vector p_next = pressure_update(p, u_next);
        return {std::move(u_next), std::move(p_next)};
    }

    // M^{-1} (r1, r2) = (y1, omega Q_B^{-1} (B y1 - r2)), y1 = Q_A^{-1} r1
    void m_inverse(std::span<const double> x, std::span<double> y) const
    {
        const auto r1 = x.first(nv);
        const auto r2 = x.subspan(nv);
        const Vector y1 = solve_qa(r1);
        Vector t = b.multiply(y1);
        la::axpy(-1.0, r2, t);
        const Vector y2 = qb.apply_inverse(t);
        std::copy(y1.begin(), y1.end(), y.begin());
        for (std::size_t i = 0; i < np; ++i) y[nv + i] = cfg.omega * y2[i];
    }

    Vector qa_apply(std::span<const double> u) const
    {
        return qa_solver ? cfg.qa_matrix->multiply(u) : a.multiply(u);
    }
};

PreconditionedUzawa::PreconditionedUzawa(const fem::SaddleSystem& sys, const UzawaConfig& cfg)
{
    cfg.validate();
    impl_ = std::make_shared<const Impl>(sys, cfg);
}

std::size_t PreconditionedUzawa::num_velocity() const noexcept
{
    return impl_->nv;
}

std::size_t PreconditionedUzawa::num_pressure() const noexcept
{
    return impl_->np;
}

const UzawaConfig& PreconditionedUzawa::config() const noexcept
{
    return impl_->cfg;
}

std::pair<Vector, Vector> PreconditionedUzawa::step(std::span<const double> u, std::span<const double> p) const
{
    return impl_->step(u, p);
}

Vector PreconditionedUzawa::evaluate(std::span<const double> xi) const
{
    la::require_size(xi.size(), size(), "Uzawa fixed-point map input");
    auto [u, p] = impl_->step(xi.first(impl_->nv), xi.subspan(impl_->nv));
    return la::concat(u, p);
}

accel::FixedPointMap PreconditionedUzawa::fixed_point_map() const
{
    const PreconditionedUzawa self = *this;
    return {size(), [self](std::span<const double> xi) { return self.evaluate(xi); }};
}

SplitOperators PreconditionedUzawa::split_operators() const
{
    auto impl = impl_;
    const std::size_t n = size();
    const std::size_t nv = impl->nv;
    const std::size_t np = impl->np;

    LinearOperator m_apply(n, n, [impl, nv, np](std::span<const double> x, std::span<double> y) {
        const auto u = x.first(nv);
        const auto p = x.subspan(nv);
        const Vector top = impl->qa_apply(u);
        const Vector bu = impl->b.multiply(u);
        const Vector qp = impl->qb.apply(p);
        std::copy(top.begin(), top.end(), y.begin());
        for (std::size_t i = 0; i < np; ++i) y[nv + i] = bu[i] - qp[i] / impl->cfg.omega;
    });
    LinearOperator m_inv(n, n, [impl](std::span<const double> x, std::span<double> y) { impl->m_inverse(x, y); });
    LinearOperator n_apply(n, n, [impl, nv, np](std::span<const double> x, std::span<double> y) {
        const auto u = x.first(nv);
        const auto p = x.subspan(nv);
        Vector top = impl->qa_apply(u);
        la::axpy(-1.0, impl->a.multiply(u), top);
        la::axpy(-1.0, impl->b.multiply_transpose(p), top);
        const Vector qp = impl->qb.apply(p);
        std::copy(top.begin(), top.end(), y.begin());
        for (std::size_t i = 0; i < np; ++i) y[nv + i] = -qp[i] / impl->cfg.omega;
    });
    return {std::move(m_apply), std::move(m_inv), std::move(n_apply)};
}

std::pair<LinearOperator, Vector> PreconditionedUzawa::left_preconditioned_system() const
{
    auto impl = impl_;
    const std::size_t n = size();
    LinearOperator op(n, n, [impl](std::span<const double> x, std::span<double> y) {
        const std::size_t nv = impl->nv;
        Vector ax(x.size());
        impl->a.multiply(x.first(nv), std::span<double>(ax).first(nv));
        const Vector btp = impl->b.multiply_transpose(x.subspan(nv));
        for (std::size_t i = 0; i < nv; ++i) ax[i] += btp[i];
        impl->b.multiply(x.first(nv), std::span<double>(ax).subspan(nv));
        impl->m_inverse(ax, y);
    });
    Vector rhs(n);
    impl->m_inverse(la::concat(impl->f, impl->g), rhs);
    return {std::move(op), std::move(rhs)};
}

std::pair<LinearOperator, Vector> PreconditionedUzawa::pgmres_system() const
{
    if (impl_->cfg.qa != QaKind::ExactA) throw std::invalid_argument("pgmres_operator: requires Q_A = A");
    auto impl = impl_;
    const std::size_t n = size();
    LinearOperator op(n, n, [impl](std::span<const double> x, std::span<double> y) {
        const std::size_t nv = impl->nv;
        const std::size_t np = impl->np;
        const auto p = x.subspan(nv);
        const Vector w = impl->a_solver.solve(impl->b.multiply_transpose(p));  // A^{-1} B^T p
        const Vector z = impl->qb.apply_inverse(impl->b.multiply(w));
        for (std::size_t i = 0; i < nv; ++i) y[i] = x[i] + w[i];
        for (std::size_t i = 0; i < np; ++i) y[nv + i] = impl->cfg.omega * z[i];
    });
    const Vector af = impl->a_solver.solve(impl->f);
    Vector t = impl->b.multiply(af);
    la::axpy(-1.0, impl->g, t);
    Vector z = impl->qb.apply_inverse(t);
    la::scale(impl->cfg.omega, z);
    return {std::move(op), la::concat(af, z)};
}

SchurRouteResult PreconditionedUzawa::solve_schur(double tol, std::size_t max_iters) const
{
    if (impl_->cfg.qa != QaKind::ExactA) throw std::invalid_argument("schur_solve_route: requires Q_A = A");
    auto impl = impl_;
    const std::size_t np = impl->np;
    const LinearOperator s(np, np, [impl](std::span<const double> x, std::span<double> y) {
        const Vector w = impl->a_solver.solve(impl->b.multiply_transpose(x));
        impl->b.multiply(w, y);
    });
    const Vector af = impl->a_solver.solve(impl->f);
    Vector rhs = impl->b.multiply(af);
    la::axpy(-1.0, impl->g, rhs);
    if (impl->nullspace && np > 0) {
        const double mean = std::accumulate(rhs.begin(), rhs.end(), 0.0) / static_cast<double>(np);
        for (double& v : rhs) v -= mean;
    }

    SchurRouteResult result;
    if (impl->a_solver.symmetric() && impl->qb.is_spd()) {
        la::CgOptions opts;
        opts.tol = tol;
        opts.max_iters = max_iters;
        if (impl->cfg.qb != QbKind::Identity) opts.preconditioner = impl->qb.inverse_operator();
        auto [p, rep] = la::cg_solve(s, rhs, opts);
        result.p = std::move(p);
        result.report = std::move(rep);
    } else {
        const LinearOperator qinv = impl->qb.inverse_operator();
        const LinearOperator ps(np, np, [&s, &qinv](std::span<const double> x, std::span<double> y) {
            const Vector t = s(x);
            qinv.apply(t, y);
        });
        const Vector prhs = qinv(rhs);
        la::GmresOptions opts;
        opts.restart = max_iters;
        opts.tol = tol;
        opts.max_iters = max_iters;
        const Vector zero(np, 0.0);
        auto [p, rep] = la::gmres_solve(ps, prhs, zero, opts);
        result.p = std::move(p);
        result.report = std::move(rep);
    }
    Vector r = impl->f;
    la::axpy(-1.0, impl->b.multiply_transpose(result.p), r);
    result.u = impl->a_solver.solve(r);
    return result;
}

Vector PreconditionedUzawa::solve_a(std::span<const double> r) const
{
    return impl_->a_solver.solve(r);
}

const SchurPreconditioner& PreconditionedUzawa::schur_preconditioner() const
{
    return impl_->qb;
}

std::pair<Vector, Vector> uzawa_step(const fem::SaddleSystem& sys, const UzawaConfig& cfg, std::span<const double> u,
                                     std::span<const double> p)
{
    return PreconditionedUzawa(sys, cfg).step(u, p);
}

accel::FixedPointMap uzawa_fixed_point_map(const fem::SaddleSystem& sys, const UzawaConfig& cfg)
{
    return PreconditionedUzawa(sys, cfg).fixed_point_map();
}

std::pair<LinearOperator, Vector> pgmres_operator(const fem::SaddleSystem& sys, const UzawaConfig& cfg)
{
    return PreconditionedUzawa(sys, cfg).pgmres_system();
}

SchurRouteResult schur_solve_route(const fem::SaddleSystem& sys, const UzawaConfig& cfg, double tol)
{
    return PreconditionedUzawa(sys, cfg).solve_schur(tol);
}

} // namespace uzawa::saddle

#include "uzawa/saddle/methods.hpp"

namespace uzawa::saddle {

double saddle_relative_residual(const fem::SaddleSystem& sys, std::span<const double> xi)
{
    const double bn = la::norm2(sys.rhs());
    const double rn = la::norm2(sys.residual(xi));
    return bn > 0.0 ? rn / bn : rn;
}

namespace {

MethodResult from_gmres(Vector x, la::SolveReport rep)
{
    MethodResult r;
    r.solution = std::move(x);
    r.status = rep.converged ? accel::Status::Converged : accel::Status::MaxIterations;
    r.report = std::move(rep);
    return r;
}

} // namespace

MethodResult run_uzawa(const fem::SaddleSystem& sys, const PreconditionedUzawa& uzawa, std::size_t window,
                       const StopRule& stop)
{
    accel::IterationOptions opts;
    opts.tol = stop.tol;
    opts.max_iters = stop.max_iters;
    opts.divergence_factor = stop.divergence_factor;
    const double bn = la::norm2(sys.rhs());
    auto a = std::make_shared<const fem::SaddleSystem>(sys);
    opts.residual = [a, bn](std::span<const double> xi) {
        const double rn = la::norm2(a->residual(xi));
        return bn > 0.0 ? rn / bn : rn;
    };
    const auto g = uzawa.fixed_point_map();
    const Vector xi0(uzawa.size(), 0.0);
    const auto res = window == 0 ? accel::fixed_point_solve(g, xi0, opts) : accel::aa_solve(g, xi0, window, opts);
    return {res.solution, res.status, res.report};
}

MethodResult run_pgmres(const PreconditionedUzawa& uzawa, std::size_t restart, const StopRule& stop,
                        std::function<void(std::size_t, const Vector&)> observer)
{
    auto [op, rhs] = uzawa.config().qa == QaKind::ExactA ? uzawa.pgmres_system() : uzawa.left_preconditioned_system();
    la::GmresOptions opts;
    opts.restart = restart;
    opts.tol = stop.tol;
    opts.max_iters = stop.max_iters;
    opts.observer = std::move(observer);
    const Vector x0(uzawa.size(), 0.0);
    auto [x, rep] = la::gmres_solve(op, rhs, x0, opts);
    return from_gmres(std::move(x), std::move(rep));
}

MethodResult run_rdf(const fem::SaddleSystem& sys, const RdfConfig& cfg, std::size_t restart, const StopRule& stop)
{
    const LinearOperator m_inv = rdf_preconditioner(sys, cfg);
    auto [k, b] = alternate_saddle_system(sys);
    const LinearOperator pk(k.rows(), k.cols(), [&](std::span<const double> x, std::span<double> y) {
        const Vector t = k(x);
        m_inv.apply(t, y);
    });
    const Vector pb = m_inv(b);
    la::GmresOptions opts;
    opts.restart = restart;
    opts.tol = stop.tol;
    opts.max_iters = stop.max_iters;
    const Vector x0(sys.size(), 0.0);
    auto [x, rep] = la::gmres_solve(pk, pb, x0, opts);
    return from_gmres(std::move(x), std::move(rep));
}

} // namespace uzawa::saddle

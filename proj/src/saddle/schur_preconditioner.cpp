#include "uzawa/saddle/schur_preconditioner.hpp"

#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>

namespace uzawa::saddle {

std::string_view to_string(QbKind k)
{
    switch (k) {
    case QbKind::Identity: return "identity";
    case QbKind::PressureMass: return "mass";
    case QbKind::LSC: return "lsc";
    }
    return "?";
}

QbKind parse_qb(std::string_view name)
{
    if (name == "identity") return QbKind::Identity;
    if (name == "mass") return QbKind::PressureMass;
    if (name == "lsc") return QbKind::LSC;
    throw std::invalid_argument("unknown Q_B '" + std::string(name) + "' (expected identity, mass or lsc)");
}

namespace {

void remove_mean(std::span<double> v)
{
    if (v.empty()) return;
    const double mean = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
    for (double& x : v) x -= mean;
}

} // namespace

struct SchurPreconditioner::Impl {
    QbKind kind;
    std::size_t np;
    double tol;
    bool nullspace = false;

    // PressureMass
    SparseMatrix mass;
    std::optional<la::BandedLU> mass_lu;

    // LSC
    SparseMatrix b;
    SparseMatrix a;
    Vector minv;
    SparseMatrix poisson;  // B M^{-1} B^T
    Vector poisson_inv_diag;

    Vector poisson_solve(std::span<const double> r) const
    {
        const LinearOperator op(np, np, [this](std::span<const double> x, std::span<double> y) { poisson.multiply(x, y); });
        la::CgOptions opts;
        opts.tol = tol;
        opts.max_iters = 20 * np + 100;
        const Vector d = poisson_inv_diag;
        opts.preconditioner = LinearOperator(np, np, [d](std::span<const double> x, std::span<double> y) {
            for (std::size_t i = 0; i < x.size(); ++i) y[i] = d[i] * x[i];
        });
        if (nullspace) opts.project = remove_mean;
        Vector rhs(r.begin(), r.end());
        if (nullspace) remove_mean(rhs);
        auto [x, rep] = la::cg_solve(op, rhs, opts);
        if (!rep.converged) {
            throw la::SolverError("LSC: Poisson-type solve with B M^{-1} B^T stalled at relative residual " +
                                  std::to_string(rep.final_relative_residual));
        }
        return x;
    }

    // B M^{-1} A M^{-1} B^T y
    Vector middle(std::span<const double> y) const
    {
        Vector t = b.multiply_transpose(y);
        for (std::size_t i = 0; i < t.size(); ++i) t[i] *= minv[i];
        Vector s = a.multiply(t);
        for (std::size_t i = 0; i < s.size(); ++i) s[i] *= minv[i];
        return b.multiply(s);
    }

    Vector apply_inverse(std::span<const double> r) const
    {
        la::require_size(r.size(), np, "Q_B^{-1} input");
        switch (kind) {
        case QbKind::Identity: return Vector(r.begin(), r.end());
        case QbKind::PressureMass: return mass_lu->solve(r);
        case QbKind::LSC: {
            const Vector y = poisson_solve(r);
            const Vector z = middle(y);
            return poisson_solve(z);
        }
        }
        return {};
    }

    Vector apply(std::span<const double> p) const
    {
        la::require_size(p.size(), np, "Q_B input");
        switch (kind) {
        case QbKind::Identity: return Vector(p.begin(), p.end());
        case QbKind::PressureMass: return mass.multiply(p);
        case QbKind::LSC: {
            // Q_B = P F^{-1} P with F = B M^{-1} A M^{-1} B^T.
            const Vector pp = poisson.multiply(p);
            const LinearOperator f(np, np, [this](std::span<const double> x, std::span<double> y) {
                const Vector m = middle(x);
                std::copy(m.begin(), m.end(), y.begin());
            });
            la::GmresOptions opts;
            opts.restart = np;
            opts.tol = 1e-13;
            opts.max_iters = 4 * np;
            const Vector zero(np, 0.0);
            auto [y, rep] = la::gmres_solve(f, pp, zero, opts);
            if (!rep.converged && rep.final_relative_residual > 1e-10)
                throw la::SolverError("LSC: solve with B M^{-1} A M^{-1} B^T failed");
            if (nullspace) remove_mean(y);
            return poisson.multiply(y);
        }
        }
        return {};
    }
};

SchurPreconditioner::SchurPreconditioner(const fem::SaddleSystem& sys, QbKind kind, double inner_tol)
{
    auto impl = std::make_shared<Impl>();
    impl->kind = kind;
    impl->np = sys.num_pressure();
    impl->tol = inner_tol;
    impl->nullspace = sys.has_pressure_nullspace();
    switch (kind) {
    case QbKind::Identity: break;
    case QbKind::PressureMass:
        impl->mass = sys.Mp;
        impl->mass_lu.emplace(sys.Mp);
        break;
    case QbKind::LSC: {
        for (double m : sys.Mv_diag)
            if (!(m > 0.0)) throw std::invalid_argument("LSC: velocity mass diagonal must be strictly positive");
        impl->b = sys.B;
        impl->a = sys.A;
        impl->minv.resize(sys.Mv_diag.size());
        for (std::size_t i = 0; i < sys.Mv_diag.size(); ++i) impl->minv[i] = 1.0 / sys.Mv_diag[i];
        impl->poisson = la::multiply_scaled(sys.B, impl->minv, sys.B.transpose());
        impl->poisson_inv_diag = impl->poisson.diagonal_entries();
        for (double& d : impl->poisson_inv_diag) {
            if (!(d > 0.0)) throw la::SolverError("LSC: B M^{-1} B^T has a non-positive diagonal entry");
            d = 1.0 / d;
        }
        break;
    }
    }
    impl_ = std::move(impl);
}

QbKind SchurPreconditioner::kind() const noexcept
{
    return impl_->kind;
}

std::size_t SchurPreconditioner::size() const noexcept
{
    return impl_->np;
}

Vector SchurPreconditioner::apply_inverse(std::span<const double> r) const
{
    return impl_->apply_inverse(r);
}

Vector SchurPreconditioner::apply(std::span<const double> p) const
{
    return impl_->apply(p);
}

LinearOperator SchurPreconditioner::inverse_operator() const
{
    auto impl = impl_;
    return {impl->np, impl->np, [impl](std::span<const double> x, std::span<double> y) {
                const Vector z = impl->apply_inverse(x);
                std::copy(z.begin(), z.end(), y.begin());
            }};
}

bool SchurPreconditioner::is_spd() const noexcept
{
    return impl_->kind != QbKind::LSC;
}

Vector lsc_apply(const fem::SaddleSystem& sys, std::span<const double> r, double inner_tol)
{
    return SchurPreconditioner(sys, QbKind::LSC, inner_tol).apply_inverse(r);
}

} // namespace uzawa::saddle

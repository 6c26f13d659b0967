#include "uzawa/accel/anderson.hpp"

#include "uzawa/linalg/dense.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>

namespace uzawa::accel {

Vector FixedPointMap::operator()(std::span<const double> xi) const
{
    la::require_size(xi.size(), dimension, "FixedPointMap input");
    Vector out = eval(xi);
    la::require_size(out.size(), dimension, "FixedPointMap output");
    return out;
}

AndersonAccelerator::AndersonAccelerator(std::size_t depth) : depth_(depth)
{
    if (depth == 0) throw std::invalid_argument("AndersonAccelerator: depth m must be at least 1");
}

void AndersonAccelerator::reset()
{
    g_.clear();
    f_.clear();
    alpha_.clear();
    steps_ = 0;
}

Vector AndersonAccelerator::update(std::span<const double> xi, std::span<const double> g_xi)
{
    la::require_size(g_xi.size(), xi.size(), "AndersonAccelerator::update");
    if (!la::all_finite(g_xi)) throw la::SolverError("Anderson acceleration: fixed-point map returned non-finite values");
    if (!g_.empty()) la::require_size(xi.size(), g_.back().size(), "AndersonAccelerator::update");

    g_.emplace_back(g_xi.begin(), g_xi.end());
    f_.push_back(la::subtract(g_xi, xi));
    while (g_.size() > depth_ + 1) {
        g_.pop_front();
        f_.pop_front();
    }
    ++steps_;

    const std::size_t n = xi.size();
    Vector gamma;
    while (true) {
        const std::size_t mk = g_.size() - 1;
        if (mk == 0) {
            alpha_.assign(1, 1.0);
            return g_.back();
        }
        // Difference columns, newest first, so the guard trims the oldest history.
        la::DenseMatrix df(n, mk);
        for (std::size_t c = 0; c < mk; ++c) {
            const std::size_t j = mk - 1 - c;
            auto col = df.column(c);
            for (std::size_t i = 0; i < n; ++i) col[i] = f_[j + 1][i] - f_[j][i];
        }
        const auto ls = la::least_squares(df, f_.back());
        if (ls.dropped.empty()) {
            gamma = ls.x;
            break;
        }
        const std::size_t first_bad = *std::min_element(ls.dropped.begin(), ls.dropped.end());
        const std::size_t remove = mk - first_bad;
        for (std::size_t r = 0; r < remove; ++r) {
            g_.pop_front();
            f_.pop_front();
        }
        dropped_ += remove;
    }

    const std::size_t mk = g_.size() - 1;
    // gamma_old[i] multiplies (f_{i+1} - f_i) with i counted from the oldest entry.
    Vector gamma_old(mk);
    for (std::size_t c = 0; c < mk; ++c) gamma_old[mk - 1 - c] = gamma[c];

    Vector next = g_.back();
    for (std::size_t i = 0; i < mk; ++i) {
        const double s = gamma_old[i];
        for (std::size_t t = 0; t < n; ++t) next[t] -= s * (g_[i + 1][t] - g_[i][t]);
    }

    alpha_.assign(mk + 1, 0.0);
    alpha_[0] = gamma_old[0];
    for (std::size_t i = 1; i < mk; ++i) alpha_[i] = gamma_old[i] - gamma_old[i - 1];
    alpha_[mk] = 1.0 - gamma_old[mk - 1];
    return next;
}

Vector aa_step(AcceleratorState& state, const FixedPointMap& g, std::span<const double> xi)
{
    const Vector gx = g(xi);
    return state.update(xi, gx);
}

std::string_view to_string(Status s)
{
    switch (s) {
    case Status::Converged: return "converged";
    case Status::MaxIterations: return "exceeded_max_iters";
    case Status::Diverged: return "diverged";
    }
    return "?";
}

namespace {

template <typename Next>
IterationResult drive(const FixedPointMap& g, std::span<const double> xi0, const IterationOptions& opts, Next&& next)
{
    la::require_size(xi0.size(), g.dimension, "fixed-point initial iterate");
    IterationResult result;
    Vector xi(xi0.begin(), xi0.end());
    double f0_norm = 0.0;
    double res0 = 0.0;
    std::size_t k = 0;

    auto finish = [&](Status s, double res) {
        result.status = s;
        result.report.iterations = k;
        result.report.final_relative_residual = res;
        result.report.converged = s == Status::Converged;
        result.solution = xi;
        return result;
    };
    // Sets stop when the iterate ends the run.
    auto record = [&](double res, std::optional<Status>& stop) {
        result.report.residual_history.push_back(res);
        if (k == 0) res0 = res;
        if (res <= opts.tol) stop = Status::Converged;
        else if (!std::isfinite(res) || res > opts.divergence_factor * res0) stop = Status::Diverged;
        else if (k >= opts.max_iters) stop = Status::MaxIterations;
    };

    while (true) {
        std::optional<Status> stop;
        double res = 0.0;
        if (opts.residual) {
            res = opts.residual(xi);
            record(res, stop);
            if (stop) return finish(*stop, res);
        }
        const Vector gx = g(xi);
        if (!opts.residual) {
            const double fn = la::norm2(la::subtract(gx, xi));
            if (k == 0) f0_norm = fn;
            res = f0_norm > 0.0 ? fn / f0_norm : 0.0;
            record(res, stop);
            if (stop) return finish(*stop, res);
        }
        xi = next(xi, gx);
        ++k;
    }
}

} // namespace

IterationResult aa_solve(const FixedPointMap& g, std::span<const double> xi0, std::size_t m,
                         const IterationOptions& opts)
{
    AndersonAccelerator aa(m);
    return drive(g, xi0, opts, [&](const Vector& xi, const Vector& gx) { return aa.update(xi, gx); });
}

IterationResult fixed_point_solve(const FixedPointMap& g, std::span<const double> xi0, const IterationOptions& opts)
{
    return drive(g, xi0, opts, [](const Vector& xi, const Vector& gx) {
        if (!la::all_finite(gx)) throw la::SolverError("fixed-point map returned non-finite values");
        (void)xi;
        return gx;
    });
}

} // namespace uzawa::accel

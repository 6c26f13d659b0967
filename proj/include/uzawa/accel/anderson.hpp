#pragma once

#include "uzawa/linalg/krylov.hpp"
#include "uzawa/linalg/vector.hpp"

#include <cstddef>
#include <deque>
#include <functional>
#include <span>
#include <string_view>

namespace uzawa::accel {

using la::Vector;

/// A deterministic map xi -> G(xi) on R^dimension.
struct FixedPointMap {
    std::size_t dimension = 0;
    std::function<Vector(std::span<const double>)> eval;

    Vector operator()(std::span<const double> xi) const;
};

/**
 * Anderson acceleration with truncation depth m.
 *
 * Holds the last m_k + 1 pairs (G(xi_i), f_i = G(xi_i) - xi_i) with
 * m_k = min(m, k). Each update solves min ||F alpha|| subject to sum(alpha) = 1
 * in its unconstrained difference form,
 *
 *     gamma = argmin || f_k - dF gamma ||,   dF_i = f_{i+1} - f_i,
 *
 * and returns xi_{k+1} = G(xi_k) - dG gamma, which equals sum_i alpha_i G(xi_i)
 * with alpha_0 = gamma_0, alpha_i = gamma_i - gamma_{i-1}, alpha_m = 1 - gamma_{m-1}.
 */
class AndersonAccelerator {
public:
    explicit AndersonAccelerator(std::size_t depth);

    /// Given xi_k and G(xi_k), returns xi_{k+1}. The first call returns G(xi_0).
    Vector update(std::span<const double> xi, std::span<const double> g_xi);

    void reset();

    std::size_t depth() const noexcept { return depth_; }
    /// Number of stored (G, f) pairs, i.e. m_k + 1 after the k-th update.
    std::size_t window_size() const noexcept { return g_.size(); }
    /// Mixing coefficients of the last update, oldest stored pair first.
    const Vector& coefficients() const noexcept { return alpha_; }
    /// Updates performed since construction or reset.
    std::size_t steps() const noexcept { return steps_; }
    /// Window entries dropped by the least-squares degeneracy guard so far.
    std::size_t dropped_columns() const noexcept { return dropped_; }

private:
    std::size_t depth_;
    std::size_t steps_ = 0;
    std::size_t dropped_ = 0;
    std::deque<Vector> g_;  // oldest first
    std::deque<Vector> f_;
    Vector alpha_;
};

/// Alias matching the state-machine view: one G evaluation per step.
using AcceleratorState = AndersonAccelerator;

/// xi_{k+1} from xi_k; evaluates G exactly once.
Vector aa_step(AcceleratorState& state, const FixedPointMap& g, std::span<const double> xi);

enum class Status { Converged, MaxIterations, Diverged };

std::string_view to_string(Status s);

/// Relative residual of an iterate; the solver stops when it reaches tol.
using ResidualFunctional = std::function<double(std::span<const double>)>;

struct IterationOptions {
    double tol = 1e-6;
    std::size_t max_iters = 1000;
    /// Abort as diverged when the residual exceeds this multiple of the initial one.
    double divergence_factor = 1e8;
    /// Defaults to ||G(xi_k) - xi_k|| / ||G(xi_0) - xi_0||.
    ResidualFunctional residual;
};

struct IterationResult {
    Vector solution;
    Status status = Status::MaxIterations;
    la::SolveReport report;
};

/// Anderson-accelerated fixed-point iteration with depth m >= 1.
IterationResult aa_solve(const FixedPointMap& g, std::span<const double> xi0, std::size_t m,
                         const IterationOptions& opts);

/// Plain iteration xi_{k+1} = G(xi_k) under the same stopping and divergence rules.
IterationResult fixed_point_solve(const FixedPointMap& g, std::span<const double> xi0, const IterationOptions& opts);

} // namespace uzawa::accel

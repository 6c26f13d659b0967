#include "uzawa/fem/picard.hpp"

#include "uzawa/fem/assembly.hpp"
#include "uzawa/saddle/uzawa.hpp"

#include <stdexcept>
#include <string>

namespace uzawa::fem {

namespace {

constexpr double kPicardTol = 1e-10;

la::Vector solve_velocity(const SaddleSystem& sys, saddle::QbKind qb, std::size_t step)
{
    saddle::UzawaConfig cfg;
    cfg.qb = qb;
    cfg.inner_tol = 1e-12;
    const saddle::PreconditionedUzawa uz(sys, cfg);
    auto res = uz.solve_schur(kPicardTol, 3000);
    if (!res.report.converged) {
        throw la::SolverError("Picard step " + std::to_string(step) + ": Schur complement solve stalled at " +
                              std::to_string(res.report.final_relative_residual) + " after " +
                              std::to_string(res.report.iterations) + " iterations");
    }
    return std::move(res.u);
}

} // namespace

la::Vector picard_wind(const StructuredGrid& grid, double nu, std::size_t k)
{
    if (k == 0) throw std::invalid_argument("picard_wind: k must be at least 1");
    if (!(nu > 0.0)) throw std::invalid_argument("picard_wind: nu must be positive");

    ProblemSpec stokes;
    stokes.nu = nu;
    la::Vector v = solve_velocity(assemble(grid, stokes), saddle::QbKind::PressureMass, 0);
    for (std::size_t j = 1; j <= k; ++j) {
        ProblemSpec oseen;
        oseen.equation = Equation::Oseen;
        oseen.nu = nu;
        oseen.wind = std::move(v);
        v = solve_velocity(assemble(grid, oseen), saddle::QbKind::LSC, j);
    }
    return v;
}

} // namespace uzawa::fem

#include "uzawa/bench/experiment.hpp"

#include "uzawa/bench/tables.hpp"
#include "uzawa/fem/picard.hpp"
#include "uzawa/saddle/eigen_estimate.hpp"
#include "uzawa/saddle/methods.hpp"

#include <cctype>
#include <chrono>
#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>

namespace uzawa::bench {

std::string_view to_string(Method m)
{
    switch (m) {
    case Method::NASU: return "NASU";
    case Method::ASU: return "ASU";
    case Method::NAPU: return "NAPU";
    case Method::APU: return "APU";
    case Method::PGMRES: return "PGMRES";
    case Method::RDF: return "RDF";
    }
    return "?";
}

Method parse_method(std::string_view name)
{
    std::string up(name);
    for (char& c : up) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    for (Method m : {Method::NASU, Method::ASU, Method::NAPU, Method::APU, Method::PGMRES, Method::RDF})
        if (up == to_string(m)) return m;
    throw std::invalid_argument("unknown method '" + std::string(name) + "' (expected NASU, ASU, NAPU, APU, PGMRES or RDF)");
}

std::string status_label(accel::Status s, std::size_t max_iters)
{
    if (s == accel::Status::MaxIterations) return "exceeded_" + std::to_string(max_iters);
    return std::string(accel::to_string(s));
}

saddle::QbKind ExperimentConfig::effective_qb() const
{
    if (qb) return *qb;
    if (method == Method::NASU || method == Method::ASU) return saddle::QbKind::Identity;
    return equation == fem::Equation::Stokes ? saddle::QbKind::PressureMass : saddle::QbKind::LSC;
}

void ExperimentConfig::validate() const
{
    if (!(nu > 0.0)) throw std::invalid_argument("nu must be positive");
    if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");
    if (max_iters == 0) throw std::invalid_argument("max_iters must be at least 1");
    if (beta && method != Method::RDF) throw std::invalid_argument("beta only applies to RDF");
    if (beta && !(*beta > 0.0)) throw std::invalid_argument("beta must be positive");
    if (omega && method == Method::RDF) throw std::invalid_argument("omega does not apply to RDF");
    if (omega && !(*omega > 0.0)) throw std::invalid_argument("omega must be positive");
    if (qb && method == Method::RDF) throw std::invalid_argument("Q_B does not apply to RDF");
    const bool standard = method == Method::NASU || method == Method::ASU;
    if (standard && qb && *qb != saddle::QbKind::Identity)
        throw std::invalid_argument(std::string(to_string(method)) + " is standard Uzawa and uses Q_B = I");
    if ((method == Method::NAPU || method == Method::APU) && qb && *qb == saddle::QbKind::Identity)
        throw std::invalid_argument(std::string(to_string(method)) + " needs a non-identity Q_B (use NASU/ASU)");
    const bool windowed = method == Method::ASU || method == Method::APU || method == Method::PGMRES ||
                          method == Method::RDF;
    if (windowed && window == 0) throw std::invalid_argument("window (AA depth or GMRES restart) must be at least 1");
    if (equation == fem::Equation::Oseen && picard_steps == 0)
        throw std::invalid_argument("Oseen problems need at least one Picard step for the wind");
}

namespace {

using WindKey = std::tuple<int, std::size_t, double, std::size_t>;

la::Vector cached_wind(const fem::StructuredGrid& grid, double nu, std::size_t steps)
{
    static std::mutex mu;
    static std::map<WindKey, la::Vector> cache;
    const WindKey key{static_cast<int>(grid.domain()), grid.n(), nu, steps};
    {
        std::lock_guard lock(mu);
        if (auto it = cache.find(key); it != cache.end()) return it->second;
    }
    la::Vector w = fem::picard_wind(grid, nu, steps);
    std::lock_guard lock(mu);
    cache.emplace(key, w);
    return w;
}

} // namespace

fem::SaddleSystem assemble_problem(const ExperimentConfig& cfg)
{
    const auto grid = fem::build_grid(cfg.problem, cfg.grid);
    fem::ProblemSpec spec;
    spec.equation = cfg.equation;
    spec.nu = cfg.nu;
    if (cfg.equation == fem::Equation::Oseen) spec.wind = cached_wind(grid, cfg.nu, cfg.picard_steps);
    return fem::assemble(grid, spec);
}

RunRecord run_on_system(const fem::SaddleSystem& sys, const ExperimentConfig& cfg)
{
    cfg.validate();
    RunRecord rec;
    rec.config = cfg;
    rec.num_unknowns = sys.size();

    saddle::StopRule stop;
    stop.tol = cfg.tol;
    stop.max_iters = cfg.max_iters;

    const auto t0 = std::chrono::steady_clock::now();
    saddle::MethodResult result;
    if (cfg.method == Method::RDF) {
        saddle::RdfConfig rc;
        if (!cfg.beta) throw std::invalid_argument("RDF needs beta");
        rc.beta = *cfg.beta;
        rc.inner = cfg.inner;
        rec.beta = rc.beta;
        result = saddle::run_rdf(sys, rc, cfg.window, stop);
    } else {
        saddle::UzawaConfig uc;
        uc.qb = cfg.effective_qb();
        uc.inner = cfg.inner;
        if (cfg.omega) {
            uc.omega = *cfg.omega;
        } else {
            if (sys.equation != fem::Equation::Stokes)
                throw std::invalid_argument("omega = auto is only available for Stokes; pass an explicit omega");
            saddle::EigenOptions eo;
            eo.qb = uc.qb;
            eo.inner = cfg.inner;
            uc.omega = saddle::estimate_schur_omega(sys, eo).omega_opt;
        }
        rec.omega = uc.omega;
        const saddle::PreconditionedUzawa uz(sys, uc);
        switch (cfg.method) {
        case Method::NASU:
        case Method::NAPU: result = saddle::run_uzawa(sys, uz, 0, stop); break;
        case Method::ASU:
        case Method::APU: result = saddle::run_uzawa(sys, uz, cfg.window, stop); break;
        case Method::PGMRES: result = saddle::run_pgmres(uz, cfg.window, stop); break;
        case Method::RDF: break;
        }
    }
    rec.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    rec.iterations = result.report.iterations;
    rec.status = result.status;
    rec.final_relative_residual = result.report.final_relative_residual;
    rec.residual_history = std::move(result.report.residual_history);
    return rec;
}

RunRecord run_experiment(const ExperimentConfig& cfg)
{
    cfg.validate();
    ExperimentConfig resolved = cfg;
    if (resolved.method == Method::RDF && !resolved.beta) {
        resolved.beta = reference_beta(cfg.problem, cfg.equation, cfg.nu, cfg.grid);
        if (!resolved.beta)
            throw std::invalid_argument("no published beta for this RDF cell; pass --beta explicitly");
    }
    if (resolved.uses_omega() && !resolved.omega && cfg.equation == fem::Equation::Oseen) {
        resolved.omega = reference_omega(cfg.problem, cfg.equation, cfg.nu, cfg.grid);
        if (!resolved.omega)
            throw std::invalid_argument("no published omega for this Oseen cell; pass --omega explicitly");
    }
    const auto grid = fem::build_grid(cfg.problem, cfg.grid);
    const auto sys = assemble_problem(cfg);
    RunRecord rec = run_on_system(sys, resolved);
    rec.config = cfg;
    rec.grid_label = grid.label();
    return rec;
}

} // namespace uzawa::bench

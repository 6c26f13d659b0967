// Acceptance checks for the solver library. One PASS/FAIL line per criterion;
// the exit status is nonzero when any criterion fails.

#include "test_support.hpp"

#include "uzawa/accel/anderson.hpp"
#include "uzawa/bench/experiment.hpp"
#include "uzawa/bench/tables.hpp"
#include "uzawa/fem/assembly.hpp"
#include "uzawa/saddle/methods.hpp"
#include "uzawa/saddle/rdf.hpp"
#include "uzawa/saddle/uzawa.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace uzawa;
using la::Vector;
namespace ts = testing_support;

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what)
    {
        if (!ok) {
            pass = false;
            detail << " [violated: " << what << "]";
        }
    }
};

int failures = 0;

void criterion(const std::string& name, const std::function<void(Outcome&)>& body)
{
    Outcome out;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        body(out);
    } catch (const std::exception& e) {
        out.pass = false;
        out.detail << " [exception: " << e.what() << "]";
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!out.pass) ++failures;
    std::printf("%s  %s (%.1fs):%s\n", out.pass ? "PASS" : "FAIL", name.c_str(), secs, out.detail.str().c_str());
    std::fflush(stdout);
}

bool in_band(std::size_t v, std::size_t lo, std::size_t hi)
{
    return v >= lo && v <= hi;
}

bench::RunRecord run(fem::Domain d, fem::Equation e, double nu, std::size_t n, bench::Method m, std::size_t window,
                     std::optional<double> omega)
{
    bench::ExperimentConfig c;
    c.problem = d;
    c.equation = e;
    c.nu = nu;
    c.grid = n;
    c.method = m;
    c.window = window;
    c.omega = omega;
    return bench::run_experiment(c);
}

std::string describe(const bench::RunRecord& r)
{
    return std::to_string(r.iterations) + (r.status == accel::Status::Converged ? "" : "(" + bench::status_label(r.status, r.config.max_iters) + ")");
}

/// Untruncated AA on G versus unrestarted GMRES on M^{-1}K: checks
/// xi_{k+1}^AA = G(x_k^GMRES) while the GMRES residual is above 1e-8.
/// Returns the worst relative discrepancy and the number of compared steps.
std::pair<double, std::size_t> essential_equivalence(const saddle::PreconditionedUzawa& uz)
{
    const std::size_t n = uz.size();
    const auto g = uz.fixed_point_map();
    const std::size_t cap = std::min<std::size_t>(n, 300);

    std::vector<Vector> gm_iterates{Vector(n, 0.0)};
    std::vector<double> gm_res{1.0};
    {
        auto [op, rhs] = uz.left_preconditioned_system();
        la::GmresOptions o;
        o.restart = cap;
        o.max_iters = cap;
        o.tol = 1e-10;
        o.observer = [&](std::size_t, const Vector& x) { gm_iterates.push_back(x); };
        const Vector x0(n, 0.0);
        const auto [x, rep] = la::gmres_solve(op, rhs, x0, o);
        gm_res = rep.residual_history;
    }

    accel::AndersonAccelerator aa(cap + 1);
    Vector xi(n, 0.0);
    double worst = 0.0;
    std::size_t compared = 0;
    for (std::size_t k = 0; k + 1 < gm_iterates.size() && k < gm_res.size(); ++k) {
        if (gm_res[k] < 1e-8) break;
        const Vector next = aa.update(xi, g(xi));
        const Vector target = g(gm_iterates[k]);
        worst = std::max(worst, ts::rel_diff(next, target));
        ++compared;
        xi = next;
    }
    return {worst, compared};
}

} // namespace

int main()
{
    criterion("dof counts reproduce the published unknown counts", [](Outcome& o) {
        const std::vector<std::tuple<fem::Domain, std::size_t, std::size_t>> cases = {
            {fem::Domain::Channel, 16, 659},   {fem::Domain::Channel, 32, 2467},  {fem::Domain::Channel, 64, 9539},
            {fem::Domain::Cavity, 16, 659},    {fem::Domain::Cavity, 32, 2467},   {fem::Domain::Cavity, 64, 9539},
            {fem::Domain::Obstacle, 16, 2488}, {fem::Domain::Obstacle, 32, 9512},
        };
        for (const auto& [d, n, expected] : cases) {
            const auto got = fem::build_grid(d, n).num_unknowns();
            o.detail << ' ' << fem::to_string(d) << n << '=' << got;
            o.require(got == expected, std::string(fem::to_string(d)) + " " + std::to_string(n) + " expected " +
                                           std::to_string(expected));
        }
    });

    criterion("table 1 band, channel Stokes, omega auto (16, 32)", [](Outcome& o) {
        bench::TableOptions opts;
        opts.max_grid = 32;
        for (const auto& c : bench::run_table(1, opts).cells) {
            const auto& r = c.record;
            const auto m = c.reference.method;
            o.detail << ' ' << bench::to_string(m) << '@' << c.reference.grid << '=' << describe(r) << "(paper "
                     << c.reference.reported << ')';
            const bool conv = r.status == accel::Status::Converged;
            if (m == bench::Method::ASU) o.require(conv && in_band(r.iterations, 15, 30), "ASU(20) in [15,30]");
            if (m == bench::Method::NASU) o.require(conv && in_band(r.iterations, 200, 330), "NASU in [200,330]");
            if (m == bench::Method::PGMRES) o.require(conv && in_band(r.iterations, 15, 35), "PGMRES(20) in [15,35]");
        }
    });

    criterion("tables 2/3 band, preconditioned Stokes (grids <= 64)", [](Outcome& o) {
        bench::TableOptions opts;
        opts.max_grid = 64;
        for (int t : {2, 3}) {
            for (const auto& c : bench::run_table(t, opts).cells) {
                const auto m = c.reference.method;
                if (m == bench::Method::RDF) continue;
                const auto& r = c.record;
                o.detail << " T" << t << ':' << bench::to_string(m) << '@' << c.reference.grid << '=' << describe(r);
                const bool conv = r.status == accel::Status::Converged;
                if (m == bench::Method::APU) o.require(conv && r.iterations <= 16, "APU(10) <= 16");
                if (m == bench::Method::PGMRES) o.require(conv && r.iterations <= 16, "PGMRES(10) <= 16");
                if (m == bench::Method::NAPU) o.require(conv && in_band(r.iterations, 35, 60), "NAPU in [35,60]");
            }
        }
    });

    criterion("table 4 qualitative, cavity Oseen", [](Outcome& o) {
        const auto d = fem::Domain::Cavity;
        const auto e = fem::Equation::Oseen;
        std::vector<std::size_t> napu, apu;
        for (std::size_t n : {16, 32, 64}) {
            const auto omega = bench::reference_omega(d, e, 0.01, n);
            const auto rn = run(d, e, 0.01, n, bench::Method::NAPU, 20, omega);
            const auto ra = run(d, e, 0.01, n, bench::Method::APU, 20, omega);
            o.require(rn.status == accel::Status::Converged && ra.status == accel::Status::Converged,
                      "nu=.01 runs converge");
            napu.push_back(rn.iterations);
            apu.push_back(ra.iterations);
            o.detail << " nu=.01@" << n << ":NAPU=" << describe(rn) << ",APU=" << describe(ra);
        }
        for (std::size_t i = 0; i + 1 < napu.size(); ++i) {
            o.require(static_cast<double>(napu[i + 1]) >= 1.5 * static_cast<double>(napu[i]), "NAPU grows >= 1.5x");
            o.require(static_cast<double>(apu[i + 1]) <= 1.3 * static_cast<double>(apu[i]), "APU(20) grows <= 1.3x");
        }
        const auto rn = run(d, e, 0.001, 32, bench::Method::NAPU, 20, 1.6);
        const auto ra = run(d, e, 0.001, 32, bench::Method::APU, 20, 1.6);
        o.detail << " nu=.001@32:NAPU=" << describe(rn) << ",APU=" << describe(ra);
        o.require(rn.status == accel::Status::Diverged, "NAPU diverges at nu=.001");
        o.require(ra.status == accel::Status::Converged && ra.iterations <= 200, "APU(20) converges in <= 200");
    });

    criterion("table 5 restart monotonicity, cavity Oseen nu=.001, 64, omega=.87", [](Outcome& o) {
        const std::vector<std::pair<std::size_t, double>> cells = {{20, 600}, {40, 190}, {60, 131}};
        std::size_t prev = std::numeric_limits<std::size_t>::max();
        for (const auto& [restart, paper] : cells) {
            const auto r = run(fem::Domain::Cavity, fem::Equation::Oseen, 0.001, 64, bench::Method::PGMRES, restart, 0.87);
            o.detail << " PGMRES(" << restart << ")=" << describe(r) << "(paper " << paper << ')';
            o.require(r.status == accel::Status::Converged, "converges");
            o.require(r.iterations < prev, "strictly decreasing in restart");
            const double dev = std::abs(static_cast<double>(r.iterations) - paper) / paper;
            o.require(dev <= 0.30, "within 30% of the published count");
            prev = r.iterations;
        }
    });

    criterion("RDF sanity and factorization identity", [](Outcome& o) {
        const auto r = run(fem::Domain::Channel, fem::Equation::Stokes, 1.0, 16, bench::Method::RDF, 10, std::nullopt);
        o.detail << " RDF(10)@16 beta=" << r.beta << ": " << describe(r);
        o.require(r.status == accel::Status::Converged && r.iterations <= 15, "RDF(10) <= 15");

        auto check = [&](const fem::SaddleSystem& sys, double beta, const char* label) {
            const auto f = saddle::rdf_factors(sys, beta);
            const Eigen::MatrixXd prod = ts::dense(f[0]) * ts::dense(f[1]) * ts::dense(f[2]) * ts::dense(f[3]);
            const Eigen::MatrixXd m = ts::dense(saddle::rdf_matrix(sys, beta));
            const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
            const double err = (prod - m).cwiseAbs().maxCoeff() / scale;
            o.detail << ' ' << label << " identity err=" << err;
            o.require(err <= 1e-12, std::string(label) + " factor product equals M_beta");
        };
        check(fem::assemble(fem::build_grid(fem::Domain::Channel, 16), {}), 0.0044, "channel16");
        ts::SyntheticOptions so;
        so.nv = 40;
        so.np = 12;
        so.seed = 7;
        check(ts::synthetic_system(so), 0.3, "synthetic");
    });

    criterion("essential equivalence of untruncated AA and unrestarted GMRES", [](Outcome& o) {
        auto record = [&](const saddle::PreconditionedUzawa& uz, const std::string& label) {
            const auto [worst, steps] = essential_equivalence(uz);
            o.detail << ' ' << label << ":max=" << worst << "/" << steps << "steps";
            o.require(steps >= 3, label + " compares at least 3 steps");
            o.require(worst <= 1e-8, label + " agrees to 1e-8");
        };
        unsigned seed = 11;
        for (bool symmetric : {true, false}) {
            for (auto qb : {saddle::QbKind::Identity, saddle::QbKind::PressureMass}) {
                for (auto qa : {saddle::QaKind::ExactA, saddle::QaKind::GivenMatrix}) {
                    ts::SyntheticOptions so;
                    so.nv = 120;
                    so.np = 40;
                    so.symmetric = symmetric;
                    so.coupled_components = true;
                    so.seed = ++seed;
                    const auto sys = ts::synthetic_system(so);
                    saddle::UzawaConfig cfg;
                    cfg.qb = qb;
                    cfg.qa = qa;
                    // Near 2 / (lambda_min + lambda_max) of Q_B^{-1} S for these systems.
                    cfg.omega = qb == saddle::QbKind::Identity ? 3.0 : 150.0;
                    if (qa == saddle::QaKind::GivenMatrix) {
                        // Q_A = diag(A) + 0.5 * I, a crude but valid preconditioner.
                        Vector d = sys.A.diagonal_entries();
                        for (double& v : d) v += 0.5;
                        cfg.qa_matrix = la::SparseMatrix::diagonal(d);
                    }
                    record(saddle::PreconditionedUzawa(sys, cfg),
                           std::string(symmetric ? "sym" : "nonsym") + "/" + std::string(saddle::to_string(qb)) +
                               (qa == saddle::QaKind::ExactA ? "/exactA" : "/givenQA"));
                }
            }
        }
        {
            ts::SyntheticOptions so;
            so.nv = 60;
            so.np = 20;
            so.symmetric = false;
            so.seed = 99;
            saddle::UzawaConfig cfg;
            cfg.qb = saddle::QbKind::LSC;
            cfg.omega = 0.8;
            record(saddle::PreconditionedUzawa(ts::synthetic_system(so), cfg), "nonsym/lsc");
        }
        const auto channel = fem::assemble(fem::build_grid(fem::Domain::Channel, 16), {});
        saddle::UzawaConfig mass;
        mass.qb = saddle::QbKind::PressureMass;
        record(saddle::PreconditionedUzawa(channel, mass), "channel16/mass");
        saddle::UzawaConfig standard;
        standard.omega = 38.0;
        record(saddle::PreconditionedUzawa(channel, standard), "channel16/identity");
    });

    criterion("invariant suites", [](Outcome& o) {
        std::mt19937_64 rng(3);
        // CSR transpose adjointness <Mx, y> = <x, M^T y>.
        {
            const auto m = ts::sparse(ts::random_matrix(30, 17, rng), 0.5);
            const Vector x = ts::random_vector(17, rng), y = ts::random_vector(30, rng);
            const double lhs = la::dot(m.multiply(x), y);
            const double rhs = la::dot(x, m.transpose().multiply(y));
            const double rhs2 = la::dot(x, m.multiply_transpose(y));
            o.require(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(lhs)) &&
                          std::abs(lhs - rhs2) <= 1e-12 * std::max(1.0, std::abs(lhs)),
                      "transpose adjointness");
        }
        // Velocity mass integral over the cavity: two components times area 4.
        {
            const auto grid = fem::build_grid(fem::Domain::Cavity, 16);
            const auto m = fem::assemble_scalar_mass(grid);
            double total = 0.0;
            for (double v : m.values()) total += v;
            o.detail << " mass_sum=" << 2.0 * total;
            o.require(std::abs(2.0 * total - 8.0) <= 1e-10, "velocity mass integral = 8");
            const auto sys = fem::assemble(grid, {});
            const double bt1 = la::norm_inf(sys.B.multiply_transpose(Vector(sys.num_pressure(), 1.0)));
            o.detail << " |B^T 1|=" << bt1;
            o.require(bt1 <= 1e-10, "B^T 1 = 0 on the cavity");
        }
        // Splitting identity M - N = K, densified.
        {
            auto split_err = [](const fem::SaddleSystem& sys, const saddle::UzawaConfig& cfg) {
                const auto ops = saddle::PreconditionedUzawa(sys, cfg).split_operators();
                const Eigen::MatrixXd k = ts::saddle_matrix(sys);
                const Eigen::MatrixXd diff = ts::dense(ops.M_apply) - ts::dense(ops.N_apply) - k;
                return diff.cwiseAbs().maxCoeff() / std::max(1.0, k.cwiseAbs().maxCoeff());
            };
            const auto channel = fem::assemble(fem::build_grid(fem::Domain::Channel, 8), {});
            double worst = 0.0;
            for (auto qb : {saddle::QbKind::Identity, saddle::QbKind::PressureMass}) {
                saddle::UzawaConfig cfg;
                cfg.qb = qb;
                cfg.omega = 0.7;
                worst = std::max(worst, split_err(channel, cfg));
            }
            ts::SyntheticOptions so;
            so.symmetric = false;
            so.seed = 5;
            const auto syn = ts::synthetic_system(so);
            saddle::UzawaConfig given;
            given.qa = saddle::QaKind::GivenMatrix;
            given.qa_matrix = la::SparseMatrix::diagonal(syn.A.diagonal_entries());
            given.qb = saddle::QbKind::PressureMass;
            given.omega = 1.3;
            worst = std::max(worst, split_err(syn, given));
            o.detail << " split_err=" << worst;
            o.require(worst <= 1e-12, "M - N = K");
        }
        // Anderson coefficients sum to one.
        {
            ts::SyntheticOptions so;
            so.seed = 8;
            saddle::UzawaConfig cfg;
            cfg.qb = saddle::QbKind::PressureMass;
            cfg.omega = 150.0;
            const saddle::PreconditionedUzawa uz(ts::synthetic_system(so), cfg);
            const auto g = uz.fixed_point_map();
            accel::AndersonAccelerator aa(4);
            Vector xi(uz.size(), 0.0);
            double worst = 0.0;
            for (int k = 0; k < 8; ++k) {
                xi = aa.update(xi, g(xi));
                double s = 0.0;
                for (double a : aa.coefficients()) s += a;
                worst = std::max(worst, std::abs(s - 1.0));
            }
            o.detail << " alpha_sum_err=" << worst;
            o.require(worst <= 1e-12, "sum(alpha) = 1");
        }
        // Scalar Uzawa oracle: A=[2], B=[1], f=1, g=0, omega=1.
        {
            const auto sys = ts::scalar_system(2.0, 1.0, 1.0, 0.0);
            saddle::UzawaConfig cfg;
            const auto [u1, p1] = saddle::uzawa_step(sys, cfg, Vector{0.0}, Vector{0.0});
            o.detail << " scalar u1=" << u1[0] << " p1=" << p1[0];
            o.require(std::abs(u1[0] - 0.5) <= 1e-15 && std::abs(p1[0] - 0.5) <= 1e-15, "scalar step (0.5, 0.5)");
            const auto sol = saddle::schur_solve_route(sys, cfg, 1e-14);
            o.require(std::abs(sol.u[0]) <= 1e-14 && std::abs(sol.p[0] - 1.0) <= 1e-14, "scalar solution (0, 1)");
        }
    });

    std::printf("%d criterion(s) failed\n", failures);
    return failures == 0 ? 0 : 1;
}

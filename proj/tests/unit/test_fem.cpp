#include "doctest.h"
#include "test_support.hpp"

#include "uzawa/fem/export.hpp"
#include "uzawa/fem/picard.hpp"
#include "uzawa/linalg/matrix_market.hpp"
#include "uzawa/saddle/inner_solver.hpp"

#include "json.hpp"

#include <Eigen/Dense>

#include <filesystem>
#include <fstream>

using namespace uzawa;
using la::Vector;
namespace ts = testing_support;

namespace {

double sum(std::span<const double> v)
{
    double s = 0.0;
    for (double x : v) s += x;
    return s;
}

double matrix_sum(const la::SparseMatrix& m)
{
    return sum(m.values());
}

double area(fem::Domain d)
{
    switch (d) {
    case fem::Domain::Channel:
    case fem::Domain::Cavity: return 4.0;
    case fem::Domain::Obstacle: return 16.0 - 0.25;
    case fem::Domain::Step: return 12.0 - 1.0;
    }
    return 0.0;
}

} // namespace

TEST_SUITE("grid")
{
    TEST_CASE("square grids follow the unknown-count formula")
    {
        for (std::size_t n : {8, 16, 32}) {
            const auto g = fem::build_grid(fem::Domain::Cavity, n);
            CHECK(g.num_unknowns() == 2 * (n + 1) * (n + 1) + (n / 2 + 1) * (n / 2 + 1));
            CHECK(g.spacing() == doctest::Approx(2.0 / static_cast<double>(n)));
            CHECK(g.elements().size() == (n / 2) * (n / 2));
        }
    }

    TEST_CASE("published counts for the obstacle and step")
    {
        CHECK(fem::build_grid(fem::Domain::Obstacle, 16).num_unknowns() == 2488);
        CHECK(fem::build_grid(fem::Domain::Step, 16).num_unknowns() == 1747);
    }

    TEST_CASE("invalid grid sizes are rejected")
    {
        CHECK_THROWS(fem::build_grid(fem::Domain::Channel, 7));
        CHECK_THROWS(fem::build_grid(fem::Domain::Channel, 6));
        CHECK_THROWS(fem::build_grid(fem::Domain::Obstacle, 24));
        CHECK_THROWS(fem::build_grid(fem::Domain::Step, 10));
    }

    TEST_CASE("domain names round-trip")
    {
        for (auto d : {fem::Domain::Channel, fem::Domain::Cavity, fem::Domain::Obstacle, fem::Domain::Step})
            CHECK(fem::parse_domain(fem::to_string(d)) == d);
        CHECK_THROWS(fem::parse_domain("annulus"));
    }

    TEST_CASE("labels use the tables' convention")
    {
        CHECK(fem::build_grid(fem::Domain::Cavity, 16).label() == "16x16");
        CHECK(fem::build_grid(fem::Domain::Step, 16).label() == "16x48");
    }

    TEST_CASE("masked nodes have no number")
    {
        const auto g = fem::build_grid(fem::Domain::Step, 8);
        CHECK(g.velocity_node_at(0, 0) == fem::kNoDof);
        CHECK(g.velocity_node_at(g.x_intervals(), 0) != fem::kNoDof);
    }

    TEST_CASE("split and interleaved orderings are inverse permutations")
    {
        const auto a = fem::split_to_interleaved(7);
        const auto b = fem::interleaved_to_split(7);
        REQUIRE(a.size() == 14);
        for (std::size_t i = 0; i < a.size(); ++i) CHECK(b[a[i]] == i);
        CHECK(b[1] == 7);
    }
}

TEST_SUITE("boundary")
{
    TEST_CASE("cavity lid covers the whole top edge including corners")
    {
        const auto g = fem::build_grid(fem::Domain::Cavity, 8);
        const auto bc = fem::classify_boundary(g, fem::boundary_profiles(fem::Domain::Cavity));
        const std::size_t nn = g.num_velocity_nodes();
        const std::size_t corner = g.velocity_node_at(0, g.y_intervals());
        CHECK(bc.fixed[corner]);
        CHECK(bc.values[corner] == 1.0);
        CHECK(bc.values[nn + corner] == 0.0);
        // Every boundary node is fixed, interior nodes are free.
        CHECK(bc.count() == 2 * 4 * 8);
    }

    TEST_CASE("channel inflow is parabolic and the outflow is Dirichlet")
    {
        const auto g = fem::build_grid(fem::Domain::Channel, 8);
        const auto bc = fem::classify_boundary(g, fem::boundary_profiles(fem::Domain::Channel));
        for (std::size_t j = 0; j <= g.y_intervals(); ++j) {
            for (std::size_t i : {std::size_t{0}, g.x_intervals()}) {
                const std::size_t node = g.velocity_node_at(i, j);
                const double y = g.velocity_coord(node)[1];
                CHECK(bc.fixed[node]);
                CHECK(bc.values[node] == doctest::Approx(1.0 - y * y));
            }
        }
    }

    TEST_CASE("obstacle and step outflow edges are natural")
    {
        for (auto d : {fem::Domain::Obstacle, fem::Domain::Step}) {
            const auto g = fem::build_grid(d, 16);
            const auto bc = fem::classify_boundary(g, fem::boundary_profiles(d));
            const std::size_t mid = g.velocity_node_at(g.x_intervals(), g.y_intervals() / 2 + 1);
            CHECK_FALSE(bc.fixed[mid]);
        }
        const auto g = fem::build_grid(fem::Domain::Step, 16);
        const auto bc = fem::classify_boundary(g, fem::boundary_profiles(fem::Domain::Step));
        const std::size_t inflow = g.velocity_node_at(0, 3 * g.y_intervals() / 4);
        const double y = g.velocity_coord(inflow)[1];
        CHECK(bc.values[inflow] == doctest::Approx(4.0 * y * (1.0 - y)));
    }
}

TEST_SUITE("assembly")
{
    TEST_CASE("scalar mass integrates to the area and stiffness annihilates constants")
    {
        for (auto d : {fem::Domain::Channel, fem::Domain::Obstacle, fem::Domain::Step}) {
            const auto g = fem::build_grid(d, 16);
            CHECK(matrix_sum(fem::assemble_scalar_mass(g)) == doctest::Approx(area(d)).epsilon(1e-12));
            CHECK(matrix_sum(fem::assemble_pressure_mass(g)) == doctest::Approx(area(d)).epsilon(1e-12));
            const auto k = fem::assemble_scalar_stiffness(g);
            CHECK(la::norm_inf(k.multiply(Vector(g.num_velocity_nodes(), 1.0))) < 1e-12);
        }
    }

    TEST_CASE("stiffness reproduces the Dirichlet energy of a linear field")
    {
        const auto g = fem::build_grid(fem::Domain::Cavity, 8);
        Vector u(g.num_velocity_nodes());
        for (std::size_t i = 0; i < u.size(); ++i) u[i] = 2.0 * g.velocity_coord(i)[0] - g.velocity_coord(i)[1];
        const auto k = fem::assemble_scalar_stiffness(g);
        // |grad u|^2 = 5 over an area of 4.
        CHECK(la::dot(u, k.multiply(u)) == doctest::Approx(20.0).epsilon(1e-12));
    }

    TEST_CASE("divergence of (x, 0) equals minus the pressure-mass row sums")
    {
        const auto g = fem::build_grid(fem::Domain::Channel, 8);
        const std::size_t nn = g.num_velocity_nodes();
        Vector u(2 * nn, 0.0);
        for (std::size_t i = 0; i < nn; ++i) u[i] = g.velocity_coord(i)[0];
        const Vector bu = fem::assemble_divergence(g).multiply(u);
        const Vector m1 = fem::assemble_pressure_mass(g).multiply(Vector(g.num_pressure_nodes(), 1.0));
        for (std::size_t q = 0; q < bu.size(); ++q) CHECK(bu[q] == doctest::Approx(-m1[q]).epsilon(1e-12));
    }

    TEST_CASE("constant wind convection differentiates along the wind")
    {
        const auto g = fem::build_grid(fem::Domain::Cavity, 8);
        const std::size_t nn = g.num_velocity_nodes();
        Vector wind(2 * nn, 0.0);
        for (std::size_t i = 0; i < nn; ++i) wind[i] = 1.0;
        Vector u(nn);
        for (std::size_t i = 0; i < nn; ++i) u[i] = g.velocity_coord(i)[0];
        const Vector nu = fem::assemble_convection(g, wind).multiply(u);
        const Vector m1 = fem::assemble_scalar_mass(g).multiply(Vector(nn, 1.0));
        for (std::size_t i = 0; i < nn; ++i) CHECK(nu[i] == doctest::Approx(m1[i]).epsilon(1e-12));
        CHECK_THROWS_AS(fem::assemble_convection(g, Vector(nn, 0.0)), la::DimensionError);
    }

    TEST_CASE("Stokes system structure")
    {
        const auto g = fem::build_grid(fem::Domain::Channel, 8);
        const auto sys = fem::assemble(g, {});
        CHECK(sys.num_velocity() == g.num_velocity_dofs());
        CHECK(sys.num_pressure() == g.num_pressure_nodes());
        CHECK(saddle::is_symmetric(sys.A));
        const Eigen::MatrixXd a = ts::dense(sys.A);
        CHECK(a.selfadjointView<Eigen::Lower>().llt().info() == Eigen::Success);
        // Dirichlet rows are identity rows with the boundary value in f; B has zero columns there.
        const Eigen::MatrixXd b = ts::dense(sys.B);
        for (std::size_t i = 0; i < sys.num_velocity(); ++i) {
            if (!sys.dirichlet.fixed[i]) continue;
            CHECK(a(i, i) == 1.0);
            CHECK(a.row(i).cwiseAbs().sum() == 1.0);
            CHECK(sys.f[i] == sys.dirichlet.values[i]);
            CHECK(b.col(i).cwiseAbs().sum() == 0.0);
        }
        CHECK(matrix_sum(sys.Mp) == doctest::Approx(4.0));
        CHECK(sum(sys.Mv_diag) > 0.0);
    }

    TEST_CASE("enclosed flow has a pressure null space, channel flow does not")
    {
        const auto cavity = fem::assemble(fem::build_grid(fem::Domain::Cavity, 8), {});
        CHECK(cavity.has_pressure_nullspace());
        CHECK(la::norm_inf(cavity.B.multiply_transpose(Vector(cavity.num_pressure(), 1.0))) < 1e-12);
        // The lifted boundary data is compatible: g sums to zero.
        CHECK(std::abs(sum(cavity.g)) < 1e-12);
        const auto step = fem::assemble(fem::build_grid(fem::Domain::Step, 8), {});
        CHECK_FALSE(step.has_pressure_nullspace());
    }

    TEST_CASE("Oseen system is nonsymmetric and validates its wind")
    {
        const auto g = fem::build_grid(fem::Domain::Cavity, 8);
        fem::ProblemSpec spec;
        spec.equation = fem::Equation::Oseen;
        spec.nu = 0.1;
        CHECK_THROWS(fem::assemble(g, spec));
        Vector wind(g.num_velocity_dofs(), 0.0);
        for (std::size_t i = 0; i < g.num_velocity_nodes(); ++i) wind[i] = g.velocity_coord(i)[1];
        spec.wind = wind;
        const auto sys = fem::assemble(g, spec);
        CHECK_FALSE(saddle::is_symmetric(sys.A));
        fem::ProblemSpec bad;
        bad.wind = wind;
        CHECK_THROWS(fem::assemble(g, bad));
        fem::ProblemSpec neg;
        neg.nu = -1.0;
        CHECK_THROWS(fem::assemble(g, neg));
    }

    TEST_CASE("component blocks recombine to A and B")
    {
        const auto sys = fem::assemble(fem::build_grid(fem::Domain::Channel, 8), {});
        const auto blk = sys.component_blocks();
        const std::size_t h = sys.num_velocity() / 2;
        const Eigen::MatrixXd a = ts::dense(sys.A);
        const Eigen::MatrixXd b = ts::dense(sys.B);
        CHECK((a.topLeftCorner(h, h) - ts::dense(blk.a1)).norm() == 0.0);
        CHECK((a.bottomRightCorner(h, h) - ts::dense(blk.a2)).norm() == 0.0);
        CHECK((b.leftCols(h) - ts::dense(blk.b1)).norm() == 0.0);
        CHECK((b.rightCols(h) - ts::dense(blk.b2)).norm() == 0.0);
    }

    TEST_CASE("saddle residual is b minus the block operator")
    {
        std::mt19937_64 rng(1);
        const auto sys = fem::assemble(fem::build_grid(fem::Domain::Cavity, 8), {});
        const Vector xi = ts::random_vector(sys.size(), rng);
        const Eigen::VectorXd expect = ts::to_eigen(sys.rhs()) - ts::saddle_matrix(sys) * ts::to_eigen(xi);
        CHECK((ts::to_eigen(sys.residual(xi)) - expect).norm() < 1e-12 * expect.norm());
    }
}

TEST_SUITE("picard")
{
    TEST_CASE("zero Picard steps is rejected")
    {
        CHECK_THROWS(fem::picard_wind(fem::build_grid(fem::Domain::Cavity, 8), 0.1, 0));
    }

    TEST_CASE("wind satisfies the lid boundary data and has full length")
    {
        const auto g = fem::build_grid(fem::Domain::Cavity, 8);
        const Vector w = fem::picard_wind(g, 0.1, 2);
        REQUIRE(w.size() == g.num_velocity_dofs());
        const std::size_t lid = g.velocity_node_at(g.x_intervals() / 2, g.y_intervals());
        CHECK(w[lid] == doctest::Approx(1.0));
        CHECK(la::all_finite(w));
    }

    TEST_CASE("Picard iteration contracts at moderate viscosity")
    {
        const auto g = fem::build_grid(fem::Domain::Cavity, 8);
        const Vector w3 = fem::picard_wind(g, 0.5, 3);
        const Vector w4 = fem::picard_wind(g, 0.5, 4);
        const Vector w5 = fem::picard_wind(g, 0.5, 5);
        CHECK(ts::rel_diff(w5, w4) < ts::rel_diff(w4, w3));
    }
}

TEST_SUITE("export")
{
    TEST_CASE("exported matrices read back identically")
    {
        const auto g = fem::build_grid(fem::Domain::Channel, 8);
        const auto sys = fem::assemble(g, {});
        const auto dir = std::filesystem::temp_directory_path() / "uzawa_unit_export";
        std::filesystem::remove_all(dir);
        fem::export_system(g, sys, dir);
        for (const char* f : {"A.mtx", "B.mtx", "Mp.mtx", "f.mtx", "g.mtx", "Mv_diag.mtx", "system.json"})
            CHECK(std::filesystem::exists(dir / f));
        CHECK((ts::dense(la::mm_read(dir / "A.mtx")) - ts::dense(sys.A)).norm() == 0.0);
        CHECK((ts::dense(la::mm_read(dir / "B.mtx")) - ts::dense(sys.B)).norm() == 0.0);
        CHECK(la::mm_read_vector(dir / "f.mtx") == sys.f);
        std::ifstream in(dir / "system.json");
        const auto meta = nlohmann::json::parse(in);
        CHECK(meta.at("num_velocity").get<std::size_t>() == sys.num_velocity());
        CHECK(meta.at("num_pressure").get<std::size_t>() == sys.num_pressure());
    }
}

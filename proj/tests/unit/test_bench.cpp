#include "doctest.h"
#include "test_support.hpp"

#include "uzawa/bench/record_io.hpp"
#include "uzawa/bench/tables.hpp"

#include "json.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace uzawa;
using bench::Method;
namespace ts = testing_support;

namespace {

bench::ExperimentConfig small_config(Method m)
{
    bench::ExperimentConfig c;
    c.problem = fem::Domain::Cavity;
    c.grid = 8;
    c.method = m;
    c.window = 10;
    return c;
}

std::vector<std::string> lines(const std::string& text)
{
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
}

} // namespace

TEST_SUITE("bench")
{
    TEST_CASE("method names parse case-insensitively")
    {
        for (auto m : {Method::NASU, Method::ASU, Method::NAPU, Method::APU, Method::PGMRES, Method::RDF})
            CHECK(bench::parse_method(bench::to_string(m)) == m);
        CHECK(bench::parse_method("apu") == Method::APU);
        CHECK(bench::parse_method("PGmres") == Method::PGMRES);
        CHECK_THROWS(bench::parse_method("sor"));
    }

    TEST_CASE("status labels")
    {
        CHECK(bench::status_label(accel::Status::Converged, 1000) == "converged");
        CHECK(bench::status_label(accel::Status::MaxIterations, 1000) == "exceeded_1000");
        CHECK(bench::status_label(accel::Status::Diverged, 50) == "diverged");
    }

    TEST_CASE("configuration validation")
    {
        auto c = small_config(Method::NASU);
        c.qb = saddle::QbKind::PressureMass;
        CHECK_THROWS_AS(c.validate(), std::invalid_argument);
        c = small_config(Method::APU);
        c.qb = saddle::QbKind::Identity;
        CHECK_THROWS_AS(c.validate(), std::invalid_argument);
        c = small_config(Method::RDF);
        c.omega = 1.0;
        CHECK_THROWS_AS(c.validate(), std::invalid_argument);
        c = small_config(Method::APU);
        c.beta = 1.0;
        CHECK_THROWS_AS(c.validate(), std::invalid_argument);
        c = small_config(Method::ASU);
        c.window = 0;
        CHECK_THROWS_AS(c.validate(), std::invalid_argument);
        c = small_config(Method::APU);
        c.nu = 0.0;
        CHECK_THROWS_AS(c.validate(), std::invalid_argument);
        c = small_config(Method::PGMRES);
        c.omega = -1.0;
        CHECK_THROWS_AS(c.validate(), std::invalid_argument);
        c = small_config(Method::NAPU);
        c.window = 0;
        CHECK_NOTHROW(c.validate());
    }

    TEST_CASE("default Q_B per method and equation")
    {
        auto c = small_config(Method::ASU);
        CHECK(c.effective_qb() == saddle::QbKind::Identity);
        c.method = Method::APU;
        CHECK(c.effective_qb() == saddle::QbKind::PressureMass);
        c.equation = fem::Equation::Oseen;
        CHECK(c.effective_qb() == saddle::QbKind::LSC);
        c.qb = saddle::QbKind::PressureMass;
        CHECK(c.effective_qb() == saddle::QbKind::PressureMass);
    }

    TEST_CASE("a run produces a consistent record")
    {
        const auto r = bench::run_experiment(small_config(Method::APU));
        CHECK(r.status == accel::Status::Converged);
        CHECK(r.residual_history.size() == r.iterations + 1);
        CHECK(r.residual_history.front() == doctest::Approx(1.0));
        CHECK(r.final_relative_residual == r.residual_history.back());
        CHECK(r.final_relative_residual <= 1e-6);
        CHECK(r.num_unknowns == 187);
        CHECK(r.grid_label == "8x8");
        CHECK(r.omega > 0.0);
    }

    TEST_CASE("runs are deterministic")
    {
        for (auto m : {Method::ASU, Method::PGMRES}) {
            const auto a = bench::run_experiment(small_config(m));
            const auto b = bench::run_experiment(small_config(m));
            CHECK(a.iterations == b.iterations);
            CHECK(a.residual_history == b.residual_history);
            CHECK(a.omega == b.omega);
        }
    }

    TEST_CASE("zero right-hand side converges in zero iterations")
    {
        auto sys = fem::assemble(fem::build_grid(fem::Domain::Cavity, 8), {});
        std::fill(sys.f.begin(), sys.f.end(), 0.0);
        std::fill(sys.g.begin(), sys.g.end(), 0.0);
        auto c = small_config(Method::ASU);
        c.omega = 1.0;
        const auto r = bench::run_on_system(sys, c);
        CHECK(r.status == accel::Status::Converged);
        CHECK(r.iterations == 0);
    }

    TEST_CASE("auto omega is refused for Oseen systems without a reference value")
    {
        auto c = small_config(Method::APU);
        c.equation = fem::Equation::Oseen;
        c.nu = 0.37;
        CHECK_THROWS(bench::run_experiment(c));
    }

    TEST_CASE("CSV has a header and one row per residual")
    {
        const auto r = bench::run_experiment(small_config(Method::NAPU));
        const auto ls = lines(bench::record_to_csv(r));
        REQUIRE(ls.size() == r.residual_history.size() + 1);
        CHECK(ls[0] == "iter,relative_residual");
        for (std::size_t k = 0; k < r.residual_history.size(); ++k) {
            const auto comma = ls[k + 1].find(',');
            CHECK(std::stoul(ls[k + 1].substr(0, comma)) == k);
            CHECK(std::stod(ls[k + 1].substr(comma + 1)) == r.residual_history[k]);
        }
    }

    TEST_CASE("JSON round-trips every field")
    {
        auto c = small_config(Method::RDF);
        c.beta = 0.05;
        c.problem = fem::Domain::Channel;
        const auto r = bench::run_experiment(c);
        const auto back = bench::record_from_json(bench::record_to_json(r));
        CHECK(back.config.problem == r.config.problem);
        CHECK(back.config.method == Method::RDF);
        CHECK(back.config.beta == r.config.beta);
        CHECK(back.config.window == r.config.window);
        CHECK(back.iterations == r.iterations);
        CHECK(back.status == r.status);
        CHECK(back.beta == r.beta);
        CHECK(back.residual_history == r.residual_history);
        CHECK(back.final_relative_residual == r.final_relative_residual);
        CHECK(back.grid_label == r.grid_label);
        CHECK_THROWS(bench::record_from_json("{\"config\": {}}"));
        CHECK(bench::parse_format("json") == bench::Format::Json);
        CHECK_THROWS(bench::parse_format("xml"));
    }

    TEST_CASE("emit writes files")
    {
        const auto dir = std::filesystem::temp_directory_path() / "uzawa_unit_bench";
        std::filesystem::remove_all(dir);
        std::filesystem::create_directories(dir);
        const auto r = bench::run_experiment(small_config(Method::ASU));
        bench::emit(r, bench::Format::Csv, dir / "r.csv");
        std::ifstream in(dir / "r.csv");
        std::string header;
        std::getline(in, header);
        CHECK(header == "iter,relative_residual");
        std::ostringstream out;
        bench::emit(r, bench::Format::Json, out);
        CHECK(nlohmann::json::parse(out.str()).at("iterations").get<std::size_t>() == r.iterations);
    }

    TEST_CASE("bundled reference tables")
    {
        CHECK(bench::reference_table_count() == 7);
        const auto t1 = bench::reference_cells(1);
        CHECK_FALSE(t1.empty());
        CHECK(t1.front().problem == fem::Domain::Channel);
        CHECK(bench::reference_omega(fem::Domain::Cavity, fem::Equation::Oseen, 0.001, 64) == 0.87);
        CHECK(bench::reference_beta(fem::Domain::Channel, fem::Equation::Stokes, 1.0, 16) == 0.0044);
        CHECK_FALSE(bench::reference_omega(fem::Domain::Cavity, fem::Equation::Oseen, 0.37, 64).has_value());
        CHECK_THROWS(bench::reference_cells(8));
        CHECK_NOTHROW(nlohmann::json::parse(bench::reference_tables_json()));
    }

    TEST_CASE("run_table on the smallest grid of table 1")
    {
        bench::TableOptions opts;
        opts.max_grid = 16;
        std::size_t progress = 0;
        opts.progress = [&](const bench::TableCellResult&) { ++progress; };
        const auto t = bench::run_table(1, opts);
        REQUIRE(t.cells.size() == 3);
        CHECK(progress == 3);
        for (const auto& c : t.cells) {
            CHECK_FALSE(c.skipped);
            CHECK(c.record.status == accel::Status::Converged);
            CHECK(c.deviation.has_value());
        }
        const auto ls = lines(bench::table_to_csv(t));
        CHECK(ls.size() == 4);
        CHECK(ls[0] == "table,nu,grid,method,window,omega,beta,reported,iterations,status,deviation,note");
        const auto j = nlohmann::json::parse(bench::table_to_json(t));
        CHECK(j.at("cells").size() == 3);
    }
}

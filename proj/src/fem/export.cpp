#include "uzawa/fem/export.hpp"

#include "uzawa/linalg/matrix_market.hpp"

#include <json.hpp>

#include <fstream>
#include <stdexcept>

namespace uzawa::fem {

void export_system(const StructuredGrid& grid, const SaddleSystem& sys, const std::filesystem::path& dir)
{
    std::filesystem::create_directories(dir);
    la::mm_write(sys.A, dir / "A.mtx");
    la::mm_write(sys.B, dir / "B.mtx");
    la::mm_write(sys.Mp, dir / "Mp.mtx");
    la::mm_write_vector(sys.f, dir / "f.mtx");
    la::mm_write_vector(sys.g, dir / "g.mtx");
    la::mm_write_vector(sys.Mv_diag, dir / "Mv_diag.mtx");

    nlohmann::json meta;
    meta["domain"] = std::string(to_string(sys.domain));
    meta["grid"] = grid.label();
    meta["n"] = sys.grid_n;
    meta["equation"] = std::string(to_string(sys.equation));
    meta["nu"] = sys.nu;
    meta["num_velocity"] = sys.num_velocity();
    meta["num_pressure"] = sys.num_pressure();
    meta["velocity_ordering"] = "x components of all nodes, then y components";
    meta["pressure_nullspace"] = sys.has_pressure_nullspace();

    std::vector<std::size_t> fixed;
    for (std::size_t i = 0; i < sys.dirichlet.fixed.size(); ++i)
        if (sys.dirichlet.fixed[i]) fixed.push_back(i);
    meta["dirichlet_dofs"] = fixed;

    nlohmann::json vx = nlohmann::json::array(), px = nlohmann::json::array();
    for (std::size_t i = 0; i < grid.num_velocity_nodes(); ++i) {
        const auto c = grid.velocity_coord(i);
        vx.push_back({c[0], c[1]});
    }
    for (std::size_t i = 0; i < grid.num_pressure_nodes(); ++i) {
        const auto c = grid.pressure_coord(i);
        px.push_back({c[0], c[1]});
    }
    meta["velocity_nodes"] = std::move(vx);
    meta["pressure_nodes"] = std::move(px);

    std::ofstream out(dir / "system.json");
    if (!out) throw std::runtime_error("cannot write " + (dir / "system.json").string());
    out << meta.dump(1) << '\n';
}

} // namespace uzawa::fem

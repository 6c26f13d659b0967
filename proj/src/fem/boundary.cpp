#include "uzawa/fem/boundary.hpp"

#include <cmath>

namespace uzawa::fem {

namespace {
constexpr double kGeomTol = 1e-12;
}

std::array<double, 2> BoundaryProfile::value(double x, double y) const
{
    switch (domain) {
    case Domain::Channel:
        if (std::abs(x + 1.0) < kGeomTol || std::abs(x - 1.0) < kGeomTol) return {1.0 - y * y, 0.0};
        return {0.0, 0.0};
    case Domain::Cavity:
        if (std::abs(y - 1.0) < kGeomTol) return {1.0, 0.0};
        return {0.0, 0.0};
    case Domain::Obstacle:
        if (std::abs(x) < kGeomTol) return {1.0 - y * y, 0.0};
        return {0.0, 0.0};
    case Domain::Step:
        if (std::abs(x + 1.0) < kGeomTol && y >= 0.0) return {4.0 * y * (1.0 - y), 0.0};
        return {0.0, 0.0};
    }
    return {0.0, 0.0};
}

bool BoundaryProfile::is_neumann(const StructuredGrid& grid, const BoundaryEdge& edge) const
{
    if (domain != Domain::Obstacle && domain != Domain::Step) return false;
    if (edge.side != Side::Right) return false;
    return std::abs(grid.velocity_coord(edge.nodes[1])[0] - grid.x_max()) < kGeomTol;
}

BoundaryProfile boundary_profiles(Domain domain)
{
    return BoundaryProfile{domain};
}

std::size_t DirichletData::count() const
{
    std::size_t c = 0;
    for (char f : fixed) c += f ? 1 : 0;
    return c;
}

DirichletData classify_boundary(const StructuredGrid& grid, const BoundaryProfile& profile)
{
    const std::size_t nv = grid.num_velocity_nodes();
    DirichletData data;
    data.fixed.assign(2 * nv, 0);
    data.values.assign(2 * nv, 0.0);
    for (const auto& edge : grid.boundary_edges()) {
        if (profile.is_neumann(grid, edge)) continue;
        for (std::size_t node : edge.nodes) {
            const auto [x, y] = grid.velocity_coord(node);
            const auto v = profile.value(x, y);
            data.fixed[node] = data.fixed[nv + node] = 1;
            data.values[node] = v[0];
            data.values[nv + node] = v[1];
        }
    }
    return data;
}

} // namespace uzawa::fem

#include "uzawa/fem/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace uzawa::fem {

std::string_view to_string(Domain d)
{
    switch (d) {
    case Domain::Channel: return "channel";
    case Domain::Cavity: return "cavity";
    case Domain::Obstacle: return "obstacle";
    case Domain::Step: return "step";
    }
    return "?";
}

Domain parse_domain(std::string_view name)
{
    if (name == "channel") return Domain::Channel;
    if (name == "cavity") return Domain::Cavity;
    if (name == "obstacle") return Domain::Obstacle;
    if (name == "step") return Domain::Step;
    throw std::invalid_argument("unknown problem domain '" + std::string(name) +
                                "' (expected channel, cavity, obstacle or step)");
}

std::array<double, 2> StructuredGrid::velocity_coord(std::size_t node) const
{
    const auto [i, j] = velocity_nodes_[node];
    return {x0_ + static_cast<double>(i) * h_, y0_ + static_cast<double>(j) * h_};
}

std::array<double, 2> StructuredGrid::pressure_coord(std::size_t node) const
{
    const auto [i, j] = pressure_nodes_[node];
    return {x0_ + static_cast<double>(i) * h_, y0_ + static_cast<double>(j) * h_};
}

std::string StructuredGrid::label() const
{
    const std::size_t wide = domain_ == Domain::Obstacle ? 2 * n_ : domain_ == Domain::Step ? 3 * n_ : n_;
    return std::to_string(n_) + "x" + std::to_string(wide);
}

StructuredGrid build_grid(Domain domain, std::size_t n)
{
    if (n % 2 != 0) throw std::invalid_argument("build_grid: n must be even, got " + std::to_string(n));
    if (n < 8) throw std::invalid_argument("build_grid: n must be at least 8, got " + std::to_string(n));
    if (domain == Domain::Obstacle && n % 16 != 0)
        throw std::invalid_argument("build_grid: obstacle grid needs n divisible by 16, got " + std::to_string(n));
    if (domain == Domain::Step && n % 4 != 0)
        throw std::invalid_argument("build_grid: step grid needs n divisible by 4, got " + std::to_string(n));

    StructuredGrid g;
    g.domain_ = domain;
    g.n_ = n;
    g.h_ = 2.0 / static_cast<double>(n);
    g.ny_ = n;
    g.y0_ = -1.0;
    switch (domain) {
    case Domain::Channel:
    case Domain::Cavity:
        g.nx_ = n;
        g.x0_ = -1.0;
        break;
    case Domain::Obstacle:
        g.nx_ = 4 * n;
        g.x0_ = 0.0;
        break;
    case Domain::Step:
        g.nx_ = 3 * n;
        g.x0_ = -1.0;
        break;
    }

    const std::size_t ex = g.nx_ / 2;
    const std::size_t ey = g.ny_ / 2;
    const double eh = 2.0 * g.h_;
    auto element_active = [&](std::size_t a, std::size_t b) {
        const double cx = g.x0_ + (static_cast<double>(a) + 0.5) * eh;
        const double cy = g.y0_ + (static_cast<double>(b) + 0.5) * eh;
        switch (domain) {
        case Domain::Obstacle: return !(std::abs(cx - 2.0) < 0.25 && std::abs(cy) < 0.25);
        case Domain::Step: return !(cx < 0.0 && cy < 0.0);
        default: return true;
        }
    };
    std::vector<char> active(ex * ey);
    for (std::size_t a = 0; a < ex; ++a)
        for (std::size_t b = 0; b < ey; ++b) active[a * ey + b] = element_active(a, b);
    auto is_active = [&](long a, long b) {
        if (a < 0 || b < 0 || a >= static_cast<long>(ex) || b >= static_cast<long>(ey)) return false;
        return active[static_cast<std::size_t>(a) * ey + static_cast<std::size_t>(b)] != 0;
    };

    // A node exists if it touches an active element.
    const std::size_t stride = g.ny_ + 1;
    std::vector<char> node_used((g.nx_ + 1) * stride, 0);
    for (std::size_t a = 0; a < ex; ++a)
        for (std::size_t b = 0; b < ey; ++b)
            if (active[a * ey + b])
                for (std::size_t di = 0; di < 3; ++di)
                    for (std::size_t dj = 0; dj < 3; ++dj) node_used[(2 * a + di) * stride + 2 * b + dj] = 1;

    g.velocity_index_.assign(node_used.size(), kNoDof);
    std::vector<std::size_t> pressure_index(node_used.size(), kNoDof);
    for (std::size_t i = 0; i <= g.nx_; ++i)
        for (std::size_t j = 0; j <= g.ny_; ++j) {
            if (!node_used[i * stride + j]) continue;
            g.velocity_index_[i * stride + j] = g.velocity_nodes_.size();
            g.velocity_nodes_.push_back({i, j});
            if (i % 2 == 0 && j % 2 == 0) {
                pressure_index[i * stride + j] = g.pressure_nodes_.size();
                g.pressure_nodes_.push_back({i, j});
            }
        }

    for (std::size_t a = 0; a < ex; ++a)
        for (std::size_t b = 0; b < ey; ++b) {
            if (!active[a * ey + b]) continue;
            Element e{};
            for (std::size_t lb = 0; lb < 3; ++lb)
                for (std::size_t la = 0; la < 3; ++la)
                    e.velocity_nodes[la + 3 * lb] = g.velocity_index_[(2 * a + la) * stride + 2 * b + lb];
            for (std::size_t lb = 0; lb < 2; ++lb)
                for (std::size_t la = 0; la < 2; ++la)
                    e.pressure_nodes[la + 2 * lb] = pressure_index[(2 * a + 2 * la) * stride + 2 * b + 2 * lb];
            e.x0 = g.x0_ + static_cast<double>(a) * eh;
            e.y0 = g.y0_ + static_cast<double>(b) * eh;
            g.elements_.push_back(e);

            const auto& v = e.velocity_nodes;
            const long la = static_cast<long>(a);
            const long lb = static_cast<long>(b);
            if (!is_active(la - 1, lb)) g.boundary_edges_.push_back({Side::Left, {v[0], v[3], v[6]}});
            if (!is_active(la + 1, lb)) g.boundary_edges_.push_back({Side::Right, {v[2], v[5], v[8]}});
            if (!is_active(la, lb - 1)) g.boundary_edges_.push_back({Side::Bottom, {v[0], v[1], v[2]}});
            if (!is_active(la, lb + 1)) g.boundary_edges_.push_back({Side::Top, {v[6], v[7], v[8]}});
        }
    return g;
}

} // namespace uzawa::fem

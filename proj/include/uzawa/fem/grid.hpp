#pragma once

#include <array>
#include <cstddef>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

namespace uzawa::fem {

enum class Domain { Channel, Cavity, Obstacle, Step };

std::string_view to_string(Domain d);
Domain parse_domain(std::string_view name);

inline constexpr std::size_t kNoDof = std::numeric_limits<std::size_t>::max();

/// One active biquadratic element: 9 velocity nodes in tensor order (a + 3b,
/// a along x) and the 4 pressure nodes at its corners (a + 2b).
struct Element {
    std::array<std::size_t, 9> velocity_nodes;
    std::array<std::size_t, 4> pressure_nodes;
    double x0;  ///< lower-left corner
    double y0;
};

/// Which side of an element a boundary edge lies on.
enum class Side { Left, Right, Bottom, Top };

/// A boundary edge of the active region with its three velocity nodes.
struct BoundaryEdge {
    Side side;
    std::array<std::size_t, 3> nodes;
};

/**
 * Uniform Q2-Q1 grid on one of the four benchmark geometries.
 *
 * The nominal size n counts velocity-node intervals across the vertical extent
 * [-1, 1], so the spacing is h = 2/n and each Q2 element spans 2h. A square
 * "n x n" grid therefore has (n+1)^2 velocity nodes and (n/2+1)^2 pressure
 * nodes, which gives 2(n+1)^2 + (n/2+1)^2 unknowns.
 *
 * Nodes are numbered lexicographically with y running fastest; masked nodes
 * (inside the obstacle, below-left of the step) get no number.
 */
class StructuredGrid {
public:
    Domain domain() const noexcept { return domain_; }
    std::size_t n() const noexcept { return n_; }
    double spacing() const noexcept { return h_; }
    std::size_t x_intervals() const noexcept { return nx_; }
    std::size_t y_intervals() const noexcept { return ny_; }
    double x_min() const noexcept { return x0_; }
    double x_max() const noexcept { return x0_ + static_cast<double>(nx_) * h_; }
    double y_min() const noexcept { return y0_; }
    double y_max() const noexcept { return y0_ + static_cast<double>(ny_) * h_; }

    std::size_t num_velocity_nodes() const noexcept { return velocity_nodes_.size(); }
    std::size_t num_pressure_nodes() const noexcept { return pressure_nodes_.size(); }
    std::size_t num_velocity_dofs() const noexcept { return 2 * velocity_nodes_.size(); }
    std::size_t num_unknowns() const noexcept { return num_velocity_dofs() + num_pressure_nodes(); }

    const std::vector<Element>& elements() const noexcept { return elements_; }
    const std::vector<BoundaryEdge>& boundary_edges() const noexcept { return boundary_edges_; }

    /// Lattice position (i, j) of a numbered velocity / pressure node.
    std::array<std::size_t, 2> velocity_lattice(std::size_t node) const { return velocity_nodes_[node]; }
    std::array<std::size_t, 2> pressure_lattice(std::size_t node) const { return pressure_nodes_[node]; }
    std::array<double, 2> velocity_coord(std::size_t node) const;
    std::array<double, 2> pressure_coord(std::size_t node) const;

    /// Velocity node number at lattice point (i, j), or kNoDof when masked.
    std::size_t velocity_node_at(std::size_t i, std::size_t j) const { return velocity_index_[i * (ny_ + 1) + j]; }

    /// Human-readable grid label in the tables' convention (e.g. "16x32").
    std::string label() const;

    friend StructuredGrid build_grid(Domain domain, std::size_t n);

private:
    Domain domain_ = Domain::Channel;
    std::size_t n_ = 0;
    std::size_t nx_ = 0;
    std::size_t ny_ = 0;
    double x0_ = 0.0;
    double y0_ = 0.0;
    double h_ = 0.0;
    std::vector<std::size_t> velocity_index_;
    std::vector<std::array<std::size_t, 2>> velocity_nodes_;
    std::vector<std::array<std::size_t, 2>> pressure_nodes_;
    std::vector<Element> elements_;
    std::vector<BoundaryEdge> boundary_edges_;
};

/**
 * Build the grid for a geometry. n must be even and at least 8; the obstacle
 * needs n divisible by 16 and the step n divisible by 4 so that the internal
 * corners fall on element boundaries.
 *
 *  - channel, cavity: [-1,1]^2
 *  - obstacle: [0,8]x[-1,1] minus the square [1.75,2.25]x[-0.25,0.25]
 *  - step: [-1,5]x[-1,1] minus [-1,0)x[-1,0)
 */
StructuredGrid build_grid(Domain domain, std::size_t n);

} // namespace uzawa::fem

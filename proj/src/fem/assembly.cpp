#include "uzawa/fem/assembly.hpp"

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace uzawa::fem {

using la::SparseMatrix;
using la::Triplet;
using la::Vector;

std::string_view to_string(Equation e)
{
    return e == Equation::Stokes ? "stokes" : "oseen";
}

Equation parse_equation(std::string_view name)
{
    if (name == "stokes" || name == "Stokes") return Equation::Stokes;
    if (name == "oseen" || name == "Oseen") return Equation::Oseen;
    throw std::invalid_argument("unknown equation '" + std::string(name) + "' (expected stokes or oseen)");
}

namespace {

// 3-point Gauss rule on [-1, 1]; exact through degree 5.
constexpr std::array<double, 3> kGaussPoints{-0.7745966692414834, 0.0, 0.7745966692414834};
constexpr std::array<double, 3> kGaussWeights{5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};

double quad1d(int a, double t)
{
    switch (a) {
    case 0: return 0.5 * t * (t - 1.0);
    case 1: return 1.0 - t * t;
    default: return 0.5 * t * (t + 1.0);
    }
}

double quad1d_deriv(int a, double t)
{
    switch (a) {
    case 0: return t - 0.5;
    case 1: return -2.0 * t;
    default: return t + 0.5;
    }
}

double lin1d(int a, double t)
{
    return a == 0 ? 0.5 * (1.0 - t) : 0.5 * (1.0 + t);
}

/// Q2 and Q1 shape data at the 9 quadrature points of the reference square.
struct ReferenceTable {
    struct Point {
        double weight;
        std::array<double, 9> phi, dphi_dxi, dphi_deta;
        std::array<double, 4> psi;
    };
    std::array<Point, 9> points{};

    ReferenceTable()
    {
        for (int qi = 0; qi < 3; ++qi)
            for (int qj = 0; qj < 3; ++qj) {
                auto& p = points[static_cast<std::size_t>(qi + 3 * qj)];
                const double xi = kGaussPoints[static_cast<std::size_t>(qi)];
                const double eta = kGaussPoints[static_cast<std::size_t>(qj)];
                p.weight = kGaussWeights[static_cast<std::size_t>(qi)] * kGaussWeights[static_cast<std::size_t>(qj)];
                for (int b = 0; b < 3; ++b)
                    for (int a = 0; a < 3; ++a) {
                        const auto k = static_cast<std::size_t>(a + 3 * b);
                        p.phi[k] = quad1d(a, xi) * quad1d(b, eta);
                        p.dphi_dxi[k] = quad1d_deriv(a, xi) * quad1d(b, eta);
                        p.dphi_deta[k] = quad1d(a, xi) * quad1d_deriv(b, eta);
                    }
                for (int b = 0; b < 2; ++b)
                    for (int a = 0; a < 2; ++a) p.psi[static_cast<std::size_t>(a + 2 * b)] = lin1d(a, xi) * lin1d(b, eta);
            }
    }
};

const ReferenceTable& reference()
{
    static const ReferenceTable table;
    return table;
}

// Every element is the square [x0, x0 + 2h] x [y0, y0 + 2h]; x = x0 + h (1 + xi),
// so d/dx = (1/h) d/dxi and dx dy = h^2 dxi deta.
template <std::size_t R, std::size_t C>
using Local = std::array<std::array<double, C>, R>;

Local<9, 9> element_stiffness()
{
    Local<9, 9> k{};
    for (const auto& p : reference().points)
        for (std::size_t i = 0; i < 9; ++i)
            for (std::size_t j = 0; j < 9; ++j)
                k[i][j] += p.weight * (p.dphi_dxi[i] * p.dphi_dxi[j] + p.dphi_deta[i] * p.dphi_deta[j]);
    return k;
}

Local<9, 9> element_mass(double h)
{
    Local<9, 9> m{};
    for (const auto& p : reference().points)
        for (std::size_t i = 0; i < 9; ++i)
            for (std::size_t j = 0; j < 9; ++j) m[i][j] += p.weight * h * h * p.phi[i] * p.phi[j];
    return m;
}

std::array<Local<4, 9>, 2> element_divergence(double h)
{
    std::array<Local<4, 9>, 2> b{};
    for (const auto& p : reference().points)
        for (std::size_t q = 0; q < 4; ++q)
            for (std::size_t j = 0; j < 9; ++j) {
                b[0][q][j] -= p.weight * h * p.psi[q] * p.dphi_dxi[j];
                b[1][q][j] -= p.weight * h * p.psi[q] * p.dphi_deta[j];
            }
    return b;
}

Local<4, 4> element_pressure_mass(double h)
{
    Local<4, 4> m{};
    for (const auto& p : reference().points)
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = 0; j < 4; ++j) m[i][j] += p.weight * h * h * p.psi[i] * p.psi[j];
    return m;
}

Local<9, 9> element_convection(double h, const std::array<double, 9>& wx, const std::array<double, 9>& wy)
{
    Local<9, 9> n{};
    for (const auto& p : reference().points) {
        double ux = 0.0, uy = 0.0;
        for (std::size_t k = 0; k < 9; ++k) {
            ux += wx[k] * p.phi[k];
            uy += wy[k] * p.phi[k];
        }
        for (std::size_t i = 0; i < 9; ++i)
            for (std::size_t j = 0; j < 9; ++j)
                n[i][j] += p.weight * h * (ux * p.dphi_dxi[j] + uy * p.dphi_deta[j]) * p.phi[i];
    }
    return n;
}

SparseMatrix scatter_scalar(const StructuredGrid& grid, const Local<9, 9>& local)
{
    std::vector<Triplet> t;
    t.reserve(grid.elements().size() * 81);
    for (const auto& e : grid.elements())
        for (std::size_t i = 0; i < 9; ++i)
            for (std::size_t j = 0; j < 9; ++j) t.push_back({e.velocity_nodes[i], e.velocity_nodes[j], local[i][j]});
    return SparseMatrix::from_triplets(grid.num_velocity_nodes(), grid.num_velocity_nodes(), std::move(t));
}

} // namespace

Vector SaddleSystem::apply(std::span<const double> xi) const
{
    la::require_size(xi.size(), size(), "SaddleSystem::apply");
    const auto u = xi.first(num_velocity());
    const auto p = xi.subspan(num_velocity());
    Vector top = A.multiply(u);
    la::axpy(1.0, B.multiply_transpose(p), top);
    return la::concat(top, B.multiply(u));
}

Vector SaddleSystem::residual(std::span<const double> xi) const
{
    Vector r = rhs();
    la::axpy(-1.0, apply(xi), r);
    return r;
}

ComponentBlocks SaddleSystem::component_blocks() const
{
    if (num_velocity() % 2 != 0)
        throw la::DimensionError("component_blocks: velocity size " + std::to_string(num_velocity()) + " is odd");
    const std::size_t nv = num_velocity() / 2;
    const std::size_t np = num_pressure();
    if (A.block(0, nv, nv, 2 * nv).max_abs() != 0.0 || A.block(nv, 2 * nv, 0, nv).max_abs() != 0.0)
        throw std::invalid_argument("component_blocks: A couples the two velocity components");
    ComponentBlocks c;
    c.a1 = A.block(0, nv, 0, nv);
    c.a2 = A.block(nv, 2 * nv, nv, 2 * nv);
    c.b1 = B.block(0, np, 0, nv);
    c.b2 = B.block(0, np, nv, 2 * nv);
    return c;
}

bool SaddleSystem::has_pressure_nullspace(double tol) const
{
    const Vector ones(num_pressure(), 1.0);
    return la::norm_inf(B.multiply_transpose(ones)) <= tol * std::max(1.0, B.max_abs());
}

SparseMatrix assemble_scalar_stiffness(const StructuredGrid& grid)
{
    return scatter_scalar(grid, element_stiffness());
}

SparseMatrix assemble_scalar_mass(const StructuredGrid& grid)
{
    return scatter_scalar(grid, element_mass(grid.spacing()));
}

SparseMatrix assemble_convection(const StructuredGrid& grid, std::span<const double> wind)
{
    const std::size_t nv = grid.num_velocity_nodes();
    if (wind.size() != 2 * nv) {
        throw la::DimensionError("assemble_convection: wind has length " + std::to_string(wind.size()) +
                                 ", expected " + std::to_string(2 * nv));
    }
    std::vector<Triplet> t;
    t.reserve(grid.elements().size() * 81);
    for (const auto& e : grid.elements()) {
        std::array<double, 9> wx{}, wy{};
        for (std::size_t k = 0; k < 9; ++k) {
            wx[k] = wind[e.velocity_nodes[k]];
            wy[k] = wind[nv + e.velocity_nodes[k]];
        }
        const auto local = element_convection(grid.spacing(), wx, wy);
        for (std::size_t i = 0; i < 9; ++i)
            for (std::size_t j = 0; j < 9; ++j) t.push_back({e.velocity_nodes[i], e.velocity_nodes[j], local[i][j]});
    }
    return SparseMatrix::from_triplets(nv, nv, std::move(t));
}

SparseMatrix assemble_divergence(const StructuredGrid& grid)
{
    const std::size_t nv = grid.num_velocity_nodes();
    const auto local = element_divergence(grid.spacing());
    std::vector<Triplet> t;
    t.reserve(grid.elements().size() * 72);
    for (const auto& e : grid.elements())
        for (std::size_t c = 0; c < 2; ++c)
            for (std::size_t q = 0; q < 4; ++q)
                for (std::size_t j = 0; j < 9; ++j)
                    t.push_back({e.pressure_nodes[q], c * nv + e.velocity_nodes[j], local[c][q][j]});
    return SparseMatrix::from_triplets(grid.num_pressure_nodes(), 2 * nv, std::move(t));
}

SparseMatrix assemble_pressure_mass(const StructuredGrid& grid)
{
    const auto local = element_pressure_mass(grid.spacing());
    std::vector<Triplet> t;
    t.reserve(grid.elements().size() * 16);
    for (const auto& e : grid.elements())
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = 0; j < 4; ++j) t.push_back({e.pressure_nodes[i], e.pressure_nodes[j], local[i][j]});
    return SparseMatrix::from_triplets(grid.num_pressure_nodes(), grid.num_pressure_nodes(), std::move(t));
}

SaddleSystem assemble(const StructuredGrid& grid, const ProblemSpec& spec)
{
    const std::size_t nv = grid.num_velocity_nodes();
    if (spec.equation == Equation::Stokes && spec.wind)
        throw std::invalid_argument("assemble: Stokes problem must not carry a wind field");
    if (spec.equation == Equation::Oseen && !spec.wind)
        throw std::invalid_argument("assemble: Oseen problem requires a wind field");
    if (spec.wind && spec.wind->size() != 2 * nv) {
        throw la::DimensionError("assemble: wind has length " + std::to_string(spec.wind->size()) +
                                 ", expected " + std::to_string(2 * nv));
    }
    if (!(spec.nu > 0.0)) throw std::invalid_argument("assemble: viscosity must be positive");

    SaddleSystem sys;
    sys.domain = grid.domain();
    sys.grid_n = grid.n();
    sys.equation = spec.equation;
    sys.nu = spec.nu;
    sys.dirichlet = classify_boundary(grid, boundary_profiles(grid.domain()));
    const auto& fixed = sys.dirichlet.fixed;
    const auto& values = sys.dirichlet.values;

    SparseMatrix scalar = assemble_scalar_stiffness(grid);
    if (spec.wind) scalar = la::add(scalar, assemble_convection(grid, *spec.wind), spec.nu, 1.0);
    else scalar = la::add(scalar, SparseMatrix(nv, nv), spec.nu, 0.0);

    const std::size_t nu_dofs = 2 * nv;
    sys.f.assign(nu_dofs, 0.0);
    std::vector<Triplet> a_entries;
    a_entries.reserve(2 * scalar.nnz());
    const auto offsets = scalar.row_offsets();
    const auto cols = scalar.col_indices();
    const auto vals = scalar.values();
    for (std::size_t c = 0; c < 2; ++c)
        for (std::size_t i = 0; i < nv; ++i) {
            const std::size_t row = c * nv + i;
            if (fixed[row]) continue;
            for (std::size_t k = offsets[i]; k < offsets[i + 1]; ++k) {
                const std::size_t col = c * nv + cols[k];
                if (fixed[col]) sys.f[row] -= vals[k] * values[col];
                else a_entries.push_back({row, col, vals[k]});
            }
        }
    for (std::size_t d = 0; d < nu_dofs; ++d)
        if (fixed[d]) {
            a_entries.push_back({d, d, 1.0});
            sys.f[d] = values[d];
        }
    sys.A = SparseMatrix::from_triplets(nu_dofs, nu_dofs, std::move(a_entries));

    const SparseMatrix div = assemble_divergence(grid);
    sys.g.assign(div.rows(), 0.0);
    std::vector<Triplet> b_entries;
    b_entries.reserve(div.nnz());
    for (const auto& e : div.to_triplets()) {
        if (fixed[e.col]) sys.g[e.row] -= e.value * values[e.col];
        else b_entries.push_back(e);
    }
    sys.B = SparseMatrix::from_triplets(div.rows(), div.cols(), std::move(b_entries));

    const Vector mdiag = assemble_scalar_mass(grid).diagonal_entries();
    sys.Mv_diag = la::concat(mdiag, mdiag);
    sys.Mp = assemble_pressure_mass(grid);
    return sys;
}

std::vector<std::size_t> interleaved_to_split(std::size_t num_nodes)
{
    std::vector<std::size_t> perm(2 * num_nodes);
    for (std::size_t i = 0; i < num_nodes; ++i) {
        perm[2 * i] = i;
        perm[2 * i + 1] = num_nodes + i;
    }
    return perm;
}

std::vector<std::size_t> split_to_interleaved(std::size_t num_nodes)
{
    std::vector<std::size_t> perm(2 * num_nodes);
    for (std::size_t i = 0; i < num_nodes; ++i) {
        perm[i] = 2 * i;
        perm[num_nodes + i] = 2 * i + 1;
    }
    return perm;
}

} // namespace uzawa::fem

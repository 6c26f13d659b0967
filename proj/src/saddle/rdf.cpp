#include "uzawa/saddle/rdf.hpp"

#include <stdexcept>
#include <string>

namespace uzawa::saddle {

void RdfConfig::validate() const
{
    if (!(beta > 0.0)) throw std::invalid_argument("RdfConfig: beta must be positive, got " + std::to_string(beta));
    if (!(inner_tol > 0.0)) throw std::invalid_argument("RdfConfig: inner_tol must be positive");
}

namespace {

class BlockBuilder {
public:
    explicit BlockBuilder(std::size_t n) : n_(n) {}

    void put(const SparseMatrix& m, std::size_t r0, std::size_t c0, double s = 1.0)
    {
        for (const auto& t : m.to_triplets()) entries_.push_back({t.row + r0, t.col + c0, s * t.value});
    }

    void identity(std::size_t r0, std::size_t len, double s = 1.0)
    {
        for (std::size_t i = 0; i < len; ++i) entries_.push_back({r0 + i, r0 + i, s});
    }

    SparseMatrix build() { return SparseMatrix::from_triplets(n_, n_, std::move(entries_)); }

private:
    std::size_t n_;
    std::vector<la::Triplet> entries_;
};

SparseMatrix augmented(const SparseMatrix& a, const SparseMatrix& b, double beta)
{
    return la::add(a, la::multiply(b.transpose(), b), 1.0, 1.0 / beta);
}

struct RdfApply {
    std::size_t n1, n2, np;
    double beta;
    SparseMatrix b1, b2;
    MatrixSolver ahat1, ahat2;

    void operator()(std::span<const double> r, std::span<double> x) const
    {
        const auto r1 = r.first(n1);
        const auto r2 = r.subspan(n1, n2);
        const auto r3 = r.subspan(n1 + n2, np);
        // F1^{-1}
        Vector z1(r1.begin(), r1.end());
        la::axpy(-1.0 / beta, b1.multiply_transpose(r3), z1);
        // F2^{-1}
        const Vector y1 = ahat1.solve(z1);
        Vector y3(r3.begin(), r3.end());
        la::axpy(1.0, b1.multiply(y1), y3);
        // F3^{-1}
        Vector w3 = y3;
        la::scale(1.0 / beta, w3);
        Vector t(r2.begin(), r2.end());
        la::axpy(-1.0, b2.multiply_transpose(w3), t);
        const Vector w2 = ahat2.solve(t);
        // F4^{-1}
        la::axpy(1.0 / beta, b2.multiply(w2), w3);

        std::copy(y1.begin(), y1.end(), x.begin());
        std::copy(w2.begin(), w2.end(), x.begin() + static_cast<std::ptrdiff_t>(n1));
        std::copy(w3.begin(), w3.end(), x.begin() + static_cast<std::ptrdiff_t>(n1 + n2));
    }
};

} // namespace

LinearOperator rdf_preconditioner(const fem::SaddleSystem& sys, const RdfConfig& cfg)
{
    cfg.validate();
    const auto blocks = sys.component_blocks();
    const double beta = cfg.beta;
    auto apply = std::make_shared<const RdfApply>(RdfApply{
        blocks.a1.rows(), blocks.a2.rows(), sys.num_pressure(), beta, blocks.b1, blocks.b2,
        MatrixSolver(augmented(blocks.a1, blocks.b1, beta), cfg.inner, cfg.inner_tol),
        MatrixSolver(augmented(blocks.a2, blocks.b2, beta), cfg.inner, cfg.inner_tol)});
    const std::size_t n = sys.size();
    return {n, n, [apply](std::span<const double> r, std::span<double> x) { (*apply)(r, x); }};
}

SparseMatrix rdf_matrix(const fem::SaddleSystem& sys, double beta)
{
    if (!(beta > 0.0)) throw std::invalid_argument("rdf_matrix: beta must be positive");
    const auto bl = sys.component_blocks();
    const std::size_t n1 = bl.a1.rows(), n2 = bl.a2.rows(), np = sys.num_pressure();
    BlockBuilder m(sys.size());
    m.put(bl.a1, 0, 0);
    m.put(la::multiply(bl.b1.transpose(), bl.b2), 0, n1, -1.0 / beta);
    m.put(bl.b1.transpose(), 0, n1 + n2);
    m.put(bl.a2, n1, n1);
    m.put(bl.b2.transpose(), n1, n1 + n2);
    m.put(bl.b1, n1 + n2, 0, -1.0);
    m.put(bl.b2, n1 + n2, n1, -1.0);
    m.identity(n1 + n2, np, beta);
    return m.build();
}

std::array<SparseMatrix, 4> rdf_factors(const fem::SaddleSystem& sys, double beta)
{
    if (!(beta > 0.0)) throw std::invalid_argument("rdf_factors: beta must be positive");
    const auto bl = sys.component_blocks();
    const std::size_t n1 = bl.a1.rows(), n2 = bl.a2.rows(), np = sys.num_pressure();
    const std::size_t n = sys.size();

    BlockBuilder f1(n);
    f1.identity(0, n);
    f1.put(bl.b1.transpose(), 0, n1 + n2, 1.0 / beta);

    BlockBuilder f2(n);
    f2.put(augmented(bl.a1, bl.b1, beta), 0, 0);
    f2.identity(n1, n2 + np);
    f2.put(bl.b1, n1 + n2, 0, -1.0);

    BlockBuilder f3(n);
    f3.identity(0, n1);
    f3.put(augmented(bl.a2, bl.b2, beta), n1, n1);
    f3.put(bl.b2.transpose(), n1, n1 + n2);
    f3.identity(n1 + n2, np, beta);

    BlockBuilder f4(n);
    f4.identity(0, n);
    f4.put(bl.b2, n1 + n2, n1, -1.0 / beta);

    return {f1.build(), f2.build(), f3.build(), f4.build()};
}

std::pair<LinearOperator, Vector> alternate_saddle_system(const fem::SaddleSystem& sys)
{
    auto a = std::make_shared<const SparseMatrix>(sys.A);
    auto b = std::make_shared<const SparseMatrix>(sys.B);
    const std::size_t nv = sys.num_velocity();
    LinearOperator op(sys.size(), sys.size(), [a, b, nv](std::span<const double> x, std::span<double> y) {
        const auto u = x.first(nv);
        const auto p = x.subspan(nv);
        a->multiply(u, y.first(nv));
        const Vector btp = b->multiply_transpose(p);
        for (std::size_t i = 0; i < nv; ++i) y[i] += btp[i];
        b->multiply(u, y.subspan(nv));
        for (std::size_t i = nv; i < y.size(); ++i) y[i] = -y[i];
    });
    Vector rhs = sys.rhs();
    for (std::size_t i = nv; i < rhs.size(); ++i) rhs[i] = -rhs[i];
    return {std::move(op), std::move(rhs)};
}

} // namespace uzawa::saddle

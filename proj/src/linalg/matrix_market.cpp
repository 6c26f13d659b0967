#include "uzawa/linalg/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace uzawa::la {

namespace {

std::string lower(std::string s)
{
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

struct Banner {
    std::string format;
    std::string field;
    std::string symmetry;
};

Banner read_banner(std::istream& in, std::size_t& line_no)
{
    std::string line;
    if (!std::getline(in, line)) throw ParseError(1, "empty input, expected %%MatrixMarket banner");
    line_no = 1;
    std::istringstream ss(line);
    std::string tag, object;
    Banner b;
    ss >> tag >> object >> b.format >> b.field >> b.symmetry;
    if (tag != "%%MatrixMarket") throw ParseError(line_no, "missing %%MatrixMarket banner");
    if (lower(object) != "matrix") throw ParseError(line_no, "unsupported object '" + object + "'");
    b.format = lower(b.format);
    b.field = lower(b.field);
    b.symmetry = lower(b.symmetry);
    if (b.field != "real" && b.field != "integer") throw ParseError(line_no, "unsupported field '" + b.field + "'");
    if (b.symmetry != "general" && b.symmetry != "symmetric")
        throw ParseError(line_no, "unsupported symmetry '" + b.symmetry + "'");
    return b;
}

// Next non-comment, non-blank line.
bool next_data_line(std::istream& in, std::string& line, std::size_t& line_no)
{
    while (std::getline(in, line)) {
        ++line_no;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '%') continue;
        return true;
    }
    return false;
}

std::ofstream open_out(const std::filesystem::path& path)
{
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    return out;
}

} // namespace

SparseMatrix mm_read(std::istream& in)
{
    std::size_t line_no = 0;
    const Banner banner = read_banner(in, line_no);
    if (banner.format != "coordinate") throw ParseError(line_no, "expected coordinate format");

    std::string line;
    if (!next_data_line(in, line, line_no)) throw ParseError(line_no + 1, "missing size line");
    std::istringstream size_line(line);
    long long nrows = -1, ncols = -1, nnz = -1;
    if (!(size_line >> nrows >> ncols >> nnz) || nrows < 0 || ncols < 0 || nnz < 0)
        throw ParseError(line_no, "malformed size line");
    const bool symmetric = banner.symmetry == "symmetric";
    if (symmetric && nrows != ncols) throw ParseError(line_no, "symmetric matrix must be square");

    std::vector<Triplet> entries;
    entries.reserve(static_cast<std::size_t>(symmetric ? 2 * nnz : nnz));
    for (long long k = 0; k < nnz; ++k) {
        if (!next_data_line(in, line, line_no))
            throw ParseError(line_no + 1, "expected " + std::to_string(nnz) + " entries, found " + std::to_string(k));
        std::istringstream es(line);
        long long i = 0, j = 0;
        double v = 0.0;
        if (!(es >> i >> j >> v)) throw ParseError(line_no, "malformed entry");
        if (i < 1 || j < 1 || i > nrows || j > ncols) throw ParseError(line_no, "index out of range");
        entries.push_back({static_cast<std::size_t>(i - 1), static_cast<std::size_t>(j - 1), v});
        if (symmetric && i != j) entries.push_back({static_cast<std::size_t>(j - 1), static_cast<std::size_t>(i - 1), v});
    }
    return SparseMatrix::from_triplets(static_cast<std::size_t>(nrows), static_cast<std::size_t>(ncols),
                                       std::move(entries));
}

SparseMatrix mm_read(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
    return mm_read(in);
}

void mm_write(const SparseMatrix& m, std::ostream& out)
{
    out << "%%MatrixMarket matrix coordinate real general\n";
    out << m.rows() << ' ' << m.cols() << ' ' << m.nnz() << '\n';
    char buf[64];
    const auto offsets = m.row_offsets();
    const auto cols = m.col_indices();
    const auto vals = m.values();
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t k = offsets[i]; k < offsets[i + 1]; ++k) {
            std::snprintf(buf, sizeof buf, "%.17g", vals[k]);
            out << (i + 1) << ' ' << (cols[k] + 1) << ' ' << buf << '\n';
        }
}

void mm_write(const SparseMatrix& m, const std::filesystem::path& path)
{
    auto out = open_out(path);
    mm_write(m, out);
}

void mm_write_vector(std::span<const double> v, const std::filesystem::path& path)
{
    auto out = open_out(path);
    out << "%%MatrixMarket matrix array real general\n" << v.size() << " 1\n";
    char buf[64];
    for (double x : v) {
        std::snprintf(buf, sizeof buf, "%.17g", x);
        out << buf << '\n';
    }
}

Vector mm_read_vector(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path.string() + "'");
    std::size_t line_no = 0;
    const Banner banner = read_banner(in, line_no);
    if (banner.format != "array") throw ParseError(line_no, "expected array format");
    std::string line;
    if (!next_data_line(in, line, line_no)) throw ParseError(line_no + 1, "missing size line");
    std::istringstream size_line(line);
    long long nrows = -1, ncols = -1;
    if (!(size_line >> nrows >> ncols) || nrows < 0 || ncols != 1) throw ParseError(line_no, "expected n x 1 array");
    Vector v(static_cast<std::size_t>(nrows));
    for (auto& x : v) {
        if (!next_data_line(in, line, line_no)) throw ParseError(line_no + 1, "truncated array");
        std::istringstream es(line);
        if (!(es >> x)) throw ParseError(line_no, "malformed value");
    }
    return v;
}

} // namespace uzawa::la

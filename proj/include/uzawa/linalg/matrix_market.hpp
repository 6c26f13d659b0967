#pragma once

#include "uzawa/linalg/sparse_matrix.hpp"

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>

namespace uzawa::la {

/// Malformed Matrix Market input; message carries the 1-based line number.
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line)
    {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

// Coordinate real format. Reading accepts the general and symmetric fields;
// writing always emits general with full double precision.
SparseMatrix mm_read(std::istream& in);
SparseMatrix mm_read(const std::filesystem::path& path);
void mm_write(const SparseMatrix& m, std::ostream& out);
void mm_write(const SparseMatrix& m, const std::filesystem::path& path);

/// Dense vectors go out as "array real general" (one column).
void mm_write_vector(std::span<const double> v, const std::filesystem::path& path);
Vector mm_read_vector(const std::filesystem::path& path);

} // namespace uzawa::la

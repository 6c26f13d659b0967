#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace uzawa::la {

/// Dense real vector. Length is fixed by whoever constructs it.
using Vector = std::vector<double>;

/// Thrown when operand sizes disagree.
class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Thrown when an iterative or direct solve cannot deliver its contract.
class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline void require_size(std::size_t got, std::size_t expected, const char* what)
{
    if (got != expected) {
        throw DimensionError(std::string(what) + ": expected length " + std::to_string(expected) +
                             ", got " + std::to_string(got));
    }
}

inline double dot(std::span<const double> x, std::span<const double> y)
{
    require_size(y.size(), x.size(), "dot");
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
}

inline double norm2(std::span<const double> x)
{
    double s = 0.0;
    for (double v : x) s += v * v;
    return std::sqrt(s);
}

inline double norm_inf(std::span<const double> x)
{
    double s = 0.0;
    for (double v : x) s = std::max(s, std::abs(v));
    return s;
}

/// y += a*x
inline void axpy(double a, std::span<const double> x, std::span<double> y)
{
    require_size(y.size(), x.size(), "axpy");
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

inline void scale(double a, std::span<double> x)
{
    for (double& v : x) v *= a;
}

inline Vector add(std::span<const double> x, std::span<const double> y)
{
    require_size(y.size(), x.size(), "add");
    Vector z(x.begin(), x.end());
    for (std::size_t i = 0; i < x.size(); ++i) z[i] += y[i];
    return z;
}

inline Vector subtract(std::span<const double> x, std::span<const double> y)
{
    require_size(y.size(), x.size(), "subtract");
    Vector z(x.begin(), x.end());
    for (std::size_t i = 0; i < x.size(); ++i) z[i] -= y[i];
    return z;
}

inline bool all_finite(std::span<const double> x)
{
    for (double v : x)
        if (!std::isfinite(v)) return false;
    return true;
}

/// Concatenate (u, p) into one block vector.
inline Vector concat(std::span<const double> u, std::span<const double> p)
{
    Vector z;
    z.reserve(u.size() + p.size());
    z.insert(z.end(), u.begin(), u.end());
    z.insert(z.end(), p.begin(), p.end());
    return z;
}

} // namespace uzawa::la

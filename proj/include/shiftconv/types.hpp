#ifndef SHIFTCONV_TYPES_HPP
#define SHIFTCONV_TYPES_HPP

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace shiftconv {

using cplx = std::complex<double>;

constexpr double PI = 3.14159265358979323846264338327950288;
constexpr double EULER_GAMMA = 0.57721566490153286060651209008240243;

// Error taxonomy shared by all modules.  Every failure mode a caller can
// recover from gets its own type; anything else is a plain logic_error.
struct DomainError : std::runtime_error {
    explicit DomainError(const std::string& m) : std::runtime_error("domain error: " + m) {}
};
struct PoleError : std::runtime_error {
    explicit PoleError(const std::string& m) : std::runtime_error("pole error: " + m) {}
};
struct ConvergenceError : std::runtime_error {
    explicit ConvergenceError(const std::string& m) : std::runtime_error("convergence error: " + m) {}
};
struct BranchError : std::runtime_error {
    explicit BranchError(const std::string& m) : std::runtime_error("branch cut: " + m) {}
};
struct ContourError : std::runtime_error {
    explicit ContourError(const std::string& m) : std::runtime_error("contour error: " + m) {}
};
struct TruncationError : std::runtime_error {
    explicit TruncationError(const std::string& m) : std::runtime_error("truncation error: " + m) {}
};
struct MeshError : std::runtime_error {
    explicit MeshError(const std::string& m) : std::runtime_error("mesh error: " + m) {}
};
struct GapError : std::runtime_error {
    explicit GapError(const std::string& m) : std::runtime_error("gap error: " + m) {}
};
struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& m) : std::runtime_error("parse error: " + m) {}
};
struct ResourceError : std::runtime_error {
    explicit ResourceError(const std::string& m) : std::runtime_error("resource error: " + m) {}
};
struct NoDataError : std::runtime_error {
    explicit NoDataError(const std::string& m) : std::runtime_error("no data: " + m) {}
};
struct UnsupportedError : std::runtime_error {
    explicit UnsupportedError(const std::string& m) : std::runtime_error("unsupported: " + m) {}
};
struct InsufficientDataError : std::runtime_error {
    explicit InsufficientDataError(const std::string& m) : std::runtime_error("insufficient data: " + m) {}
};
struct IoError : std::runtime_error {
    explicit IoError(const std::string& m) : std::runtime_error("io error: " + m) {}
};

// Tolerances and limits for every semi-infinite or contour integral.
struct QuadratureSpec {
    double abs_tol = 1e-12;
    double rel_tol = 1e-10;
    int max_subdivisions = 64;
    // Semi-infinite integrands are cut where the decaying envelope drops
    // below abs_tol * upper_cutoff_factor.
    double upper_cutoff_factor = 1e-2;

    void validate() const {
        if (!(abs_tol > 0.0 && abs_tol < 1.0) || !(rel_tol > 0.0 && rel_tol < 1.0))
            throw DomainError("QuadratureSpec tolerances must lie in (0,1)");
        if (max_subdivisions < 8)
            throw DomainError("QuadratureSpec.max_subdivisions must be >= 8");
    }
};

// A truncated series/integral value together with the truncation point and a
// heuristic bound on the discarded tail.
struct TruncatedValue {
    cplx value{0.0, 0.0};
    double tail_bound = 0.0;
    std::int64_t truncation = 0;
};

// Exact small rational, used where floating point would hide an identity.
struct Rational {
    long long num = 0;
    long long den = 1;

    Rational() = default;
    Rational(long long n, long long d);
    Rational operator+(const Rational& o) const;
    double to_double() const { return double(num) / double(den); }
    bool operator==(const Rational& o) const { return num == o.num && den == o.den; }
};

void require_finite(const cplx& v, const char* what);
void require_finite(double v, const char* what);

} // namespace shiftconv

#endif

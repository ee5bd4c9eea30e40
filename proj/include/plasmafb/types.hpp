#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace pfb {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double norm(Vec2 a) { return std::sqrt(a.x * a.x + a.y * a.y); }

// error taxonomy; the CLI maps these onto exit codes
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DimensionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RangeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SolverError : std::runtime_error {
    double best_residual;
    explicit SolverError(const std::string& what, double residual = 0.0)
        : std::runtime_error(what), best_residual(residual) {}
};

struct TrivialSolutionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// v has no plus part (or no minus part): v is outside the ray-decomposition class W
struct NotInWError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct PathError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct OracleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InsufficientResolutionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SchemaError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct VerificationFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace pfb

#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

namespace holonomy {

// Numeric policy shared across the library. Event comparisons and path
// legality use an absolute tolerance; lattice coordinates are exact
// integers so only developed coordinates carry rounding.
inline constexpr double kEventTol = 1e-10;
inline constexpr double kConjTol = 1e-12;
inline constexpr double kBlowupThreshold = 1e12;
inline constexpr double kMonodromyTol = 1e-6;
inline constexpr std::uint64_t kDefaultSeed = 61320;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    Vec2 operator-() const { return {-x, -y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    double dot(Vec2 o) const { return x * o.x + y * o.y; }
    double norm() const { return std::hypot(x, y); }
};

// Row-major 2x2 matrix acting on Vec2 from the left.
struct Mat2 {
    double a = 1.0, b = 0.0;
    double c = 0.0, d = 1.0;

    Vec2 apply(Vec2 v) const { return {a * v.x + b * v.y, c * v.x + d * v.y}; }
    Mat2 mul(const Mat2& o) const {
        return {a * o.a + b * o.c, a * o.b + b * o.d,
                c * o.a + d * o.c, c * o.b + d * o.d};
    }
    double det() const { return a * d - b * c; }
    Mat2 inverse() const {
        const double dt = det();
        return {d / dt, -b / dt, -c / dt, a / dt};
    }
    static Mat2 diag(double u, double v) { return {u, 0.0, 0.0, v}; }
};

// Suspension-flow scaling: at transverse time tau the developed picture is
// the time-zero picture with east contracted and north expanded by lambda^tau.
inline Mat2 flow_scaling(double lambda, double tau) {
    return Mat2::diag(std::pow(lambda, -tau), std::pow(lambda, tau));
}

}  // namespace holonomy

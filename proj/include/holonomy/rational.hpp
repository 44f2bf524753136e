#pragma once

#include <cstdint>
#include <numeric>
#include <string>

#include "holonomy/errors.hpp"

namespace holonomy {

// Exact rational in [0,1) with a fixed positive denominator, used for torus
// points. Periodicity detection must not drift, so all orbit arithmetic runs
// on these and never on doubles.
struct Rat {
    long long num = 0;
    long long den = 1;

    static Rat make(long long n, long long d) {
        if (d == 0) throw Error(Err::ParseError, "zero denominator");
        if (d < 0) { n = -n; d = -d; }
        long long g = std::gcd(n < 0 ? -n : n, d);
        if (g > 1) { n /= g; d /= g; }
        return Rat{n, d};
    }

    // Reduce modulo 1 into [0,1).
    Rat mod1() const {
        long long n = num % den;
        if (n < 0) n += den;
        return Rat{n, den};
    }

    double value() const { return static_cast<double>(num) / static_cast<double>(den); }

    bool operator==(const Rat& o) const { return num * o.den == o.num * den; }
    bool operator!=(const Rat& o) const { return !(*this == o); }
};

struct Vec2Q {
    Rat x, y;
    bool operator==(const Vec2Q& o) const { return x == o.x && y == o.y; }
};

// Integer-matrix image of a rational torus point, reduced mod 1.
inline Vec2Q apply_mod1(long long a, long long b, long long c, long long d, const Vec2Q& p) {
    long long den = std::lcm(p.x.den, p.y.den);
    long long nx = p.x.num * (den / p.x.den);
    long long ny = p.y.num * (den / p.y.den);
    Vec2Q out;
    out.x = Rat::make(a * nx + b * ny, den).mod1();
    out.y = Rat::make(c * nx + d * ny, den).mod1();
    return out;
}

// Parses "num/den" (or a bare integer) into a reduced rational mod 1.
Rat parse_rational(const std::string& text);

}  // namespace holonomy

#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <optional>
#include <ostream>
#include <string>

namespace modheat {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline double to_double(const Rational& q) { return q.convert_to<double>(); }

inline bool is_perfect_square(const Integer& n, Integer* root = nullptr) {
    if (n < 0) return false;
    Integer r = boost::multiprecision::sqrt(n);
    if (root) *root = r;
    return r * r == n;
}

/// Element of the quadratic field Q[sqrt(2)], stored exactly as r + s*sqrt(2).
///
/// This is the only irrational that appears in the covering calculus: it enters
/// through the normalization w(u,v)/sqrt(d_u d_v) when d_u d_v is twice a square.
struct Sqrt2Number {
    Rational r{0};
    Rational s{0};

    Sqrt2Number() = default;
    Sqrt2Number(Rational rational_part, Rational sqrt2_part)
        : r(std::move(rational_part)), s(std::move(sqrt2_part)) {}
    explicit Sqrt2Number(const Rational& q) : r(q) {}
    explicit Sqrt2Number(long v) : r(v) {}

    static Sqrt2Number sqrt2() { return {0, 1}; }

    bool is_zero() const { return r == 0 && s == 0; }
    bool is_rational() const { return s == 0; }

    double value() const { return to_double(r) + to_double(s) * std::sqrt(2.0); }

    friend Sqrt2Number operator+(const Sqrt2Number& a, const Sqrt2Number& b) {
        return {a.r + b.r, a.s + b.s};
    }
    friend Sqrt2Number operator-(const Sqrt2Number& a, const Sqrt2Number& b) {
        return {a.r - b.r, a.s - b.s};
    }
    friend Sqrt2Number operator-(const Sqrt2Number& a) { return {-a.r, -a.s}; }
    friend Sqrt2Number operator*(const Sqrt2Number& a, const Sqrt2Number& b) {
        return {a.r * b.r + 2 * a.s * b.s, a.r * b.s + a.s * b.r};
    }
    Sqrt2Number inverse() const {
        // 1/(r + s*sqrt2) = (r - s*sqrt2)/(r^2 - 2 s^2); the norm vanishes only at 0.
        Rational norm = r * r - 2 * s * s;
        if (norm == 0) throw std::domain_error("Sqrt2Number: division by zero");
        return {r / norm, -s / norm};
    }
    friend Sqrt2Number operator/(const Sqrt2Number& a, const Sqrt2Number& b) {
        return a * b.inverse();
    }
    Sqrt2Number& operator+=(const Sqrt2Number& o) { return *this = *this + o; }
    Sqrt2Number& operator-=(const Sqrt2Number& o) { return *this = *this - o; }
    Sqrt2Number& operator*=(const Sqrt2Number& o) { return *this = *this * o; }

    friend bool operator==(const Sqrt2Number& a, const Sqrt2Number& b) {
        return a.r == b.r && a.s == b.s;
    }
    friend bool operator!=(const Sqrt2Number& a, const Sqrt2Number& b) { return !(a == b); }

    friend std::ostream& operator<<(std::ostream& os, const Sqrt2Number& v) {
        return os << v.r << " + " << v.s << "*sqrt(2)";
    }
};

/// Exact square root of a nonnegative rational inside Q[sqrt(2)], when it exists,
/// i.e. when q = c^2 (root c) or q = 2 c^2 (root c*sqrt2) for a rational c >= 0.
inline std::optional<Sqrt2Number> sqrt_in_field(const Rational& q) {
    if (q < 0) return std::nullopt;
    if (q == 0) return Sqrt2Number{};
    const Integer num = boost::multiprecision::numerator(q);
    const Integer den = boost::multiprecision::denominator(q);
    Integer rn, rd;
    if (is_perfect_square(num, &rn) && is_perfect_square(den, &rd)) {
        return Sqrt2Number{Rational(rn, rd), 0};
    }
    // q/2 in lowest terms: num and den are coprime, so exactly one factor of 2 moves.
    const Rational half = q / 2;
    const Integer hn = boost::multiprecision::numerator(half);
    const Integer hd = boost::multiprecision::denominator(half);
    if (is_perfect_square(hn, &rn) && is_perfect_square(hd, &rd)) {
        return Sqrt2Number{0, Rational(rn, rd)};
    }
    return std::nullopt;
}

}  // namespace modheat

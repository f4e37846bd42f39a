#pragma once

#include "kmn/errors.hpp"

#include <cstdint>
#include <numeric>
#include <string>

namespace kmn {

/// Exact rational number on 64-bit numerator/denominator.
/// Always stored normalized: gcd(num, den) == 1, den > 0.
/// Intermediate products are computed in 128 bits and overflow throws
/// ArithmeticOverflow instead of wrapping.
class Rational {
public:
    constexpr Rational() = default;
    Rational(long long num) : num_(num), den_(1) {}
    Rational(long long num, long long den) : num_(num), den_(den) { normalize(); }

    long long num() const { return num_; }
    long long den() const { return den_; }

    bool is_zero() const { return num_ == 0; }
    bool is_one() const { return num_ == 1 && den_ == 1; }
    bool is_integer() const { return den_ == 1; }
    bool is_negative() const { return num_ < 0; }

    friend Rational operator-(const Rational& a) { return make(-i128(a.num_), a.den_); }

    friend Rational operator+(const Rational& a, const Rational& b) {
        return make(i128(a.num_) * b.den_ + i128(b.num_) * a.den_, i128(a.den_) * b.den_);
    }
    friend Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }
    friend Rational operator*(const Rational& a, const Rational& b) {
        return make(i128(a.num_) * b.num_, i128(a.den_) * b.den_);
    }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.num_ == 0) throw DomainError("rational division by zero");
        return make(i128(a.num_) * b.den_, i128(a.den_) * b.num_);
    }

    Rational& operator+=(const Rational& o) { return *this = *this + o; }
    Rational& operator-=(const Rational& o) { return *this = *this - o; }
    Rational& operator*=(const Rational& o) { return *this = *this * o; }
    Rational& operator/=(const Rational& o) { return *this = *this / o; }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
    friend bool operator<(const Rational& a, const Rational& b) {
        return i128(a.num_) * b.den_ < i128(b.num_) * a.den_;
    }
    friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
    friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
    friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

    /// this^e for integer e; e < 0 inverts (throws on 0 base).
    Rational pow_int(long long e) const {
        Rational base = *this;
        if (e < 0) {
            if (num_ == 0) throw DomainError("0 raised to negative power");
            base = Rational(den_, num_);
            e = -e;
        }
        Rational r(1);
        while (e > 0) {
            if (e & 1) r *= base;
            base = (e > 1) ? base * base : base;
            e >>= 1;
        }
        return r;
    }

    double to_double() const {
        return static_cast<double>(num_) / static_cast<double>(den_);
    }

    std::string str() const {
        if (den_ == 1) return std::to_string(num_);
        return std::to_string(num_) + "/" + std::to_string(den_);
    }

private:
    using i128 = __int128;

    static long long clamp128(i128 v) {
        if (v > i128(INT64_MAX) || v < i128(INT64_MIN))
            throw ArithmeticOverflow("rational arithmetic overflow");
        return static_cast<long long>(v);
    }

    static Rational make(i128 num, i128 den) {
        if (den == 0) throw DomainError("rational with zero denominator");
        if (den < 0) {
            num = -num;
            den = -den;
        }
        i128 a = num < 0 ? -num : num, b = den;
        while (b) {
            i128 t = a % b;
            a = b;
            b = t;
        }
        if (a > 1) {
            num /= a;
            den /= a;
        }
        Rational r;
        r.num_ = clamp128(num);
        r.den_ = clamp128(den);
        return r;
    }

    void normalize() { *this = make(num_, den_); }

    long long num_ = 0;
    long long den_ = 1;
};

}  // namespace kmn

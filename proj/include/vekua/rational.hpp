#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

#include "vekua/util.hpp"

namespace vekua {

using BigInt = boost::multiprecision::cpp_int;

/// Arbitrary-precision rational with canonical form: gcd(num, den) = 1,
/// den > 0, zero stored as 0/1.  Kept deliberately small; only the
/// operations the solver and scanners need.
class Rational {
public:
    Rational() : num_(0), den_(1) {}
    Rational(long long n) : num_(n), den_(1) {}           // NOLINT(google-explicit-constructor)
    Rational(const BigInt& n) : num_(n), den_(1) {}       // NOLINT(google-explicit-constructor)
    Rational(BigInt n, BigInt d) : num_(std::move(n)), den_(std::move(d)) { normalize(); }

    /// Construct from an already-coprime pair, skipping the gcd.  The gcd is
    /// the dominant cost once operands reach tens of thousands of digits, so
    /// callers that can prove gcd(|n|, d) = 1 structurally use this instead.
    /// The precondition is on the caller; only signs and zero are fixed up.
    static Rational from_reduced(BigInt n, BigInt d) {
        if (d.is_zero()) throw input_error("rational with zero denominator");
        if (d < 0) { n = -n; d = -d; }
        if (n.is_zero()) d = 1;
        return Rational(std::move(n), std::move(d), already_normalized{});
    }

    const BigInt& num() const { return num_; }
    const BigInt& den() const { return den_; }

    bool is_zero() const { return num_.is_zero(); }
    bool is_integer() const { return den_ == 1; }
    int sign() const { return num_.sign(); }

    Rational operator-() const { return Rational(-num_, den_, already_normalized{}); }

    friend Rational operator+(const Rational& a, const Rational& b) {
        return Rational(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }
    friend Rational operator-(const Rational& a, const Rational& b) {
        return Rational(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
    }
    friend Rational operator*(const Rational& a, const Rational& b) {
        return Rational(a.num_ * b.num_, a.den_ * b.den_);
    }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.is_zero()) throw input_error("rational division by zero");
        return Rational(a.num_ * b.den_, a.den_ * b.num_);
    }

    Rational& operator+=(const Rational& b) { return *this = *this + b; }
    Rational& operator-=(const Rational& b) { return *this = *this - b; }
    Rational& operator*=(const Rational& b) { return *this = *this * b; }
    Rational& operator/=(const Rational& b) { return *this = *this / b; }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
    friend bool operator<(const Rational& a, const Rational& b) {
        return a.num_ * b.den_ < b.num_ * a.den_;
    }
    friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
    friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
    friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

    Rational abs() const { return num_ < 0 ? -*this : *this; }

    /// Exact integer power with non-negative exponent.
    Rational pow(unsigned e) const {
        Rational base = *this, acc = Rational(1);
        while (e) {
            if (e & 1u) acc *= base;
            base *= base;
            e >>= 1u;
        }
        return acc;
    }

    /// Round-to-nearest double; goes through a scaled quotient so
    /// long operands never overflow the conversion.
    double to_double() const {
        if (num_.is_zero()) return 0.0;
        const BigInt a = boost::multiprecision::abs(num_);
        long nb = static_cast<long>(boost::multiprecision::msb(a));
        long db = static_cast<long>(boost::multiprecision::msb(den_));
        long e = nb - db;  // log2(|value|) is within 1 of this
        if (e > 1024) return num_ > 0 ? std::numeric_limits<double>::infinity()
                                      : -std::numeric_limits<double>::infinity();
        if (e < -1075) return num_ > 0 ? 0.0 : -0.0;
        long s = e < 96 ? 96 - e : 0;  // keep the quotient near 96 bits
        BigInt q = (a << s) / den_;
        double d = std::ldexp(q.convert_to<double>(), static_cast<int>(-s));
        return num_ < 0 ? -d : d;
    }

    /// Natural log of |value|; finite for any nonzero rational, including
    /// ones far outside double range (uses bit lengths plus a mantissa).
    double log_abs() const {
        if (num_.is_zero()) return -std::numeric_limits<double>::infinity();
        const BigInt a = boost::multiprecision::abs(num_);
        long nb = static_cast<long>(boost::multiprecision::msb(a));
        long db = static_cast<long>(boost::multiprecision::msb(den_));
        auto log_of = [](const BigInt& v, long bits) {
            // log(v) via the top <=53 significant bits
            long drop = bits > 52 ? bits - 52 : 0;
            double top = BigInt(v >> drop).convert_to<double>();
            constexpr double ln2 = 0.6931471805599453;
            return std::log(top) + static_cast<double>(drop) * ln2;
        };
        return log_of(a, nb) - log_of(den_, db);
    }

    std::string to_string() const {
        std::string s = num_.str();
        if (den_ != 1) s += "/" + den_.str();
        return s;
    }

private:
    struct already_normalized {};
    Rational(BigInt n, BigInt d, already_normalized) : num_(std::move(n)), den_(std::move(d)) {}

    void normalize() {
        if (den_.is_zero()) throw input_error("rational with zero denominator");
        if (den_ < 0) { num_ = -num_; den_ = -den_; }
        if (num_.is_zero()) { den_ = 1; return; }
        BigInt g = boost::multiprecision::gcd(boost::multiprecision::abs(num_), den_);
        if (g != 1) { num_ /= g; den_ /= g; }
    }

    BigInt num_;
    BigInt den_;
};

inline Rational abs(const Rational& r) { return r.abs(); }

/// Parse "p", "-p", or "p/q" into a rational.  Throws input_error on junk.
inline Rational parse_rational(const std::string& text) {
    auto slash = text.find('/');
    try {
        if (slash == std::string::npos) return Rational(BigInt(text), BigInt(1));
        return Rational(BigInt(text.substr(0, slash)), BigInt(text.substr(slash + 1)));
    } catch (const std::exception&) {
        throw input_error("cannot parse rational from '" + text + "'");
    }
}

/// Largest integer ≤ r (exact floor division).
inline BigInt floor_of(const Rational& r) {
    BigInt q = r.num() / r.den();
    if (r.num() < 0 && q * r.den() != r.num()) --q;
    return q;
}

/// Exact rational value of a finite double (doubles are dyadic rationals).
inline Rational rational_from_double(double x) {
    if (!std::isfinite(x)) throw input_error("cannot represent a non-finite double exactly");
    int e = 0;
    double m = std::frexp(x, &e);  // x = m * 2^e, |m| in [1/2, 1)
    auto mant = static_cast<long long>(std::ldexp(m, 53));
    e -= 53;
    bool neg = mant < 0;
    BigInt n{neg ? -mant : mant};
    if (e >= 0)
        n <<= e;
    else
        return Rational(neg ? -n : n, BigInt(1) << -e);
    return Rational(neg ? -n : n);
}

/// Floor of sqrt for non-negative big integers (Newton, exact).
inline BigInt isqrt(const BigInt& n) {
    if (n < 0) throw input_error("isqrt of negative value");
    if (n == 0) return 0;
    BigInt x = BigInt(1) << (static_cast<unsigned>(boost::multiprecision::msb(n)) / 2 + 1);
    for (;;) {
        BigInt y = (x + n / x) / 2;
        if (y >= x) break;
        x = y;
    }
    return x;
}

} // namespace vekua

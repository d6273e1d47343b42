#pragma once

#include <cmath>
#include <complex>
#include <string>

#include "vekua/rational.hpp"
#include "vekua/util.hpp"

namespace vekua {

/// Exact backend: complex numbers with rational real/imaginary parts.
/// Arithmetic is closed and the zero test is exact, so discriminant
/// zero/nonzero decisions never depend on rounding.
class ExactScalar {
public:
    using Real = Rational;

    ExactScalar() = default;
    ExactScalar(Rational re, Rational im = Rational(0)) : re_(std::move(re)), im_(std::move(im)) {}
    ExactScalar(long long re) : re_(re) {}  // NOLINT(google-explicit-constructor)

    static ExactScalar i() { return ExactScalar(Rational(0), Rational(1)); }

    const Rational& re() const { return re_; }
    const Rational& im() const { return im_; }

    bool is_zero() const { return re_.is_zero() && im_.is_zero(); }
    bool is_real() const { return im_.is_zero(); }

    ExactScalar conj() const { return ExactScalar(re_, -im_); }
    ExactScalar operator-() const { return ExactScalar(-re_, -im_); }

    friend ExactScalar operator+(const ExactScalar& a, const ExactScalar& b) {
        return ExactScalar(a.re_ + b.re_, a.im_ + b.im_);
    }
    friend ExactScalar operator-(const ExactScalar& a, const ExactScalar& b) {
        return ExactScalar(a.re_ - b.re_, a.im_ - b.im_);
    }
    friend ExactScalar operator*(const ExactScalar& a, const ExactScalar& b) {
        return ExactScalar(a.re_ * b.re_ - a.im_ * b.im_,
                           a.re_ * b.im_ + a.im_ * b.re_);
    }
    friend ExactScalar operator/(const ExactScalar& a, const ExactScalar& b) {
        Rational n = b.normsq();
        if (n.is_zero()) throw input_error("complex division by zero");
        ExactScalar t = a * b.conj();
        return ExactScalar(t.re_ / n, t.im_ / n);
    }

    ExactScalar& operator+=(const ExactScalar& b) { return *this = *this + b; }
    ExactScalar& operator-=(const ExactScalar& b) { return *this = *this - b; }
    ExactScalar& operator*=(const ExactScalar& b) { return *this = *this * b; }

    friend bool operator==(const ExactScalar& a, const ExactScalar& b) {
        return a.re_ == b.re_ && a.im_ == b.im_;
    }
    friend bool operator!=(const ExactScalar& a, const ExactScalar& b) { return !(a == b); }

    /// |z|^2, exact.
    Rational normsq() const { return re_ * re_ + im_ * im_; }

    double abs_value() const { return std::sqrt(normsq().to_double()); }
    /// log|z| robust far outside double range.
    double log_abs() const { return 0.5 * normsq().log_abs(); }

    std::complex<double> to_complex() const { return {re_.to_double(), im_.to_double()}; }

    std::string to_string() const { return re_.to_string() + (im_.sign() >= 0 ? "+" : "") + im_.to_string() + "i"; }

private:
    Rational re_;
    Rational im_;
};

/// Floating backend: complex<double> plus the largest intermediate
/// magnitude seen on the way to this value.  All zero decisions use the
/// single project-wide rule |z| <= kFloatZeroTol * (1 + scale).
class FloatScalar {
public:
    using Real = double;

    FloatScalar() : v_(0.0, 0.0), scale_(0.0) {}
    FloatScalar(std::complex<double> v) : v_(v), scale_(std::abs(v)) {}  // NOLINT
    FloatScalar(double re, double im = 0.0) : FloatScalar(std::complex<double>(re, im)) {}  // NOLINT

    static FloatScalar i() { return FloatScalar(0.0, 1.0); }

    double re() const { return v_.real(); }
    double im() const { return v_.imag(); }
    std::complex<double> value() const { return v_; }
    double scale() const { return scale_; }

    bool is_zero() const { return std::abs(v_) <= kFloatZeroTol * (1.0 + scale_); }
    bool is_real() const { return std::abs(v_.imag()) <= kFloatZeroTol * (1.0 + scale_); }

    FloatScalar conj() const { return with_scale(std::conj(v_), scale_); }
    FloatScalar operator-() const { return with_scale(-v_, scale_); }

    friend FloatScalar operator+(const FloatScalar& a, const FloatScalar& b) {
        std::complex<double> r = a.v_ + b.v_;
        return with_scale(r, std::max({a.scale_, b.scale_, std::abs(r)}));
    }
    friend FloatScalar operator-(const FloatScalar& a, const FloatScalar& b) {
        std::complex<double> r = a.v_ - b.v_;
        return with_scale(r, std::max({a.scale_, b.scale_, std::abs(r)}));
    }
    friend FloatScalar operator*(const FloatScalar& a, const FloatScalar& b) {
        return with_scale(a.v_ * b.v_, std::max({a.scale_, b.scale_, std::abs(a.v_) * std::abs(b.v_)}));
    }
    friend FloatScalar operator/(const FloatScalar& a, const FloatScalar& b) {
        if (b.is_zero()) throw input_error("complex division by (numerical) zero");
        std::complex<double> r = a.v_ / b.v_;
        return with_scale(r, std::max({a.scale_, b.scale_, std::abs(r)}));
    }

    FloatScalar& operator+=(const FloatScalar& b) { return *this = *this + b; }
    FloatScalar& operator-=(const FloatScalar& b) { return *this = *this - b; }
    FloatScalar& operator*=(const FloatScalar& b) { return *this = *this * b; }

    friend bool operator==(const FloatScalar& a, const FloatScalar& b) { return (a - b).is_zero(); }
    friend bool operator!=(const FloatScalar& a, const FloatScalar& b) { return !(a == b); }

    double normsq() const { return std::norm(v_); }
    double abs_value() const { return std::abs(v_); }
    double log_abs() const { return std::log(std::abs(v_)); }

    std::complex<double> to_complex() const { return v_; }

    std::string to_string() const {
        return std::to_string(v_.real()) + (v_.imag() >= 0 ? "+" : "") + std::to_string(v_.imag()) + "i";
    }

    /// Build a value with an explicitly tracked magnitude scale (for code
    /// that accumulates raw complex sums and knows the scale it incurred).
    static FloatScalar with_scale(std::complex<double> v, double s) {
        FloatScalar r;
        r.v_ = v;
        r.scale_ = s;
        return r;
    }

private:
    std::complex<double> v_;
    double scale_;
};

/// z * i^k with k taken mod 4; never goes through floating powers of i.
template <class S>
S mul_i_pow(const S& z, unsigned k) {
    switch (k & 3u) {
        case 0: return z;
        case 1: return S::i() * z;
        case 2: return -z;
        default: return -(S::i() * z);
    }
}

/// Real part as the backend's real type (used by classifiers for exact
/// squared-modulus comparisons).
inline Rational real_part(const ExactScalar& z) { return z.re(); }
inline double real_part(const FloatScalar& z) { return z.re(); }
inline Rational imag_part(const ExactScalar& z) { return z.im(); }
inline double imag_part(const FloatScalar& z) { return z.im(); }

} // namespace vekua

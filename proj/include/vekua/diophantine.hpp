#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "vekua/lattice.hpp"
#include "vekua/multi_index.hpp"
#include "vekua/rational.hpp"
#include "vekua/util.hpp"

namespace vekua {

/// How a real number is specified.  Exact kinds (RATIONAL, SQRT,
/// SQRT_RATIONAL) admit exact arithmetic on their square; the rest are
/// known only through certified enclosures.
enum class RealKind {
    RATIONAL,         ///< exact p/q
    SQRT,             ///< sqrt(d) for a nonsquare positive integer d
    SQRT_RATIONAL,    ///< sqrt(p/q), p/q not a square of a rational
    DECIMAL,          ///< decimal string, trusted to half a unit in the last place
    LIOUVILLE_TRUNC,  ///< stands for the limit sum_{k>=1} b^(-k!), located via
                      ///< the depth-K partial sum plus a tail enclosure
    NAMED_E,          ///< Euler's number
    NAMED_PI,         ///< pi
};

inline std::string kind_name(RealKind k) {
    switch (k) {
        case RealKind::RATIONAL: return "rational";
        case RealKind::SQRT: return "sqrt";
        case RealKind::SQRT_RATIONAL: return "sqrt-rational";
        case RealKind::DECIMAL: return "decimal";
        case RealKind::LIOUVILLE_TRUNC: return "liouville";
        case RealKind::NAMED_E: return "e";
        case RealKind::NAMED_PI: return "pi";
    }
    return "?";
}

/// Certified two-sided enclosure lo <= x <= hi.
struct RealEnclosure {
    Rational lo;
    Rational hi;
    Rational width() const { return hi - lo; }
    Rational mid() const { return (lo + hi) / Rational(2); }
};

/// A real number given symbolically.  Construct through the factories,
/// which normalize degenerate cases (e.g. sqrt of a perfect square
/// becomes RATIONAL).
class RealNumberSpec {
public:
    static RealNumberSpec rational(const Rational& v) {
        RealNumberSpec s;
        s.kind_ = RealKind::RATIONAL;
        s.rational_ = v;
        return s;
    }

    /// sqrt of a non-negative rational radicand; normalizes perfect squares.
    static RealNumberSpec square_root(const Rational& radicand) {
        if (radicand.sign() < 0) throw input_error("square root of a negative radicand");
        RealNumberSpec s;
        BigInt p = radicand.num(), q = radicand.den();
        BigInt sp = isqrt(p), sq = isqrt(q);
        if (sp * sp == p && sq * sq == q) {
            s.kind_ = RealKind::RATIONAL;
            s.rational_ = Rational(sp, sq);
            return s;
        }
        s.kind_ = q == 1 ? RealKind::SQRT : RealKind::SQRT_RATIONAL;
        s.rational_ = radicand;
        return s;
    }

    /// Decimal literal, trusted to half a unit in its last fractional digit.
    static RealNumberSpec decimal(const std::string& text) {
        RealNumberSpec s;
        s.kind_ = RealKind::DECIMAL;
        auto dot = text.find('.');
        std::string digits = text;
        s.frac_digits_ = 0;
        if (dot != std::string::npos) {
            s.frac_digits_ = static_cast<int>(text.size() - dot - 1);
            if (s.frac_digits_ == 0) throw input_error("decimal '" + text + "' ends with a bare point");
            digits = text.substr(0, dot) + text.substr(dot + 1);
        }
        if (digits.empty()) throw input_error("empty decimal literal");
        try {
            BigInt scaled(digits);
            BigInt den = 1;
            for (int i = 0; i < s.frac_digits_; ++i) den *= 10;
            s.rational_ = Rational(scaled, den);
        } catch (const std::exception&) {
            throw input_error("cannot parse decimal '" + text + "'");
        }
        s.text_ = text;
        return s;
    }

    /// Truncated factorial series sum_{k<=K} b^(-k!), standing for its limit.
    static RealNumberSpec liouville(long long base, long long depth) {
        if (base < 2) throw input_error("liouville base must be >= 2");
        if (depth < 1 || depth > 8)
            throw input_error("liouville depth must be in [1, 8] (factorial exponents explode)");
        RealNumberSpec s;
        s.kind_ = RealKind::LIOUVILLE_TRUNC;
        s.base_ = base;
        s.depth_ = depth;
        Rational v;
        for (long long k = 1; k <= depth; ++k) v = v + power_term(base, k);
        s.rational_ = v;
        return s;
    }

    static RealNumberSpec euler() {
        RealNumberSpec s;
        s.kind_ = RealKind::NAMED_E;
        return s;
    }

    static RealNumberSpec pi() {
        RealNumberSpec s;
        s.kind_ = RealKind::NAMED_PI;
        return s;
    }

    RealKind kind() const { return kind_; }

    /// Exact rational payload: the value (RATIONAL), the radicand
    /// (SQRT/SQRT_RATIONAL), or the truncated sum (LIOUVILLE_TRUNC).
    const Rational& payload() const { return rational_; }

    long long liouville_base() const { return base_; }
    long long liouville_depth() const { return depth_; }
    int decimal_fraction_digits() const { return frac_digits_; }

    int precision_budget = 256;  ///< working decimal digits for enclosures

    /// The square of the number, exactly, when the kind permits it.
    std::optional<Rational> exact_square() const {
        switch (kind_) {
            case RealKind::RATIONAL: return rational_ * rational_;
            case RealKind::SQRT:
            case RealKind::SQRT_RATIONAL: return rational_;
            default: return std::nullopt;
        }
    }

    bool is_exact() const { return exact_square().has_value(); }

    std::string to_string() const {
        switch (kind_) {
            case RealKind::RATIONAL: return "rational:" + rational_.to_string();
            case RealKind::SQRT:
            case RealKind::SQRT_RATIONAL: return "sqrt:" + rational_.to_string();
            case RealKind::DECIMAL: return "decimal:" + text_;
            case RealKind::LIOUVILLE_TRUNC:
                return "liouville:" + std::to_string(base_) + "," + std::to_string(depth_);
            case RealKind::NAMED_E: return "e";
            case RealKind::NAMED_PI: return "pi";
        }
        return "?";
    }

private:
    static Rational power_term(long long base, long long k) {
        BigInt e = 1;
        for (long long j = 2; j <= k; ++j) e *= j;  // k!
        BigInt den = 1;
        BigInt b = base;
        // b^(k!) by square-and-multiply on the big exponent
        BigInt exp = e;
        while (exp > 0) {
            if ((exp & 1) != 0) den *= b;
            b *= b;
            exp >>= 1;
        }
        return Rational(BigInt(1), den);
    }

    RealKind kind_ = RealKind::RATIONAL;
    Rational rational_;
    std::string text_;
    long long base_ = 0, depth_ = 0;
    int frac_digits_ = 0;
};

/// Parse the CLI syntax: `rational:p/q`, `sqrt:d`, `sqrt:p/q`,
/// `decimal:<digits>`, `liouville:b,K`, `e`, `pi`, or a bare literal
/// (integer -> rational, with a point -> decimal).
inline RealNumberSpec parse_eta(const std::string& text) {
    auto starts = [&](const char* p) { return text.rfind(p, 0) == 0; };
    if (text == "e") return RealNumberSpec::euler();
    if (text == "pi") return RealNumberSpec::pi();
    if (starts("rational:")) return RealNumberSpec::rational(parse_rational(text.substr(9)));
    if (starts("sqrt:")) return RealNumberSpec::square_root(parse_rational(text.substr(5)));
    if (starts("decimal:")) return RealNumberSpec::decimal(text.substr(8));
    if (starts("liouville:")) {
        auto rest = text.substr(10);
        auto comma = rest.find(',');
        if (comma == std::string::npos) throw input_error("liouville spec needs 'base,depth'");
        try {
            return RealNumberSpec::liouville(std::stoll(rest.substr(0, comma)),
                                             std::stoll(rest.substr(comma + 1)));
        } catch (const input_error&) {
            throw;
        } catch (const std::exception&) {
            throw input_error("cannot parse liouville spec '" + rest + "'");
        }
    }
    if (text.find('.') != std::string::npos) return RealNumberSpec::decimal(text);
    return RealNumberSpec::rational(parse_rational(text));
}

/// The speed whose square is the given exact rational (wave operators are
/// specified through their squared speed).
inline RealNumberSpec speed_from_squared(const Rational& eta_sq) {
    if (eta_sq.sign() < 0) throw input_error("squared speed must be non-negative");
    return RealNumberSpec::square_root(eta_sq);
}

namespace detail {

inline BigInt pow10(int digits) {
    BigInt r = 1;
    for (int i = 0; i < digits; ++i) r *= 10;
    return r;
}

/// [lo, hi] bracketing sqrt(p/q) with hi - lo = 10^-digits / q-scale.
inline RealEnclosure sqrt_enclosure(const Rational& radicand, int digits) {
    BigInt scale = pow10(digits);
    // sqrt(p/q) = sqrt(p*q)/q; isqrt of p*q*10^(2*digits) gives the floor.
    BigInt t = isqrt(radicand.num() * radicand.den() * scale * scale);
    BigInt den = radicand.den() * scale;
    return {Rational(t, den), Rational(t + 1, den)};
}

/// Alternating-series bracket of arctan(1/x) for integer x >= 2.
inline RealEnclosure atan_inv_enclosure(long long x, int digits) {
    Rational target(BigInt(1), pow10(digits + 2));
    Rational sum, lo, hi;
    Rational xsq = Rational(BigInt(x) * x);
    Rational term(BigInt(1), BigInt(x));
    bool plus = true;
    for (long long j = 0;; ++j) {
        Rational contrib = term / Rational(2 * j + 1);
        sum = plus ? sum + contrib : sum - contrib;
        // Partial sums alternate around the limit.
        if (plus) {
            hi = sum;
        } else {
            lo = sum;
        }
        if (j >= 1 && contrib < target) break;
        term = term / xsq;
        plus = !plus;
    }
    if (lo.is_zero() && hi.is_zero()) throw precision_error("arctan bracket failed to converge");
    if (hi < lo) std::swap(lo, hi);
    return {lo, hi};
}

inline RealEnclosure e_enclosure(int digits) {
    BigInt bound = pow10(digits + 2);
    Rational sum(1);
    BigInt fact = 1;
    long long k = 1;
    for (;; ++k) {
        fact *= k;
        sum = sum + Rational(BigInt(1), fact);
        if (fact > bound) break;
    }
    // Tail sum_{j>k} 1/j! < 2/(k+1)!.
    return {sum, sum + Rational(BigInt(2), fact * (k + 1))};
}

inline RealEnclosure pi_enclosure(int digits) {
    RealEnclosure a5 = atan_inv_enclosure(5, digits);
    RealEnclosure a239 = atan_inv_enclosure(239, digits);
    Rational sixteen(16), four(4);
    return {sixteen * a5.lo - four * a239.hi, sixteen * a5.hi - four * a239.lo};
}

} // namespace detail

/// Certified enclosure of the number at roughly the requested decimal
/// precision.  DECIMAL and LIOUVILLE_TRUNC carry intrinsic widths (declared
/// precision and tail bound) that no request can shrink.
inline RealEnclosure enclosure(const RealNumberSpec& x, int digits) {
    if (digits < 1) throw input_error("enclosure needs at least one digit");
    switch (x.kind()) {
        case RealKind::RATIONAL: return {x.payload(), x.payload()};
        case RealKind::SQRT:
        case RealKind::SQRT_RATIONAL: return detail::sqrt_enclosure(x.payload(), digits);
        case RealKind::DECIMAL: {
            Rational h(BigInt(1), BigInt(2) * detail::pow10(x.decimal_fraction_digits()));
            return {x.payload() - h, x.payload() + h};
        }
        case RealKind::LIOUVILLE_TRUNC: {
            // The full series exceeds the truncation by t < tail < 2t where
            // t = b^(-(K+1)!).
            BigInt e = 1;
            for (long long j = 2; j <= x.liouville_depth() + 1; ++j) e *= j;
            BigInt den = 1;
            BigInt b = x.liouville_base();
            BigInt exp = e;
            while (exp > 0) {
                if ((exp & 1) != 0) den *= b;
                b *= b;
                exp >>= 1;
            }
            Rational t(BigInt(1), den);
            return {x.payload() + t, x.payload() + Rational(2) * t};
        }
        case RealKind::NAMED_E: return detail::e_enclosure(digits);
        case RealKind::NAMED_PI: return detail::pi_enclosure(digits);
    }
    throw input_error("unknown real kind");
}

/// Nature of a continued-fraction expansion.
enum class CfExactness {
    EXACT_RATIONAL,  ///< finite expansion of an exact rational
    EXACT_PERIODIC,  ///< quadratic surd with its period detected
    TRUNCATED,       ///< stopped by depth or by enclosure resolution
};

inline std::string to_string(CfExactness e) {
    switch (e) {
        case CfExactness::EXACT_RATIONAL: return "exact-rational";
        case CfExactness::EXACT_PERIODIC: return "exact-periodic";
        case CfExactness::TRUNCATED: return "truncated";
    }
    return "?";
}

struct Convergent {
    BigInt p;
    BigInt q;
};

/// Continued fraction [a0; a1, a2, ...] with convergents and an enclosure
/// of the expanded number (a point interval for exact rationals).
struct ContinuedFraction {
    std::vector<BigInt> quotients;
    std::vector<Convergent> convergents;
    CfExactness exactness = CfExactness::TRUNCATED;
    int period_start = -1;  ///< index of the first periodic quotient, or -1
    int period_length = 0;
    RealEnclosure value;

    bool periodic() const { return period_start >= 0; }
};

namespace detail {

inline void fill_convergents(ContinuedFraction& cf) {
    BigInt pm2 = 0, pm1 = 1, qm2 = 1, qm1 = 0;
    cf.convergents.clear();
    for (const BigInt& a : cf.quotients) {
        BigInt p = a * pm1 + pm2;
        BigInt q = a * qm1 + qm2;
        cf.convergents.push_back({p, q});
        pm2 = pm1;
        pm1 = p;
        qm2 = qm1;
        qm1 = q;
    }
}

/// Exact Euclid expansion of a rational; the floor algorithm never emits a
/// trailing quotient of 1 (canonical form).
inline ContinuedFraction cf_of_rational(const Rational& v, int depth) {
    ContinuedFraction cf;
    cf.value = {v, v};
    BigInt num = v.num(), den = v.den();
    while (static_cast<int>(cf.quotients.size()) < depth) {
        BigInt a = num / den;
        if (num < 0 && a * den != num) --a;
        cf.quotients.push_back(a);
        BigInt rem = num - a * den;
        if (rem == 0) {
            cf.exactness = CfExactness::EXACT_RATIONAL;
            fill_convergents(cf);
            return cf;
        }
        num = den;
        den = rem;
    }
    cf.exactness = CfExactness::TRUNCATED;
    fill_convergents(cf);
    return cf;
}

/// Quadratic-surd expansion of sqrt(p/q) = (0 + sqrt(pq)) / q by the
/// classical (P, Q) state recurrence; a repeated state marks the period.
inline ContinuedFraction cf_of_surd(const Rational& radicand, int depth, int budget_digits) {
    ContinuedFraction cf;
    cf.value = sqrt_enclosure(radicand, budget_digits);
    const BigInt D = radicand.num() * radicand.den();
    const BigInt sD = isqrt(D);
    BigInt P = 0, Q = radicand.den();
    std::map<std::pair<BigInt, BigInt>, int> seen;
    const int state_cap = std::max(depth, 200000);
    for (int k = 0; k < state_cap; ++k) {
        if (k >= 1) {
            auto state = std::make_pair(P, Q);
            auto it = seen.find(state);
            if (it != seen.end()) {
                cf.period_start = it->second;
                cf.period_length = k - it->second;
                break;
            }
            seen.emplace(state, k);
        }
        // floor((P + sqrt(D))/Q) = floor((P + floor(sqrt(D)))/Q) for Q > 0.
        if (Q <= 0) throw input_error("surd state left the positive-Q regime");
        BigInt a = (P + sD) / Q;
        cf.quotients.push_back(a);
        P = a * Q - P;
        Q = (D - P * P) / Q;
        if (Q == 0) throw input_error("surd expansion hit a perfect square radicand");
    }
    if (cf.period_start < 0) {
        cf.exactness = CfExactness::TRUNCATED;
        if (static_cast<int>(cf.quotients.size()) > depth) cf.quotients.resize(depth);
        fill_convergents(cf);
        return cf;
    }
    cf.exactness = CfExactness::EXACT_PERIODIC;
    // Extend by cycling the periodic block up to the requested depth.
    while (static_cast<int>(cf.quotients.size()) < depth) {
        int idx = cf.period_start +
                  static_cast<int>((cf.quotients.size() - cf.period_start) % cf.period_length);
        cf.quotients.push_back(cf.quotients[static_cast<std::size_t>(idx)]);
    }
    if (static_cast<int>(cf.quotients.size()) > depth) {
        cf.quotients.resize(depth);
        if (cf.period_start >= depth) {
            cf.period_start = -1;
            cf.period_length = 0;
            cf.exactness = CfExactness::TRUNCATED;
        }
    }
    fill_convergents(cf);
    return cf;
}

/// Quotients certified for every number in [lo, hi]; stops when the two
/// endpoints' floors diverge.
inline ContinuedFraction cf_of_interval(const RealEnclosure& enc, int depth) {
    ContinuedFraction cf;
    cf.value = enc;
    cf.exactness = CfExactness::TRUNCATED;
    Rational lo = enc.lo, hi = enc.hi;
    while (static_cast<int>(cf.quotients.size()) < depth) {
        BigInt fl = floor_of(lo), fh = floor_of(hi);
        if (fl != fh) break;
        cf.quotients.push_back(fl);
        Rational rl = lo - Rational(fl), rh = hi - Rational(fl);
        if (rl.is_zero() || rh.is_zero()) break;
        lo = Rational(1) / rh;
        hi = Rational(1) / rl;
    }
    fill_convergents(cf);
    return cf;
}

} // namespace detail

/// Expand a real-number spec to at most `depth` partial quotients.
/// Exact kinds expand exactly (rationals terminate; surds get their period
/// detected and marked); enclosure kinds expand as far as the interval
/// certifies a unique quotient.
inline ContinuedFraction cf_expand(const RealNumberSpec& x, int depth) {
    if (depth < 1) throw input_error("continued-fraction depth must be >= 1");
    switch (x.kind()) {
        case RealKind::RATIONAL: return detail::cf_of_rational(x.payload(), depth);
        case RealKind::SQRT:
        case RealKind::SQRT_RATIONAL:
            return detail::cf_of_surd(x.payload(), depth, x.precision_budget);
        default: return detail::cf_of_interval(enclosure(x, x.precision_budget), depth);
    }
}

/// p_k q_{k-1} - p_{k-1} q_k = (-1)^(k-1) for all computed k.
inline bool determinant_identity_holds(const ContinuedFraction& cf) {
    for (std::size_t k = 1; k < cf.convergents.size(); ++k) {
        BigInt det = cf.convergents[k].p * cf.convergents[k - 1].q -
                     cf.convergents[k - 1].p * cf.convergents[k].q;
        if (det != ((k - 1) % 2 == 0 ? 1 : -1)) return false;
    }
    return true;
}

/// Irrationality-exponent estimate from convergent error enclosures.
struct ExponentEstimate {
    bool applicable = true;  ///< false when the expansion is an exact rational
    double mu_hat = std::numeric_limits<double>::quiet_NaN();
    /// Per-convergent exponents -log|x - p_k/q_k| / log q_k (NaN where the
    /// enclosure cannot bound the error away from zero or q_k < 2).
    std::vector<double> per_convergent;
};

/// Estimate the irrationality exponent from a continued fraction.
/// Each convergent yields mu_k = -log(err_k)/log(q_k) with err_k the
/// certified distance bound from the value enclosure; the estimate is the
/// maximum over the deep half of the expansion (q_k >= sqrt(q_last)), where
/// the asymptotic regime dominates small-denominator transients.
inline ExponentEstimate irrationality_exponent_estimate(const ContinuedFraction& cf) {
    if (cf.convergents.size() < 3)
        throw input_error("irrationality exponent needs at least 3 convergents");
    ExponentEstimate est;
    est.per_convergent.assign(cf.convergents.size(), std::numeric_limits<double>::quiet_NaN());
    if (cf.exactness == CfExactness::EXACT_RATIONAL) {
        est.applicable = false;
        return est;
    }
    const BigInt& q_last = cf.convergents.back().q;
    BigInt deep = isqrt(q_last);
    if (deep < 2) deep = 2;
    bool found = false;
    for (std::size_t k = 0; k < cf.convergents.size(); ++k) {
        const auto& c = cf.convergents[k];
        if (c.q < 2) continue;
        Rational approx(c.p, c.q);
        Rational err_lo = (cf.value.lo - approx).abs();
        Rational err_hi = (cf.value.hi - approx).abs();
        Rational err = err_lo < err_hi ? err_hi : err_lo;
        if (err.is_zero()) continue;
        double mu = -err.log_abs() / Rational(c.q).log_abs();
        est.per_convergent[k] = mu;
        if (c.q >= deep) {
            if (!found || mu > est.mu_hat) est.mu_hat = mu;
            found = true;
        }
    }
    if (!found)
        throw precision_error("enclosure too wide to bound any deep convergent's error");
    return est;
}

/// Outcome tiers for the non-Liouville question.  Only classes with a
/// genuine finite proof are CERTIFIED; estimates are never promoted.
enum class CertificateStatus { CERTIFIED, HEURISTIC, NOT_IRRATIONAL, UNKNOWN };

inline std::string to_string(CertificateStatus s) {
    switch (s) {
        case CertificateStatus::CERTIFIED: return "CERTIFIED";
        case CertificateStatus::HEURISTIC: return "HEURISTIC";
        case CertificateStatus::NOT_IRRATIONAL: return "NOT_IRRATIONAL";
        case CertificateStatus::UNKNOWN: return "UNKNOWN";
    }
    return "?";
}

struct NonLiouvilleCertificate {
    CertificateStatus status = CertificateStatus::UNKNOWN;
    std::string reason;
    double mu_hat = std::numeric_limits<double>::quiet_NaN();  ///< set for HEURISTIC
};

/// Decide whether the number is certifiably non-Liouville.  Quadratic
/// surds are CERTIFIED (periodic expansion -> bounded partial quotients ->
/// irrationality exponent 2); rationals are NOT_IRRATIONAL; everything
/// else gets a HEURISTIC exponent estimate or UNKNOWN when the available
/// precision cannot support one.
inline NonLiouvilleCertificate non_liouville_certificate(const RealNumberSpec& x, int depth = 64) {
    NonLiouvilleCertificate cert;
    switch (x.kind()) {
        case RealKind::RATIONAL:
            cert.status = CertificateStatus::NOT_IRRATIONAL;
            cert.reason = "rational number " + x.payload().to_string();
            return cert;
        case RealKind::SQRT:
        case RealKind::SQRT_RATIONAL: {
            ContinuedFraction cf = cf_expand(x, std::max(depth, 8));
            if (!cf.periodic()) {
                cert.status = CertificateStatus::UNKNOWN;
                cert.reason = "period not detected within the state cap";
                return cert;
            }
            std::string block;
            int shown = std::min(cf.period_length, 8);
            for (int i = 0; i < shown; ++i) {
                if (i) block += ",";
                block += cf.quotients[static_cast<std::size_t>(cf.period_start + i)].str();
            }
            if (shown < cf.period_length) block += ",...";
            cert.status = CertificateStatus::CERTIFIED;
            cert.reason = "periodic continued fraction, period [" + block + "]";
            return cert;
        }
        default: {
            ContinuedFraction cf = cf_expand(x, depth);
            if (cf.convergents.size() < 3) {
                cert.status = CertificateStatus::UNKNOWN;
                cert.reason = "declared precision yields fewer than 3 convergents";
                return cert;
            }
            try {
                ExponentEstimate est = irrationality_exponent_estimate(cf);
                cert.status = CertificateStatus::HEURISTIC;
                cert.mu_hat = est.mu_hat;
                cert.reason = "estimated irrationality exponent " + std::to_string(est.mu_hat) +
                              " from " + std::to_string(cf.convergents.size()) + " convergents";
            } catch (const precision_error& e) {
                cert.status = CertificateStatus::UNKNOWN;
                cert.reason = e.what();
            }
            return cert;
        }
    }
}

/// Result of a small-divisor sweep: the minimum of
/// |tau - eta*||xi||| * (||xi|| + tau)^gamma0 over integer tau >= 0 and
/// nonzero integer frequencies xi with ||xi|| + tau <= R (signs of tau and
/// xi are covered by symmetry).
struct SmallDivisorReport {
    double min_value = std::numeric_limits<double>::infinity();
    std::int64_t arg_tau = 0;
    Freq arg_xi;
    bool zero_found = false;  ///< an exact resonance tau = eta*||xi|| was certified
    bool argmin_on_convergent_denominator = false;
    int digits_used = 0;
    double gamma0 = 0;
    double radius = 0;
};

namespace detail {

/// Product of an eta-interval with a positive sqrt-interval.
inline RealEnclosure scale_interval(const RealEnclosure& eta, const Rational& s_lo,
                                    const Rational& s_hi) {
    Rational lo = eta.lo.sign() >= 0 ? eta.lo * s_lo : eta.lo * s_hi;
    Rational hi = eta.hi.sign() >= 0 ? eta.hi * s_hi : eta.hi * s_lo;
    return {lo, hi};
}

} // namespace detail

/// Sweep small divisors |tau - eta*||xi||| weighted by (||xi||+tau)^gamma0.
/// A fast floating pass locates candidate minima and potential resonances;
/// candidates are then re-evaluated with certified interval arithmetic
/// (escalating 64 -> `precision_budget` digits before giving up).
inline SmallDivisorReport small_divisor_scan(const RealNumberSpec& eta, double R, double gamma0,
                                             int dim = 1) {
    if (!(gamma0 > 0)) throw input_error("small-divisor weight exponent must be positive");
    if (!(R >= 1)) throw input_error("small-divisor scan radius must be >= 1");
    if (dim < 1 || dim > 3) throw input_error("small-divisor scan supports 1 <= dim <= 3");

    const Rational R_rat = rational_from_double(R);
    const auto max_nsq = static_cast<std::int64_t>(floor_of(R_rat * R_rat));

    const RealEnclosure eta_enc64 = enclosure(eta, 64);
    const double eta_d = eta_enc64.mid().to_double();
    const auto exact_sq = eta.exact_square();

    const long long g_int = std::llround(gamma0);
    const bool gamma_is_int = std::abs(gamma0 - static_cast<double>(g_int)) == 0.0 && g_int <= 64;
    auto weight = [&](double base) {
        if (!gamma_is_int) return std::pow(base, gamma0);
        double r = 1;
        for (long long i = 0; i < g_int; ++i) r *= base;
        return r;
    };

    // Largest tau with tau + ||xi|| <= R, exactly.
    auto tau_limit = [&](std::int64_t nsq, double s_d) {
        auto fits = [&](std::int64_t t) {
            Rational rem = R_rat - Rational(t);
            return rem.sign() >= 0 && rem * rem >= Rational(nsq);
        };
        auto t = static_cast<std::int64_t>(R - s_d);
        while (t >= 0 && !fits(t)) --t;
        while (fits(t + 1)) ++t;
        return t;
    };

    SmallDivisorReport rep;
    rep.gamma0 = gamma0;
    rep.radius = R;
    rep.digits_used = 64;

    // Uncertainty of eta*||xi|| in the floating pass: declared enclosure
    // width plus roundoff headroom.  Exact kinds carry only the roundoff.
    const double eta_halfwidth_d = (eta_enc64.width() / Rational(2)).to_double();
    auto slack = [&](double s_d, double x_d, std::int64_t t) {
        return eta_halfwidth_d * s_d + 1e-12 * (x_d + static_cast<double>(t) + 1);
    };

    // Pass 1: floating sweep for the minimum estimate and exact resonances.
    double best_d = std::numeric_limits<double>::infinity();
    double best_slack_w = 0;
    bool stop = false;
    for_canonical_ball(dim, max_nsq, [&](const Freq& xi) {
        if (stop) return;
        const std::int64_t nsq = normsq_of(xi);
        const double s_d = std::sqrt(static_cast<double>(nsq));
        const std::int64_t t_max = tau_limit(nsq, s_d);
        if (exact_sq) {
            // tau = eta*||xi||  <=>  tau^2 = num*nsq/den with integer tau >= 0;
            // at most one tau qualifies per frequency, so test it outright.
            BigInt scaled = exact_sq->num() * nsq;
            if (scaled % exact_sq->den() == 0) {
                BigInt m = scaled / exact_sq->den();
                BigInt s = isqrt(m);
                if (s * s == m && s <= t_max) {
                    rep.zero_found = true;
                    rep.min_value = 0;
                    rep.arg_tau = static_cast<std::int64_t>(s);
                    rep.arg_xi = xi;
                    stop = true;
                    return;
                }
            }
        }
        const double x_d = eta_d * s_d;
        for (std::int64_t t = 0; t <= t_max; ++t) {
            const double d = std::min(std::abs(t - x_d), std::abs(t + x_d));
            const double v = d * weight(s_d + t);
            if (v < best_d) {
                best_d = v;
                best_slack_w = slack(s_d, x_d, t) * weight(s_d + t);
            }
        }
    });

    if (!rep.zero_found) {
        // Pass 2: collect every point whose divisor could, within the declared
        // uncertainty of eta, undercut the floating minimum, then certify each
        // with interval arithmetic.
        struct Candidate {
            std::int64_t tau;
            Freq xi;
            std::int64_t nsq;
        };
        std::vector<Candidate> cands;
        const double band = best_d * (1 + 1e-6) + best_slack_w + 1e-9;
        for_canonical_ball(dim, max_nsq, [&](const Freq& xi) {
            const std::int64_t nsq = normsq_of(xi);
            const double s_d = std::sqrt(static_cast<double>(nsq));
            const double x_d = eta_d * s_d;
            const std::int64_t t_max = tau_limit(nsq, s_d);
            for (std::int64_t t = 0; t <= t_max; ++t) {
                const double d = std::min(std::abs(t - x_d), std::abs(t + x_d));
                const double d_lo = std::max(0.0, d - slack(s_d, x_d, t));
                if (d_lo * weight(s_d + t) <= band) cands.push_back({t, xi, nsq});
            }
        });

        bool have = false;
        for (const auto& c : cands) {
            double value = 0;
            int digits = 64;
            for (;; digits = eta.precision_budget) {
                const RealEnclosure eta_enc = digits == 64 ? eta_enc64 : enclosure(eta, digits);
                const RealEnclosure s_enc = detail::sqrt_enclosure(Rational(c.nsq), digits);
                const RealEnclosure x = detail::scale_interval(eta_enc, s_enc.lo, s_enc.hi);
                const Rational tr(c.tau);
                // |tau - x| and |tau + x|; keep the smaller branch.
                RealEnclosure diff{tr - x.hi, tr - x.lo};
                RealEnclosure sum{tr + x.lo, tr + x.hi};
                auto abs_iv = [](const RealEnclosure& e) -> std::optional<RealEnclosure> {
                    if (e.lo.sign() >= 0) return e;
                    if (e.hi.sign() <= 0) return RealEnclosure{-e.hi, -e.lo};
                    return std::nullopt;  // straddles zero
                };
                auto da = abs_iv(diff), sa = abs_iv(sum);
                if (!da || !sa) {
                    if (digits >= eta.precision_budget)
                        throw precision_error(
                            "cannot separate tau = " + std::to_string(c.tau) +
                            " from eta*||xi|| with ||xi||^2 = " + std::to_string(c.nsq) +
                            ": more than " + std::to_string(digits) + " digits of eta required");
                    continue;  // escalate
                }
                const RealEnclosure& d_iv = da->hi < sa->hi ? *da : *sa;
                value = d_iv.mid().to_double() *
                        weight(s_enc.mid().to_double() + static_cast<double>(c.tau));
                rep.digits_used = std::max(rep.digits_used, digits);
                break;
            }
            if (!have || value < rep.min_value) {
                have = true;
                rep.min_value = value;
                rep.arg_tau = c.tau;
                rep.arg_xi = c.xi;
            }
        }
        if (!have) {
            // No lattice point fits (cannot happen for R >= 1, dim >= 1).
            throw input_error("small-divisor scan domain is empty");
        }
    }

    // Does the argmin frequency sit on a convergent denominator of eta?
    const BigInt arg_nsq = [&] {
        BigInt s = 0;
        for (auto v : rep.arg_xi) s += BigInt(v) * v;
        return s;
    }();
    BigInt s_int = isqrt(arg_nsq);
    if (s_int * s_int == arg_nsq) {
        try {
            ContinuedFraction cf = cf_expand(eta, 40);
            for (const auto& c : cf.convergents)
                if (c.q == s_int) {
                    rep.argmin_on_convergent_denominator = true;
                    break;
                }
        } catch (const std::exception&) {
            rep.argmin_on_convergent_denominator = false;
        }
    }
    return rep;
}

} // namespace vekua

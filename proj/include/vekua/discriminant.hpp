#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "vekua/lattice.hpp"
#include "vekua/operator_spec.hpp"

namespace vekua {

/// delta_xi = (sigma(xi) - A) (conj(sigma(-xi)) - conj(A)) - |B|^2.
/// The Fourier mode pair {xi, -xi} of Pu = Lu - Au - B conj(u) is
/// invertible exactly when delta_xi != 0; conj(delta_xi) = delta_{-xi}.
template <class S, class I>
S delta(const VekuaOperator<S>& P, const std::vector<I>& xi) {
    S sp = symbol_eval(P.L, xi);
    S sm = symbol_eval(P.L, negated(xi));
    return (sp - P.A) * (sm.conj() - P.A.conj()) - P.B * P.B.conj();
}

/// The obstruction against solving at a degenerate pair: when delta_xi = 0,
/// the mode equation admits a solution iff
///   (conj(sigma(-xi)) - conj(A)) fhat(xi) + B conj(fhat(-xi)) = 0.
/// f_plus = fhat(xi), f_minus_conj = conj(fhat(-xi)).
template <class S, class I>
S compatibility_defect(const VekuaOperator<S>& P, const std::vector<I>& xi, const S& f_plus,
                       const S& f_minus_conj) {
    S q = symbol_eval(P.L, negated(xi)).conj() - P.A.conj();
    return q * f_plus + P.B * f_minus_conj;
}

// ---------------------------------------------------------------------------
// Prepared discriminant evaluators.  The lattice scans evaluate delta at
// millions of points; the exact evaluator rescales everything to a single
// integer denominator and runs 128-bit integer lanes whenever a worst-case
// bound proves them overflow-free, falling back to rational arithmetic
// otherwise.
// ---------------------------------------------------------------------------

/// One scanned point, in a backend-independent shape.
struct ScanPoint {
    bool zero = false;
    /// |delta_xi| and log |delta_xi|; meaningful only when !zero.  The log
    /// stays finite when the modulus under- or overflows double range.
    double modulus = 0.0;
    double log_modulus = 0.0;
    /// double approximations of Re/Im delta_xi.
    double re = 0.0, im = 0.0;
};

template <class S>
class DeltaEvaluator;

template <>
class DeltaEvaluator<ExactScalar> {
public:
    DeltaEvaluator(const VekuaOperator<ExactScalar>& P, std::int64_t max_abs_xi)
        : P_(P), sym_(P.L, max_abs_xi), den_(sym_.common_den()) {
        using boost::multiprecision::lcm;
        den_ = lcm(den_, P.A.re().den());
        den_ = lcm(den_, P.A.im().den());
        den_ = lcm(den_, P.B.re().den());
        den_ = lcm(den_, P.B.im().den());
        BigInt s = den_ / sym_.common_den();
        BigInt are = P.A.re().num() * (den_ / P.A.re().den());
        BigInt aim = P.A.im().num() * (den_ / P.A.im().den());
        BigInt bre = P.B.re().num() * (den_ / P.B.re().den());
        BigInt bim = P.B.im().num() * (den_ / P.B.im().den());
        BigInt bsq = bre * bre + bim * bim;

        BigInt amax = boost::multiprecision::abs(are);
        BigInt aim_abs = boost::multiprecision::abs(aim);
        if (aim_abs > amax) amax = aim_abs;
        BigInt lane_bound = s * sym_.numerator_bound() + amax;
        fast_ = sym_.has_raw_lane() && lane_bound < (BigInt(1) << 62) && bsq < (BigInt(1) << 125);
        if (fast_) {
            s64_ = s.convert_to<std::int64_t>();
            are_ = static_cast<__int128>(are.convert_to<std::int64_t>());
            aim_ = static_cast<__int128>(aim.convert_to<std::int64_t>());
            bsq_ = detail_to_int128(bsq);
        }
        log_den2_ = 2.0 * Rational(den_).log_abs();
        den2_ = den_ * den_;
        den2_dbl_ = Rational(den2_).to_double();
    }

    bool has_raw_lane() const { return fast_; }
    /// delta_xi = (raw_re + i raw_im) / common_den()^2 on the raw lane.
    const BigInt& common_den() const { return den_; }

    /// Raw integer lanes; valid only when has_raw_lane().
    void eval_raw(const Freq& xi, __int128& out_re, __int128& out_im) const {
        __int128 r1, i1, r2, i2;
        sym_.eval_raw(xi, r1, i1);
        neg_buf_.resize(xi.size());
        for (size_t j = 0; j < xi.size(); ++j) neg_buf_[j] = -xi[j];
        sym_.eval_raw(neg_buf_, r2, i2);
        __int128 re_p = s64_ * r1 - are_;
        __int128 im_p = s64_ * i1 - aim_;
        __int128 re_q = s64_ * r2 - are_;
        __int128 im_q = -(s64_ * i2 - aim_);
        out_re = re_p * re_q - im_p * im_q - bsq_;
        out_im = re_p * im_q + im_p * re_q;
    }

    ExactScalar eval(const Freq& xi) const {
        if (fast_) {
            __int128 re, im;
            eval_raw(xi, re, im);
            return ExactScalar(Rational(detail::from_int128(re), den2_),
                               Rational(detail::from_int128(im), den2_));
        }
        return delta(P_, xi);
    }

    ExactScalar eval_big(const FreqBig& xi) const { return delta(P_, xi); }

    ScanPoint probe(const Freq& xi) const {
        ScanPoint p;
        if (fast_) {
            __int128 re, im;
            eval_raw(xi, re, im);
            if (re == 0 && im == 0) {
                p.zero = true;
                return p;
            }
            double dre = static_cast<double>(re), dim = static_cast<double>(im);
            p.re = dre / den2_dbl_;
            p.im = dim / den2_dbl_;
            p.modulus = std::sqrt(dre * dre + dim * dim) / den2_dbl_;
            p.log_modulus = 0.5 * std::log(dre * dre + dim * dim) - log_den2_;
            return p;
        }
        ExactScalar d = delta(P_, xi);
        if (d.is_zero()) {
            p.zero = true;
            return p;
        }
        p.re = d.re().to_double();
        p.im = d.im().to_double();
        p.modulus = std::sqrt(d.normsq().to_double());
        p.log_modulus = d.log_abs();
        return p;
    }

    /// Exact |delta_xi|^2, for tie-breaking candidate minima.
    Rational modulus_sq(const Freq& xi) const {
        if (fast_) {
            __int128 re, im;
            eval_raw(xi, re, im);
            BigInt bre = detail::from_int128(re), bim = detail::from_int128(im);
            return Rational(bre * bre + bim * bim, den2_ * den2_);
        }
        return delta(P_, xi).normsq();
    }

private:
    static __int128 detail_to_int128(const BigInt& v) {
        bool neg = v < 0;
        BigInt a = neg ? BigInt(-v) : v;
        auto lo = static_cast<std::uint64_t>(a & 0xFFFFFFFFFFFFFFFFULL);
        auto hi = static_cast<std::uint64_t>(a >> 64);
        unsigned __int128 u = (static_cast<unsigned __int128>(hi) << 64) | lo;
        auto r = static_cast<__int128>(u);
        return neg ? -r : r;
    }

    VekuaOperator<ExactScalar> P_;
    PreparedSymbolExact sym_;
    BigInt den_;
    BigInt den2_;
    bool fast_ = false;
    std::int64_t s64_ = 1;
    __int128 are_ = 0, aim_ = 0, bsq_ = 0;
    double log_den2_ = 0.0;
    double den2_dbl_ = 1.0;
    mutable Freq neg_buf_;
};

template <>
class DeltaEvaluator<FloatScalar> {
public:
    DeltaEvaluator(const VekuaOperator<FloatScalar>& P, std::int64_t max_abs_xi)
        : P_(P), sym_(P.L, max_abs_xi) {
        bsq_ = P.B * P.B.conj();
    }

    bool has_raw_lane() const { return false; }

    FloatScalar eval(const Freq& xi) const {
        FloatScalar sp = sym_.eval(xi);
        neg_buf_.resize(xi.size());
        for (size_t j = 0; j < xi.size(); ++j) neg_buf_[j] = -xi[j];
        FloatScalar sm = sym_.eval(neg_buf_);
        return (sp - P_.A) * (sm.conj() - P_.A.conj()) - bsq_;
    }

    ScanPoint probe(const Freq& xi) const {
        FloatScalar d = eval(xi);
        ScanPoint p;
        if (d.is_zero()) {
            p.zero = true;
            return p;
        }
        p.re = d.re();
        p.im = d.im();
        p.modulus = d.abs_value();
        p.log_modulus = d.log_abs();
        return p;
    }

private:
    VekuaOperator<FloatScalar> P_;
    PreparedSymbolFloat sym_;
    FloatScalar bsq_;
    mutable Freq neg_buf_;
};

// ---------------------------------------------------------------------------
// Zero sets and the Diophantine-condition scan.
// ---------------------------------------------------------------------------

/// All frequencies with |xi| <= radius and delta_xi = 0, origin included,
/// sorted lexicographically.  The set is symmetric under negation because
/// conj(delta_xi) = delta_{-xi}.
template <class S>
std::vector<Freq> zero_set(const VekuaOperator<S>& P, int radius) {
    if (radius < 0) throw input_error("zero_set radius must be non-negative");
    std::vector<Freq> zeros;
    Freq origin(P.dim(), 0);
    if (delta(P, origin).is_zero()) zeros.push_back(origin);
    DeltaEvaluator<S> ev(P, radius);
    for_canonical_ball(P.dim(), static_cast<std::int64_t>(radius) * radius, [&](const Freq& xi) {
        if (ev.probe(xi).zero) {
            zeros.push_back(xi);
            zeros.push_back(negated(xi));
        }
    });
    std::sort(zeros.begin(), zeros.end());
    return zeros;
}

enum class ScanEvidence { SUPPORTED, REFUTED_EVIDENCE, ZEROS_AT_LARGE_NORM, UNDETERMINED };

inline std::string to_string(ScanEvidence e) {
    switch (e) {
        case ScanEvidence::SUPPORTED: return "SUPPORTED";
        case ScanEvidence::REFUTED_EVIDENCE: return "REFUTED_EVIDENCE";
        case ScanEvidence::ZEROS_AT_LARGE_NORM: return "ZEROS_AT_LARGE_NORM";
        default: return "UNDETERMINED";
    }
}

/// Scan verdict from the polynomial-growth estimates alone.  gamma_star(r)
/// is the smallest exponent consistent with the moduli seen up to radius r;
/// the condition |delta_xi| >= |xi|^{-gamma} for one fixed gamma holds on
/// the sample iff gamma_star stabilizes, and is contradicted in spirit if
/// gamma_star keeps climbing a full unit per doubling.
inline ScanEvidence grade_evidence(double gamma_quarter, double gamma_half, double gamma_full,
                                   bool zeros_at_large_norm, int radius) {
    if (zeros_at_large_norm) return ScanEvidence::ZEROS_AT_LARGE_NORM;
    if (radius >= 16 && gamma_half >= gamma_quarter + 1.0 && gamma_full >= gamma_half + 1.0)
        return ScanEvidence::REFUTED_EVIDENCE;
    if (gamma_full - gamma_half <= 0.1) return ScanEvidence::SUPPORTED;
    return ScanEvidence::UNDETERMINED;
}

/// One row of the per-point scan stream (both members of a frequency pair
/// are reported).
struct ScanRow {
    Freq xi;
    double re = 0.0, im = 0.0;
    double modulus = 0.0;
    int shell = 0;
    /// Running gamma_star after folding this point in.
    double gamma_star = 0.0;
};

struct ScanOptions {
    /// Optional streaming consumer for every scanned point.
    std::function<void(const ScanRow&)> sink;
};

struct DiscriminantScanReport {
    int radius = 0;
    /// Exact integer arithmetic behind every zero/minimum in this report.
    bool certified = false;
    std::vector<Freq> zeros;
    /// min |delta| per unit shell (index k = points with k-1 < |xi| <= k);
    /// +inf where a shell has no points or only zeros.
    std::vector<double> shell_min_modulus;
    /// Running gamma_star(r) for integer radii r = 1..radius.
    std::vector<double> gamma_star_by_radius;
    double gamma_star = 0.0;
    ScanEvidence evidence = ScanEvidence::UNDETERMINED;
    /// Smallest nonzero |delta| over the scanned ball.
    double min_nonzero_modulus = std::numeric_limits<double>::infinity();
    /// Exact |delta|^2 at the minimum (certified backends only).
    Rational min_nonzero_modulus_sq;
    /// Canonical representative attaining the minimum.
    Freq argmin;
};

/// Scan delta over the ball |xi| <= radius and grade the evidence for the
/// polynomial lower bound |delta_xi| >= |xi|^{-gamma}.  The scan can never
/// prove the bound: SUPPORTED/REFUTED_EVIDENCE grade finite evidence only.
template <class S>
DiscriminantScanReport dc_scan(const VekuaOperator<S>& P, int radius, const ScanOptions& opts = {}) {
    if (radius < 4) throw input_error("dc_scan radius must be at least 4");
    constexpr bool exact = std::is_same_v<S, ExactScalar>;

    DeltaEvaluator<S> ev(P, radius);
    DiscriminantScanReport rep;
    rep.radius = radius;
    rep.certified = exact;
    rep.shell_min_modulus.assign(radius + 1, std::numeric_limits<double>::infinity());
    std::vector<double> shell_best_quality(radius + 1, 0.0);

    Freq origin(P.dim(), 0);
    if (delta(P, origin).is_zero()) rep.zeros.push_back(origin);

    double best_log = std::numeric_limits<double>::infinity();
    double running_gamma = 0.0;
    const std::int64_t max_nsq = static_cast<std::int64_t>(radius) * radius;
    std::int64_t large_zero_nsq = -1;

    for_canonical_ball(P.dim(), max_nsq, [&](const Freq& xi) {
        ScanPoint p = ev.probe(xi);
        std::int64_t nsq = normsq_of(xi);
        int shell = shell_of(nsq);
        if (p.zero) {
            rep.zeros.push_back(xi);
            rep.zeros.push_back(negated(xi));
            if (nsq > large_zero_nsq) large_zero_nsq = nsq;
        } else {
            rep.shell_min_modulus[shell] = std::min(rep.shell_min_modulus[shell], p.modulus);
            if (nsq >= 4 && p.log_modulus < 0.0) {
                double quality = -p.log_modulus / (0.5 * std::log(static_cast<double>(nsq)));
                shell_best_quality[shell] = std::max(shell_best_quality[shell], quality);
                running_gamma = std::max(running_gamma, quality);
            }
            bool candidate = p.log_modulus <= best_log + 1e-9;
            if (candidate) {
                if constexpr (exact) {
                    Rational msq = ev.modulus_sq(xi);
                    if (rep.argmin.empty() || msq < rep.min_nonzero_modulus_sq) {
                        rep.min_nonzero_modulus_sq = msq;
                        rep.argmin = xi;
                        best_log = p.log_modulus;
                        rep.min_nonzero_modulus = p.modulus;
                    }
                } else {
                    if (p.log_modulus < best_log) {
                        best_log = p.log_modulus;
                        rep.argmin = xi;
                        rep.min_nonzero_modulus = p.modulus;
                    }
                }
            }
        }
        if (opts.sink) {
            ScanRow row;
            row.xi = xi;
            row.re = p.zero ? 0.0 : p.re;
            row.im = p.zero ? 0.0 : p.im;
            row.modulus = p.zero ? 0.0 : p.modulus;
            row.shell = shell;
            row.gamma_star = running_gamma;
            opts.sink(row);
            row.xi = negated(xi);
            row.im = -row.im;
            opts.sink(row);
        }
    });

    std::sort(rep.zeros.begin(), rep.zeros.end());
    rep.gamma_star_by_radius.assign(radius + 1, 0.0);
    double acc = 0.0;
    for (int k = 1; k <= radius; ++k) {
        acc = std::max(acc, shell_best_quality[k]);
        rep.gamma_star_by_radius[k] = acc;
    }
    rep.gamma_star_by_radius.erase(rep.gamma_star_by_radius.begin());
    rep.gamma_star = acc;

    auto gamma_at = [&](int r) { return r >= 1 ? rep.gamma_star_by_radius[r - 1] : 0.0; };
    bool large_zero = large_zero_nsq >= 0 && 4 * large_zero_nsq >= max_nsq;
    rep.evidence =
        grade_evidence(gamma_at(radius / 4), gamma_at(radius / 2), gamma_at(radius), large_zero, radius);
    return rep;
}

} // namespace vekua

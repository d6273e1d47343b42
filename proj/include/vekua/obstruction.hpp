#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "vekua/classifiers.hpp"
#include "vekua/coefficient_field.hpp"
#include "vekua/discriminant.hpp"
#include "vekua/solver.hpp"

namespace vekua {

// ---------------------------------------------------------------------------
// Non-solvability witnesses.  When the discriminant has infinitely many
// zeros, every zero pair contributes one linear compatibility condition on
// the right-hand side, so the solvable right-hand sides have infinite
// codimension.  When the discriminant stays nonzero but decays faster than
// every power of the frequency along a sequence, a rapidly decaying f forces
// a solution projection that does not decay at all.  Both constructions are
// exact: they are only built on the exact backend.
// ---------------------------------------------------------------------------

enum class WitnessKind { INFINITE_COMPATIBILITY, SLOW_DECAY };

inline std::string to_string(WitnessKind k) {
    return k == WitnessKind::INFINITE_COMPATIBILITY ? "INFINITE_COMPATIBILITY" : "SLOW_DECAY";
}

/// Per-frequency row of a witness table.  Squared moduli are exact; the
/// log10 helpers stay finite far outside double range.
struct WitnessDiagnostic {
    FreqBig xi;
    BigInt normsq = 0;
    Rational abs_f_sq;         ///< |f_hat(xi)|^2
    Rational abs_u_sq;         ///< |u_hat(xi)|^2
    Rational abs_u_mirror_sq;  ///< |u_hat(-xi)|^2

    double log10_abs_f() const { return half_log10(abs_f_sq); }
    double log10_abs_u() const { return half_log10(abs_u_sq); }

    static double half_log10(const Rational& sq) {
        if (sq.is_zero()) return -std::numeric_limits<double>::infinity();
        return 0.5 * sq.log_abs() / std::log(10.0);
    }
};

/// A concrete obstruction to solvability: a one-sided frequency set, the
/// right-hand side built on it, and the solution projection it forces.
struct ObstructionWitness {
    WitnessKind kind = WitnessKind::SLOW_DECAY;
    /// One-sided support: omega0 and -omega0 never intersect.
    std::vector<FreqBig> omega0;
    CoefficientField<ExactScalar, BigInt> f_hat;
    /// The projection of any would-be solution onto the modes of omega0.
    CoefficientField<ExactScalar, BigInt> induced_u_hat;
    std::vector<WitnessDiagnostic> diagnostics;
    /// Which construction produced the witness, with its side/count notes.
    std::string branch;

    explicit ObstructionWitness(int dim) : f_hat(dim), induced_u_hat(dim) {}
};

// ---------------------------------------------------------------------------
// Shared integer scale.  Deep truncation speeds put denominators with tens
// of thousands of digits on every coefficient; rational normalization at
// that size costs seconds per gcd while integer multiplication costs
// milliseconds.  Everything below therefore works with M sigma, M A, M B as
// Gaussian integers over one common denominator M, and only materializes
// reduced rationals at the few frequencies that end up in a result.
// ---------------------------------------------------------------------------

namespace detail {

inline FreqBig to_big(const Freq& xi) { return FreqBig(xi.begin(), xi.end()); }

/// Divide num and den by their common power of two (both must be >= 0,
/// den > 0).  Returns the exponent stripped.
inline unsigned strip_common_twos(BigInt& num, BigInt& den) {
    if (num.is_zero()) return 0;
    unsigned v = std::min(boost::multiprecision::lsb(num), boost::multiprecision::lsb(den));
    if (v > 0) {
        num >>= v;
        den >>= v;
    }
    return v;
}

/// Divide num by pk and den by pk when both divide exactly; returns whether
/// the strip happened.
inline bool strip_once(BigInt& num, BigInt& den, const BigInt& pk) {
    BigInt qn, rn;
    boost::multiprecision::divide_qr(num, pk, qn, rn);
    if (!rn.is_zero()) return false;
    BigInt qd, rd;
    boost::multiprecision::divide_qr(den, pk, qd, rd);
    if (!rd.is_zero()) return false;
    num = std::move(qn);
    den = std::move(qd);
    return true;
}

/// Exponent e with p^e dividing v but p^{e+1} not (v > 0): a tower of squared
/// powers is climbed and walked back down, so the division count is
/// logarithmic in e.
inline unsigned valuation_of(BigInt v, unsigned p) {
    unsigned e = 0;
    std::vector<std::pair<BigInt, unsigned>> tower;  // (p^{2^j}, 2^j)
    BigInt pk(p);
    unsigned ek = 1;
    while (true) {
        BigInt q, r;
        boost::multiprecision::divide_qr(v, pk, q, r);
        if (!r.is_zero()) break;
        v = std::move(q);
        e += ek;
        tower.emplace_back(pk, ek);
        pk *= pk;
        ek *= 2;
    }
    for (auto it = tower.rbegin(); it != tower.rend(); ++it) {
        BigInt q, r;
        boost::multiprecision::divide_qr(v, it->first, q, r);
        if (r.is_zero()) {
            v = std::move(q);
            e += it->second;
        }
    }
    return e;
}

/// Divide num and den by their common power of the odd prime p (both must be
/// > 0).  A nonzero hint is an exponent to try in a single shot first: the
/// common content of these pairs is a power of ten in practice, so the
/// 2-valuation that was just stripped predicts the 5-valuation, exactly or as
/// an overestimate.  When the one-shot misses, the failing side's valuation
/// is below the hint, so it can be read off that side's small residue (if
/// p^h did not divide x, then x mod p^h has the same p-valuation as x) and
/// stripped with two exact divisions.  Without a hint, or when the hint
/// strip leaves more of p behind, a tower of squared powers is climbed and
/// walked back down.
inline void strip_common_factor(BigInt& num, BigInt& den, unsigned p, unsigned hint = 0) {
    if (hint > 0) {
        const BigInt ph = boost::multiprecision::pow(BigInt(p), hint);
        BigInt qn, rn;
        boost::multiprecision::divide_qr(num, ph, qn, rn);
        if (rn.is_zero()) {
            BigInt qd, rd;
            boost::multiprecision::divide_qr(den, ph, qd, rd);
            if (rd.is_zero()) {
                num = std::move(qn);
                den = std::move(qd);
                // fall through: the common valuation may exceed the hint
            } else {
                // v_p(den) < hint <= v_p(num): the common power is den's.
                const unsigned vd = valuation_of(rd, p);
                if (vd > 0) {
                    const BigInt pe = boost::multiprecision::pow(BigInt(p), vd);
                    num /= pe;
                    den /= pe;
                }
                return;
            }
        } else {
            // v_p(num) < hint: num's valuation, capped by den's.
            const unsigned vn = valuation_of(rn, p);
            if (vn > 0) {
                const BigInt pe = boost::multiprecision::pow(BigInt(p), vn);
                BigInt qd, rd;
                boost::multiprecision::divide_qr(den, pe, qd, rd);
                if (rd.is_zero()) {
                    num /= pe;
                    den = std::move(qd);
                } else {
                    const unsigned vd = valuation_of(rd, p);  // < vn
                    if (vd > 0) {
                        const BigInt pe2 = boost::multiprecision::pow(BigInt(p), vd);
                        num /= pe2;
                        den /= pe2;
                    }
                }
            }
            return;
        }
    }
    std::vector<BigInt> tower;  // p, p^2, p^4, ...
    BigInt pk(p);
    while (strip_once(num, den, pk)) {
        tower.push_back(pk);
        pk *= pk;
    }
    for (auto it = tower.rbegin(); it != tower.rend(); ++it) strip_once(num, den, *it);
}

/// Remove every factor p (an odd prime) from v: a tower climb and descent,
/// as in strip_common_factor.
inline void strip_factor(BigInt& v, unsigned p) {
    auto strip = [&v](const BigInt& pk) {
        BigInt q, r;
        boost::multiprecision::divide_qr(v, pk, q, r);
        if (!r.is_zero()) return false;
        v = std::move(q);
        return true;
    };
    std::vector<BigInt> tower;
    BigInt pk(p);
    while (strip(pk)) {
        tower.push_back(pk);
        pk *= pk;
    }
    for (auto it = tower.rbegin(); it != tower.rend(); ++it) strip(*it);
}

/// Whether v > 0 is a product of the primes {2, 3, 5, 7} only.
inline bool is_smooth_2357(BigInt v) {
    if (v <= 0) return false;
    v >>= boost::multiprecision::lsb(v);
    for (unsigned p : {3u, 5u, 7u}) strip_factor(v, p);
    return v == 1;
}

/// Rational num/den for denominators whose prime support is expected to be
/// small (coefficient denominators are powers of ten in practice): common
/// small-prime factors are stripped first, which leaves the constructor's
/// gcd trivial in those cases.  Pass den_smooth = true only when den is
/// known to be {2,3,5,7}-smooth; the stripped pair is then already coprime
/// and the gcd is skipped entirely.  Correct for every input either way.
inline Rational reduced_ratio(BigInt num, BigInt den, bool den_smooth = false) {
    if (num.is_zero()) return Rational(0);
    bool neg = (num < 0);
    if (neg) num = -num;
    const unsigned twos = strip_common_twos(num, den);
    strip_common_factor(num, den, 3);
    strip_common_factor(num, den, 5, twos);
    strip_common_factor(num, den, 7);
    Rational r = den_smooth ? Rational::from_reduced(std::move(num), std::move(den))
                            : Rational(std::move(num), std::move(den));
    return neg ? -r : r;
}

/// The operator with symbol and perturbation coefficients rescaled to one
/// integer denominator M: scaled_delta returns M^2 delta_xi exactly, as a
/// Gaussian integer, without any rational normalization.
class ScaledOperator {
public:
    explicit ScaledOperator(const VekuaOperator<ExactScalar>& P) : prep_(P.L, 2) {
        m_ = prep_.common_den();
        for (const Rational* r : {&P.A.re(), &P.A.im(), &P.B.re(), &P.B.im()})
            m_ = boost::multiprecision::lcm(m_, r->den());
        sym_scale_ = m_ / prep_.common_den();
        a_re_ = scaled(P.A.re());
        a_im_ = scaled(P.A.im());
        const BigInt b_re = scaled(P.B.re()), b_im = scaled(P.B.im());
        bb_ = b_re * b_re + b_im * b_im;
        m2_ = m_ * m_;
        m4_ = m2_ * m2_;
        den_smooth_ = is_smooth_2357(m_);
    }

    const BigInt& scale() const { return m_; }
    const BigInt& scale_sq() const { return m2_; }
    const BigInt& scale_p4() const { return m4_; }

    /// M (sigma(xi) - A).
    std::pair<BigInt, BigInt> shifted_symbol(const FreqBig& xi) const {
        BigInt re, im;
        prep_.eval_raw_big(xi, re, im);
        return {re * sym_scale_ - a_re_, im * sym_scale_ - a_im_};
    }

    /// M^2 delta_xi = M(sigma(xi)-A) * conj(M(sigma(-xi)-A)) - M^2 B conj(B).
    std::pair<BigInt, BigInt> scaled_delta(const FreqBig& xi) const {
        const auto [xre, xim] = shifted_symbol(xi);
        const auto [tre, tim] = shifted_symbol(negated(xi));
        return {xre * tre + xim * tim - bb_, xim * tre - xre * tim};
    }

    /// Exact value of num/den, skipping the closing gcd when M is smooth.
    Rational reduce(BigInt num, BigInt den) const {
        return reduced_ratio(std::move(num), std::move(den), den_smooth_);
    }

    ExactScalar delta_exact(const FreqBig& xi) const {
        const auto [re, im] = scaled_delta(xi);
        return ExactScalar(reduce(re, m2_), reduce(im, m2_));
    }

    /// sigma(xi) - A, exact.
    ExactScalar shifted_symbol_exact(const FreqBig& xi) const {
        const auto [re, im] = shifted_symbol(xi);
        return ExactScalar(reduce(re, m_), reduce(im, m_));
    }

    /// conj(sigma(-xi)) - conj(A), exact.
    ExactScalar mirror_factor_exact(const FreqBig& xi) const {
        const auto [re, im] = shifted_symbol(negated(xi));
        return ExactScalar(reduce(re, m_), reduce(-im, m_));
    }

private:
    BigInt scaled(const Rational& r) const { return BigInt(r.num() * (m_ / r.den())); }

    PreparedSymbolExact prep_;
    BigInt m_, sym_scale_, a_re_, a_im_, bb_, m2_, m4_;
    bool den_smooth_ = false;
};

/// |v|^2 as an exact rational, built from integer products.  When one part
/// vanishes, or either part is an integer, the assembled fraction is
/// provably already reduced and no gcd runs; other shapes fall back to
/// reduced_ratio.  Equivalent to v.normsq(), but that routes every step
/// through normalizing rational arithmetic, which is seconds per operation
/// once denominators reach tens of thousands of digits.
inline Rational normsq_exact(const ExactScalar& v) {
    const Rational& re = v.re();
    const Rational& im = v.im();
    if (im.is_zero()) return Rational::from_reduced(re.num() * re.num(), re.den() * re.den());
    if (re.is_zero()) return Rational::from_reduced(im.num() * im.num(), im.den() * im.den());
    BigInt num =
        re.num() * re.num() * im.den() * im.den() + im.num() * im.num() * re.den() * re.den();
    BigInt den = re.den() * re.den() * im.den() * im.den();
    // With one integral part, any prime of the denominator divides only one
    // of the two numerator terms, so the fraction is already reduced.
    if (re.den() == 1 || im.den() == 1)
        return Rational::from_reduced(std::move(num), std::move(den));
    return reduced_ratio(std::move(num), std::move(den));
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Slow-divisor sequences.
// ---------------------------------------------------------------------------

/// One rung of a slow-divisor ladder: |delta_xi| < |xi|^{-rate} with
/// 0 < |delta_xi|, at strictly increasing norms.
struct SlowPoint {
    FreqBig xi;
    BigInt normsq = 0;
    Rational delta_modulus_sq;  ///< |delta_xi|^2, exact
    int rate = 0;               ///< threshold exponent this rung satisfies

    double log10_abs_delta() const {
        if (delta_modulus_sq.is_zero()) return -std::numeric_limits<double>::infinity();
        return 0.5 * delta_modulus_sq.log_abs() / std::log(10.0);
    }
};

/// A sign-normalized slow-divisor sequence.  `sign_coordinate` is the first
/// coordinate that is nonzero at the deep end of the ladder; every kept
/// point has that coordinate positive, which makes the set one-sided.
struct SlowSequence {
    std::vector<SlowPoint> points;
    int sign_coordinate = -1;
    int dropped = 0;    ///< rungs discarded by the sign rule
    std::string note;   ///< set when the first-coordinate tie rule engaged

    std::vector<FreqBig> frequencies() const {
        std::vector<FreqBig> out;
        out.reserve(points.size());
        for (const SlowPoint& p : points) out.push_back(p.xi);
        return out;
    }
};

struct SlowSequenceOptions {
    /// Deepest rung attempted; rung ell demands |delta| < |xi|^{-rate(ell)}.
    int max_rate = 10;
    /// Threshold exponent map ell -> rate; identity when empty.
    std::function<int(int)> rate_exponent;
    /// The exhaustive lattice sweep stops at this radius; beyond it only
    /// targeted candidates are tried.
    int box_radius_cap = 48;
    /// Continued-fraction depth and per-convergent multiples for targeted
    /// candidates along a recognized wave speed.
    int convergent_depth = 160;
    int convergent_multiples = 6;
};

/// Search |xi| <= radius for a ladder of frequencies where the discriminant
/// is nonzero yet smaller than |xi|^{-ell} at rung ell, the norms strictly
/// increase, and |xi_ell| >= ell.  Pass an infinite radius to search the
/// targeted candidates without a bound.  Each rung takes the smallest
/// admissible frequency in (normsq, lex) order; the result is then
/// sign-normalized to one side.  Returns as many rungs as exist (possibly
/// none, consistent with the divisor condition plausibly holding).
inline SlowSequence find_slow_sequence(const VekuaOperator<ExactScalar>& P, double radius,
                                       const SlowSequenceOptions& opts = {}) {
    if (!(radius > 0)) throw input_error("find_slow_sequence radius must be positive");
    const int n = P.dim();
    const bool unbounded = std::isinf(radius);
    const Rational radius_sq =
        unbounded ? Rational(0) : rational_from_double(radius) * rational_from_double(radius);

    const detail::ScaledOperator so(P);
    const double log_m4 = Rational(so.scale_p4()).log_abs();

    struct Candidate {
        FreqBig xi;
        BigInt nsq;
        BigInt dre, dim;      // M^2 delta_xi
        double log_delta_sq;  // natural-log lower bound of |delta_xi|^2
        double log_nsq;
        mutable BigInt sq;    // |M^2 delta_xi|^2, filled on first exact test
        mutable bool have_sq = false;
    };
    std::map<FreqBig, Candidate> pool;

    // Returns false only when the frequency lies beyond the radius: that is
    // the one rejection that also rules out every multiple of the frequency.
    auto offer = [&](FreqBig xi) -> bool {
        if (is_zero_vec(xi)) return true;
        if (!is_lex_positive(xi)) xi = negated(xi);  // |delta| is symmetric under negation
        if (pool.count(xi)) return true;
        BigInt nsq = normsq_of(xi);
        if (!unbounded && radius_sq < Rational(nsq)) return false;
        auto [dre, dim] = so.scaled_delta(xi);
        if (dre.is_zero() && dim.is_zero()) return true;  // exact zeros belong to Case 1
        // |M^2 delta|^2 lies within a factor 2 above max(dre^2, dim^2).
        const double ld =
            2.0 * std::max(dre.is_zero() ? -std::numeric_limits<double>::infinity()
                                         : Rational(dre).log_abs(),
                           dim.is_zero() ? -std::numeric_limits<double>::infinity()
                                         : Rational(dim).log_abs()) -
            log_m4;
        const double ln = Rational(nsq).log_abs();
        Candidate cand{std::move(xi), std::move(nsq), std::move(dre), std::move(dim),
                       ld,           ln,              BigInt(0),      false};
        pool.emplace(cand.xi, std::move(cand));
        return true;
    };

    // Exhaustive sweep of a small ball.  Each probe costs multiplications at
    // the scale of M, so the swept radius shrinks when M is huge; targeted
    // candidates below still reach the slow divisors in that regime.
    int box_cap = opts.box_radius_cap;
    if (boost::multiprecision::msb(so.scale()) > 4096) box_cap = std::min(box_cap, 6);
    std::int64_t box_side =
        static_cast<std::int64_t>(std::floor(std::min(radius, static_cast<double>(box_cap))));
    for_canonical_ball(n, box_side * box_side, [&](const Freq& xi) { offer(detail::to_big(xi)); });

    // Targeted candidates: for a recognized wave, slow divisors sit along
    // the continued-fraction convergents p/q of the speed, at frequencies
    // k (p, q, 0, ...) where |tau - eta xi_1| is as small as q allows.
    RecognizedFamily fam = recognize(P);
    if (fam.tag == FamilyTag::WAVE && fam.exact_coefficients && n >= 2) {
        ContinuedFraction cf = cf_expand(family_speed(fam), opts.convergent_depth);
        for (std::size_t idx = 0; idx < cf.convergents.size(); ++idx) {
            const Convergent& c = cf.convergents[idx];
            // A convergent approximates to about 1/(a_next q^2), so only an
            // exceptionally large next quotient (a_next >~ sqrt(q)) can push
            // |delta| below a positive power of the norm.  Small-q convergents
            // are probed regardless: they cost nothing.
            const bool cheap = c.q <= 1000000;
            bool exceptional = false;
            if (!cheap && idx + 1 < cf.quotients.size() && cf.quotients[idx + 1] > 1) {
                const auto la = boost::multiprecision::msb(cf.quotients[idx + 1]);
                const auto lq = boost::multiprecision::msb(c.q);
                exceptional = 2 * la >= lq;
            }
            if (!cheap && !exceptional) continue;
            for (int k = 1; k <= opts.convergent_multiples; ++k) {
                FreqBig xi(static_cast<std::size_t>(n), BigInt(0));
                xi[0] = c.p * k;
                xi[1] = c.q * k;
                if (!offer(std::move(xi))) break;  // beyond the radius, as is every further multiple
            }
        }
    }

    std::vector<const Candidate*> ordered;
    ordered.reserve(pool.size());
    for (const auto& kv : pool) ordered.push_back(&kv.second);
    std::sort(ordered.begin(), ordered.end(), [](const Candidate* a, const Candidate* b) {
        if (a->nsq != b->nsq) return a->nsq < b->nsq;
        return a->xi < b->xi;
    });

    SlowSequence seq;
    BigInt prev_nsq(0);
    for (int ell = 1; ell <= opts.max_rate; ++ell) {
        int rate = opts.rate_exponent ? opts.rate_exponent(ell) : ell;
        if (rate < 0) rate = 0;
        BigInt min_nsq = BigInt(ell) * ell;
        if (min_nsq <= prev_nsq) min_nsq = prev_nsq + 1;
        const Candidate* hit = nullptr;
        for (const Candidate* c : ordered) {
            if (c->nsq < min_nsq) continue;
            // |delta|^2 * nsq^rate < 1 is the exact form of |delta| < |xi|^{-rate}.
            // The log bound prunes clear failures; the rest are decided exactly.
            if (c->log_delta_sq + rate * c->log_nsq > 0.7) continue;
            if (!c->have_sq) {
                c->sq = c->dre * c->dre + c->dim * c->dim;
                c->have_sq = true;
            }
            if (c->sq * int_pow(c->nsq, rate) < so.scale_p4()) {
                hit = c;
                break;
            }
        }
        if (hit == nullptr) break;  // deeper rungs only get rarer
        seq.points.push_back({hit->xi, hit->nsq, so.reduce(hit->sq, so.scale_p4()), rate});
        prev_nsq = hit->nsq;
    }

    if (seq.points.empty()) return seq;

    // Sign normalization: the first coordinate that is nonzero at the deep
    // end of the ladder is made positive on every rung; rungs where it
    // vanishes are dropped so the kept coordinate has one constant sign.
    const FreqBig& deep = seq.points.back().xi;
    int j = 0;
    while (j < n && deep[static_cast<std::size_t>(j)] == 0) ++j;
    seq.sign_coordinate = j;
    std::vector<SlowPoint> kept;
    kept.reserve(seq.points.size());
    for (SlowPoint& p : seq.points) {
        if (p.xi[static_cast<std::size_t>(j)] == 0) {
            ++seq.dropped;
            continue;
        }
        if (p.xi[static_cast<std::size_t>(j)] < 0) p.xi = negated(p.xi);
        kept.push_back(std::move(p));
    }
    seq.points = std::move(kept);
    if (j > 0 || seq.dropped > 0) {
        seq.note = "sign coordinate " + std::to_string(j) +
                   " chosen by the first-eventually-nonzero rule";
        if (seq.dropped > 0)
            seq.note += "; dropped " + std::to_string(seq.dropped) + " rung(s) where it vanishes";
    }
    return seq;
}

inline SlowSequence find_slow_sequence(const VekuaOperator<FloatScalar>&, double,
                                       const SlowSequenceOptions& = {}) {
    throw input_error(
        "obstruction analysis requires the exact backend: floating-point coefficients "
        "cannot certify slow divisors");
}

// ---------------------------------------------------------------------------
// Infinitely many compatibility conditions.
// ---------------------------------------------------------------------------

/// The linear condition a right-hand side must satisfy at one discriminant
/// zero pair: coeff_f_plus * f_hat(xi) + coeff_f_minus_conj * conj(f_hat(-xi)) = 0.
struct CompatibilityFunctional {
    Freq xi;  ///< canonical pair representative (origin, or lex-positive)
    ExactScalar coeff_f_plus;
    ExactScalar coeff_f_minus_conj;
};

struct Case1Conditions {
    int radius = 0;
    std::vector<CompatibilityFunctional> functionals;
};

/// One compatibility functional per discriminant zero pair with |xi| <= radius
/// (the origin and one lex-positive representative per pair).  A count that
/// grows without bound as the radius grows means the solvable right-hand
/// sides have infinite codimension.
inline Case1Conditions build_case1_conditions(const VekuaOperator<ExactScalar>& P, int radius) {
    if (radius < 0) throw input_error("compatibility scan radius must be non-negative");
    Case1Conditions out;
    out.radius = radius;
    const detail::ScaledOperator so(P);
    const auto probe = [&](const Freq& xi) {
        FreqBig big = detail::to_big(xi);
        const auto [dre, dim] = so.scaled_delta(big);
        if (!dre.is_zero() || !dim.is_zero()) return;
        out.functionals.push_back({xi, so.mirror_factor_exact(big), P.B});
    };
    // The origin pairs with itself; the ball enumerator covers the nonzero
    // representatives.
    probe(Freq(static_cast<std::size_t>(P.dim()), 0));
    const std::int64_t r = radius;
    for_canonical_ball(P.dim(), r * r, probe);
    std::sort(out.functionals.begin(), out.functionals.end(),
              [](const CompatibilityFunctional& a, const CompatibilityFunctional& b) {
                  auto an = normsq_of(a.xi), bn = normsq_of(b.xi);
                  if (an != bn) return an < bn;
                  return a.xi < b.xi;
              });
    return out;
}

inline Case1Conditions build_case1_conditions(const VekuaOperator<FloatScalar>&, int) {
    throw input_error(
        "obstruction analysis requires the exact backend: tolerance-based zeros do not "
        "yield exact compatibility conditions");
}

// ---------------------------------------------------------------------------
// Slow-decay witness.
// ---------------------------------------------------------------------------

namespace detail {

template <class I>
void check_one_sided(const std::vector<std::vector<I>>& omega0, int dim) {
    std::set<std::vector<I>> seen;
    for (const auto& xi : omega0) {
        if (static_cast<int>(xi.size()) != dim)
            throw input_error("witness frequency dimension does not match the operator");
        if (is_zero_vec(xi))
            throw input_error("Omega_0 is not one-sided: the origin pairs with itself");
        if (seen.count(xi)) throw input_error("Omega_0 contains a duplicate frequency");
        if (seen.count(negated(xi)))
            throw input_error("Omega_0 is not one-sided: contains a frequency and its negation");
        seen.insert(xi);
    }
}

}  // namespace detail

/// Build the slow-decay witness on a one-sided frequency set.  With B != 0,
///   f_hat(xi) = delta_xi,  u_hat(xi) = conj(sigma(-xi)) - conj(A),  u_hat(-xi) = B,
/// which satisfies P u = f exactly on the pair, mode by mode.  With B = 0 the
/// mode equation decouples; the side of each pair where |sigma - A| is the
/// small factor of delta is kept (majority side, ties keep the given side),
/// and there f_hat(xi) = sigma(xi) - A with u_hat(xi) = 1.
inline ObstructionWitness build_case2_witness(const VekuaOperator<ExactScalar>& P,
                                              const std::vector<FreqBig>& omega0) {
    const int n = P.dim();
    detail::check_one_sided(omega0, n);

    ObstructionWitness w(n);
    w.kind = WitnessKind::SLOW_DECAY;
    const detail::ScaledOperator so(P);

    if (!P.B.is_zero()) {
        w.branch = "B != 0";
        const Rational b_sq = detail::normsq_exact(P.B);
        for (const FreqBig& xi : omega0) {
            ExactScalar d = so.delta_exact(xi);
            ExactScalar u_plus = so.mirror_factor_exact(xi);
            w.f_hat.set(xi, d);
            w.induced_u_hat.set(xi, u_plus);
            w.induced_u_hat.set(negated(xi), P.B);
            w.omega0.push_back(xi);
            w.diagnostics.push_back({xi, normsq_of(xi), detail::normsq_exact(d),
                                     detail::normsq_exact(u_plus), b_sq});
        }
        return w;
    }

    // B = 0: pick the side where sigma - A is the small factor.
    std::vector<FreqBig> plus_side, minus_side;
    for (const FreqBig& xi : omega0) {
        const auto [pre, pim] = so.shifted_symbol(xi);
        const auto [mre, mim] = so.shifted_symbol(negated(xi));
        if (pre * pre + pim * pim <= mre * mre + mim * mim)
            plus_side.push_back(xi);
        else
            minus_side.push_back(negated(xi));
    }
    const bool keep_plus = plus_side.size() >= minus_side.size();
    const std::vector<FreqBig>& chosen = keep_plus ? plus_side : minus_side;
    w.branch = std::string("B = 0, ") + (keep_plus ? "given side" : "negated side") +
               " kept (" + std::to_string(chosen.size()) + " of " +
               std::to_string(omega0.size()) + ")";
    for (const FreqBig& xi : chosen) {
        ExactScalar f = so.shifted_symbol_exact(xi);
        w.f_hat.set(xi, f);
        w.induced_u_hat.set(xi, ExactScalar(1));
        w.omega0.push_back(xi);
        w.diagnostics.push_back(
            {xi, normsq_of(xi), detail::normsq_exact(f), Rational(1), Rational(0)});
    }
    return w;
}

inline ObstructionWitness build_case2_witness(const VekuaOperator<ExactScalar>& P,
                                              const SlowSequence& seq) {
    return build_case2_witness(P, seq.frequencies());
}

inline ObstructionWitness build_case2_witness(const VekuaOperator<FloatScalar>&,
                                              const std::vector<FreqBig>&) {
    throw input_error(
        "witness construction requires the exact backend: the defining identities must "
        "hold exactly");
}

// ---------------------------------------------------------------------------
// Decay diagnostics.
// ---------------------------------------------------------------------------

/// Weighted sup table for one field.  At order k the weight is |xi|^k, so the
/// reported square is normsq^k |coeff|^2.  A field passes at order k when the
/// sup is attained well inside the truncation (4 * argmax_normsq bounded by
/// the support's max normsq, with a floor of 16 for tiny supports): then
/// enlarging the truncation has stopped raising the sup, the finite-data
/// reading of rapid decay.  Fields whose weighted modulus peaks at the edge
/// fail: the sup is still growing with the truncation.
struct DecayReport {
    struct Row {
        int order = 0;
        Rational sup_sq;  ///< max over support of normsq^order * |coeff|^2
        BigInt argmax_normsq = 0;
        double log10_sup = 0.0;
        bool passes = false;
    };
    std::vector<Row> rows;
    bool passes_all = true;
    BigInt max_normsq = 0;
    bool empty_support = false;

    bool passes_at(int order) const {
        for (const Row& r : rows)
            if (r.order == order) return r.passes;
        throw input_error("order was not tested");
    }
};

template <class I>
DecayReport decay_report(const CoefficientField<ExactScalar, I>& field,
                         const std::vector<int>& orders) {
    DecayReport rep;
    struct Entry {
        BigInt nsq;
        Rational csq;  ///< exact |coeff|^2
        double log_nsq;
        double log_csq;
        mutable int den_smooth = -1;  ///< csq.den() {2,3,5,7}-smooth? -1 until tested
    };
    std::vector<Entry> entries;
    for (const auto& kv : field) {
        Rational csq = detail::normsq_exact(kv.second);
        BigInt nsq(normsq_of(kv.first));
        if (nsq > rep.max_normsq) rep.max_normsq = nsq;
        const double ln = nsq.is_zero() ? 0.0 : Rational(nsq).log_abs();
        const double lc = csq.log_abs();
        entries.push_back({std::move(nsq), std::move(csq), ln, lc});
    }
    rep.empty_support = entries.empty();

    // The argmax at each order is found through log bounds; only weights
    // within half a nat of the running best are compared exactly, by
    // integer cross-multiplication.  Exact arithmetic at every step would
    // cost a huge-operand gcd per entry per order.
    auto log_weight = [](const Entry& e, int k) {
        if (k > 0 && e.nsq.is_zero()) return -std::numeric_limits<double>::infinity();
        return k * e.log_nsq + e.log_csq;
    };
    auto cmp_exact = [](const Entry& a, const Entry& b, int k) {
        // A mirror pair (xi, -xi) often carries exactly equal moduli; spotting
        // the equality skips the huge cross-multiplications below.
        if (a.nsq == b.nsq && a.csq.num() == b.csq.num() && a.csq.den() == b.csq.den()) return 0;
        if (a.csq.den() == b.csq.den()) {
            const BigInt lhs = int_pow(a.nsq, k) * a.csq.num();
            const BigInt rhs = int_pow(b.nsq, k) * b.csq.num();
            return lhs.compare(rhs);
        }
        const BigInt lhs = int_pow(a.nsq, k) * a.csq.num() * b.csq.den();
        const BigInt rhs = int_pow(b.nsq, k) * b.csq.num() * a.csq.den();
        return lhs.compare(rhs);
    };

    // Entries sharing a norm weigh identically at every order, so each norm
    // keeps one representative of maximal modulus.  This settles a mirror
    // pair (xi, -xi) of nearly equal moduli with one exact comparison in
    // total instead of one per order.
    std::sort(entries.begin(), entries.end(),
              [](const Entry& a, const Entry& b) { return a.nsq < b.nsq; });
    std::vector<Entry> distinct;
    distinct.reserve(entries.size());
    for (Entry& e : entries) {
        if (!distinct.empty() && distinct.back().nsq == e.nsq) {
            Entry& d = distinct.back();
            int c;
            if (e.log_csq > d.log_csq + 0.5)
                c = 1;
            else if (e.log_csq < d.log_csq - 0.5)
                c = -1;
            else
                c = cmp_exact(e, d, 0);
            if (c > 0) d = std::move(e);
        } else {
            distinct.push_back(std::move(e));
        }
    }
    entries = std::move(distinct);

    const BigInt pass_bound = std::max(BigInt(16), rep.max_normsq);
    for (int k : orders) {
        if (k < 0) throw input_error("decay order must be non-negative");
        DecayReport::Row row;
        row.order = k;
        const Entry* best = nullptr;
        double best_log = 0.0;
        for (const Entry& e : entries) {
            if (best == nullptr) {
                best = &e;
                best_log = log_weight(e, k);
                continue;
            }
            const double le = log_weight(e, k);
            int c;
            if (le > best_log + 0.5)
                c = 1;
            else if (le < best_log - 0.5)
                c = -1;
            else if (std::isinf(le) && std::isinf(best_log))
                c = 0;  // both weights are exactly zero
            else
                c = cmp_exact(e, *best, k);
            // Ties resolve toward the innermost frequency, so constant
            // moduli read as bounded rather than edge-peaked.
            if (c > 0 || (c == 0 && e.nsq < best->nsq)) {
                best = &e;
                best_log = le;
            }
        }
        if (best != nullptr) {
            row.argmax_normsq = best->nsq;
            if (k > 0 && best->nsq.is_zero()) {
                row.sup_sq = Rational(0);
            } else {
                // csq is reduced, so only the weight nsq^k can share factors
                // with the denominator.  A {2,3,5,7}-smooth denominator (the
                // powers of ten of exact coefficient data) is settled by
                // stripping those primes: what is left of the weight is then
                // provably coprime, with no huge-operand gcd.  The smoothness
                // test runs once per entry, only when the entry wins a row.
                BigInt pk = int_pow(best->nsq, k);
                if (best->den_smooth < 0)
                    best->den_smooth = detail::is_smooth_2357(best->csq.den()) ? 1 : 0;
                if (best->den_smooth == 1) {
                    BigInt d = best->csq.den();
                    detail::strip_common_twos(pk, d);
                    detail::strip_common_factor(pk, d, 3);
                    detail::strip_common_factor(pk, d, 5);
                    detail::strip_common_factor(pk, d, 7);
                    row.sup_sq = Rational::from_reduced(best->csq.num() * pk, std::move(d));
                } else {
                    const BigInt g = boost::multiprecision::gcd(pk, best->csq.den());
                    row.sup_sq =
                        Rational::from_reduced(best->csq.num() * (pk / g), best->csq.den() / g);
                }
            }
        }
        row.passes = best == nullptr || 4 * row.argmax_normsq <= pass_bound;
        row.log10_sup = row.sup_sq.is_zero()
                            ? -std::numeric_limits<double>::infinity()
                            : 0.5 * row.sup_sq.log_abs() / std::log(10.0);
        rep.passes_all = rep.passes_all && row.passes;
        rep.rows.push_back(std::move(row));
    }
    return rep;
}

/// Orders 0..max_order inclusive.
template <class I>
DecayReport decay_report(const CoefficientField<ExactScalar, I>& field, int max_order = 10) {
    std::vector<int> orders;
    for (int k = 0; k <= max_order; ++k) orders.push_back(k);
    return decay_report(field, orders);
}

// ---------------------------------------------------------------------------
// Witness assembly.
// ---------------------------------------------------------------------------

/// Look for an obstruction within the radius: first a compatibility family
/// that keeps growing with the radius (a right-hand side violating every
/// condition is returned, with the least-squares projection each pair still
/// admits), then a slow-divisor ladder feeding the slow-decay construction.
/// Returns nothing when neither obstruction shows at this radius — a finite
/// zero set alone is not an obstruction.
inline std::optional<ObstructionWitness> find_obstruction(const VekuaOperator<ExactScalar>& P,
                                                          double radius,
                                                          const SlowSequenceOptions& opts = {}) {
    if (!(radius > 0)) throw input_error("find_obstruction radius must be positive");
    // Each zero probe multiplies integers at the scale of the common
    // denominator, so the scan ball shrinks when that scale is huge.
    const detail::ScaledOperator so(P);
    const double zero_cap = boost::multiprecision::msb(so.scale()) > 4096 ? 6.0 : 64.0;
    const int zero_radius = std::max(2, static_cast<int>(std::min(radius, zero_cap)));
    Case1Conditions conds = build_case1_conditions(P, zero_radius);
    Case1Conditions half = build_case1_conditions(P, zero_radius / 2);

    std::vector<Freq> zeros;
    for (const CompatibilityFunctional& c : conds.functionals)
        if (!is_zero_vec(c.xi)) zeros.push_back(c.xi);
    std::size_t half_count = 0;
    for (const CompatibilityFunctional& c : half.functionals)
        if (!is_zero_vec(c.xi)) ++half_count;
    std::sort(zeros.begin(), zeros.end(), [](const Freq& a, const Freq& b) {
        auto an = normsq_of(a), bn = normsq_of(b);
        if (an != bn) return an < bn;
        return a < b;
    });

    if (!zeros.empty() && zeros.size() > half_count) {
        ObstructionWitness w(P.dim());
        w.kind = WitnessKind::INFINITE_COMPATIBILITY;
        int violated = 0;
        for (std::size_t j = 0; j < zeros.size(); ++j) {
            const Freq& xi = zeros[j];
            // Rapidly decaying amplitude keeps the right-hand side smooth.
            ExactScalar amp(Rational(BigInt(1), BigInt(1) << (j + 1)));
            // The singular pair matrix has rank <= 1, so at least two of
            // these four probes fall outside its range.
            const std::pair<ExactScalar, ExactScalar> probes[] = {
                {amp, ExactScalar(0)},
                {amp * ExactScalar::i(), ExactScalar(0)},
                {ExactScalar(0), amp},
                {ExactScalar(0), amp * ExactScalar::i()},
            };
            for (const auto& [fp, fmc] : probes) {
                PairSolution<ExactScalar> ps = solve_pair(P, xi, fp, fmc);
                if (ps.handling != PairHandling::INCOMPATIBLE) continue;
                FreqBig big = detail::to_big(xi);
                w.f_hat.set(big, fp);
                w.f_hat.set(negated(big), fmc.conj());
                w.induced_u_hat.set(big, ps.u_plus);
                w.induced_u_hat.set(negated(big), ps.u_minus);
                w.omega0.push_back(big);
                w.diagnostics.push_back(
                    {big, normsq_of(big), fp.normsq(), ps.u_plus.normsq(), ps.u_minus.normsq()});
                ++violated;
                break;
            }
        }
        if (violated > 0) {
            w.branch = "compatibility conditions keep appearing: " +
                       std::to_string(half_count) + " pairs within radius " +
                       std::to_string(zero_radius / 2) + ", " + std::to_string(zeros.size()) +
                       " within " + std::to_string(zero_radius) +
                       "; the right-hand side violates " + std::to_string(violated) + " of them";
            return w;
        }
    }

    SlowSequence seq = find_slow_sequence(P, radius, opts);
    if (seq.points.empty()) return std::nullopt;
    ObstructionWitness w = build_case2_witness(P, seq.frequencies());
    if (!seq.note.empty()) w.branch += "; " + seq.note;
    return w;
}

inline std::optional<ObstructionWitness> find_obstruction(const VekuaOperator<FloatScalar>&,
                                                          double,
                                                          const SlowSequenceOptions& = {}) {
    throw input_error(
        "obstruction analysis requires the exact backend: witnesses must satisfy their "
        "defining identities exactly");
}

}  // namespace vekua

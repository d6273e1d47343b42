#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <string>
#include <vector>

#include "vekua/diophantine.hpp"

using namespace vekua;

namespace {

Rational rat(long long n, long long d = 1) { return Rational(BigInt(n), BigInt(d)); }

/// Quotient list as plain integers, for compact comparisons.
std::vector<long long> quotients_of(const ContinuedFraction& cf) {
    std::vector<long long> out;
    for (const BigInt& a : cf.quotients) out.push_back(static_cast<long long>(a));
    return out;
}

std::vector<long long> denominators_of(const ContinuedFraction& cf) {
    std::vector<long long> out;
    for (const auto& c : cf.convergents) out.push_back(static_cast<long long>(c.q));
    return out;
}

}  // namespace

TEST_CASE("eta parsing covers every declared kind") {
    SECTION("prefixed forms") {
        auto r = parse_eta("rational:3/2");
        REQUIRE(r.kind() == RealKind::RATIONAL);
        REQUIRE(r.payload() == rat(3, 2));

        auto s = parse_eta("sqrt:2");
        REQUIRE(s.kind() == RealKind::SQRT);
        REQUIRE(s.payload() == rat(2));

        auto sr = parse_eta("sqrt:1/2");
        REQUIRE(sr.kind() == RealKind::SQRT_RATIONAL);
        REQUIRE(sr.payload() == rat(1, 2));

        auto d = parse_eta("decimal:1.25");
        REQUIRE(d.kind() == RealKind::DECIMAL);
        REQUIRE(d.payload() == rat(5, 4));
        REQUIRE(d.decimal_fraction_digits() == 2);

        auto l = parse_eta("liouville:10,3");
        REQUIRE(l.kind() == RealKind::LIOUVILLE_TRUNC);
        REQUIRE(l.liouville_base() == 10);
        REQUIRE(l.liouville_depth() == 3);
        REQUIRE(l.payload() == rat(110001, 1000000));

        REQUIRE(parse_eta("e").kind() == RealKind::NAMED_E);
        REQUIRE(parse_eta("pi").kind() == RealKind::NAMED_PI);
    }

    SECTION("bare literals") {
        REQUIRE(parse_eta("7").kind() == RealKind::RATIONAL);
        REQUIRE(parse_eta("7").payload() == rat(7));
        REQUIRE(parse_eta("2.5").kind() == RealKind::DECIMAL);
        REQUIRE(parse_eta("2.5").payload() == rat(5, 2));
    }

    SECTION("perfect squares normalize to rationals") {
        auto four = parse_eta("sqrt:4");
        REQUIRE(four.kind() == RealKind::RATIONAL);
        REQUIRE(four.payload() == rat(2));

        auto frac = parse_eta("sqrt:9/4");
        REQUIRE(frac.kind() == RealKind::RATIONAL);
        REQUIRE(frac.payload() == rat(3, 2));
    }

    SECTION("round trip through to_string") {
        for (const char* text : {"rational:3/2", "sqrt:2", "sqrt:1/2", "decimal:1.25",
                                 "liouville:10,3", "e", "pi"}) {
            auto a = parse_eta(text);
            auto b = parse_eta(a.to_string());
            REQUIRE(a.kind() == b.kind());
            REQUIRE(a.payload() == b.payload());
        }
    }

    SECTION("malformed input is rejected") {
        REQUIRE_THROWS_AS(parse_eta("sqrt:-1"), input_error);
        REQUIRE_THROWS_AS(parse_eta("liouville:1,3"), input_error);
        REQUIRE_THROWS_AS(parse_eta("liouville:10,9"), input_error);
        REQUIRE_THROWS_AS(parse_eta("liouville:10"), input_error);
        REQUIRE_THROWS_AS(parse_eta("decimal:abc"), input_error);
        REQUIRE_THROWS_AS(parse_eta("decimal:1."), input_error);
        REQUIRE_THROWS_AS(parse_eta("xyz"), input_error);
    }

    SECTION("exact squares are available exactly where advertised") {
        REQUIRE(*parse_eta("sqrt:2").exact_square() == rat(2));
        REQUIRE(*parse_eta("rational:3/2").exact_square() == rat(9, 4));
        REQUIRE(!parse_eta("decimal:1.41").exact_square().has_value());
        REQUIRE(!parse_eta("e").exact_square().has_value());
        REQUIRE(parse_eta("liouville:10,3").exact_square().has_value() == false);
    }

    SECTION("speed recovery from a squared speed") {
        REQUIRE(speed_from_squared(rat(4)).kind() == RealKind::RATIONAL);
        REQUIRE(speed_from_squared(rat(4)).payload() == rat(2));
        REQUIRE(speed_from_squared(rat(2)).kind() == RealKind::SQRT);
        REQUIRE(speed_from_squared(rat(9, 4)).payload() == rat(3, 2));
        REQUIRE(speed_from_squared(rat(1, 2)).kind() == RealKind::SQRT_RATIONAL);
        REQUIRE_THROWS_AS(speed_from_squared(rat(-1)), input_error);
    }
}

TEST_CASE("certified enclosures bracket the represented numbers") {
    SECTION("rationals are point intervals") {
        auto enc = enclosure(RealNumberSpec::rational(rat(3, 2)), 10);
        REQUIRE(enc.lo == rat(3, 2));
        REQUIRE(enc.hi == rat(3, 2));
        REQUIRE(enc.width().is_zero());
    }

    SECTION("square roots bracket at the requested precision") {
        auto enc = enclosure(RealNumberSpec::square_root(rat(2)), 40);
        REQUIRE(enc.lo * enc.lo <= rat(2));
        REQUIRE(enc.hi * enc.hi >= rat(2));
        REQUIRE(enc.width() <= Rational(BigInt(1), detail::pow10(40)));
    }

    SECTION("decimal literals carry their declared half-ulp width") {
        auto enc = enclosure(RealNumberSpec::decimal("1.50"), 100);
        REQUIRE(enc.lo == rat(1495, 1000));
        REQUIRE(enc.hi == rat(1505, 1000));
    }

    SECTION("truncated factorial series locate their limit via the tail bound") {
        auto enc = enclosure(RealNumberSpec::liouville(10, 2), 50);
        // partial sum 0.11, tail in (10^-6, 2*10^-6)
        REQUIRE(enc.lo == rat(110001, 1000000));
        REQUIRE(enc.hi == rat(110002, 1000000));
    }

    SECTION("named constants match their classical digits") {
        const Rational ulp30(BigInt(1), detail::pow10(30));

        auto e30 = enclosure(RealNumberSpec::euler(), 30);
        Rational e_ref = Rational(BigInt("2718281828459045235360287471352"), detail::pow10(30));
        REQUIRE(e30.lo <= e_ref + ulp30);
        REQUIRE(e30.hi >= e_ref);
        REQUIRE(e30.width() <= Rational(BigInt(1), detail::pow10(27)));

        auto pi30 = enclosure(RealNumberSpec::pi(), 30);
        Rational pi_ref = Rational(BigInt("3141592653589793238462643383279"), detail::pow10(30));
        REQUIRE(pi30.lo <= pi_ref + ulp30);
        REQUIRE(pi30.hi >= pi_ref);
        REQUIRE(pi30.width() <= Rational(BigInt(1), detail::pow10(27)));
    }
}

TEST_CASE("continued fractions of rationals terminate with canonical quotients") {
    auto cf = cf_expand(RealNumberSpec::rational(rat(22, 7)), 20);
    REQUIRE(quotients_of(cf) == std::vector<long long>{3, 7});
    REQUIRE(cf.exactness == CfExactness::EXACT_RATIONAL);
    REQUIRE(!cf.periodic());
    REQUIRE(cf.convergents.size() == 2);
    REQUIRE(cf.convergents[0].p == 3);
    REQUIRE(cf.convergents[0].q == 1);
    REQUIRE(cf.convergents[1].p == 22);
    REQUIRE(cf.convergents[1].q == 7);

    auto zero = cf_expand(RealNumberSpec::rational(rat(0)), 5);
    REQUIRE(quotients_of(zero) == std::vector<long long>{0});
    REQUIRE(zero.exactness == CfExactness::EXACT_RATIONAL);

    // The Euclid/floor algorithm is canonical: never a trailing quotient of 1.
    auto seventeen = cf_expand(RealNumberSpec::rational(rat(17, 12)), 20);
    REQUIRE(quotients_of(seventeen) == std::vector<long long>{1, 2, 2, 2});

    // Negative rationals expand through the floor, keeping a_k >= 1 for k >= 1.
    auto neg = cf_expand(RealNumberSpec::rational(rat(-7, 2)), 20);
    REQUIRE(quotients_of(neg) == std::vector<long long>{-4, 2});
    REQUIRE(determinant_identity_holds(neg));

    // Depth cuts long expansions and reports the truncation.
    auto cut = cf_expand(RealNumberSpec::rational(rat(17, 12)), 2);
    REQUIRE(quotients_of(cut) == std::vector<long long>{1, 2});
    REQUIRE(cut.exactness == CfExactness::TRUNCATED);

    REQUIRE_THROWS_AS(cf_expand(RealNumberSpec::rational(rat(1)), 0), input_error);
}

TEST_CASE("quadratic surds expand to periodic continued fractions") {
    SECTION("sqrt(2) = [1; 2, 2, 2, ...]") {
        auto cf = cf_expand(RealNumberSpec::square_root(rat(2)), 10);
        REQUIRE(quotients_of(cf) ==
                std::vector<long long>{1, 2, 2, 2, 2, 2, 2, 2, 2, 2});
        REQUIRE(cf.exactness == CfExactness::EXACT_PERIODIC);
        REQUIRE(cf.periodic());
        REQUIRE(cf.period_start == 1);
        REQUIRE(cf.period_length == 1);
        REQUIRE(denominators_of(cf) ==
                std::vector<long long>{1, 2, 5, 12, 29, 70, 169, 408, 985, 2378});
        REQUIRE(cf.convergents[4].p == 41);  // 41/29
    }

    SECTION("sqrt(3) = [1; 1, 2, 1, 2, ...]") {
        auto cf = cf_expand(RealNumberSpec::square_root(rat(3)), 9);
        REQUIRE(quotients_of(cf) == std::vector<long long>{1, 1, 2, 1, 2, 1, 2, 1, 2});
        REQUIRE(cf.period_start == 1);
        REQUIRE(cf.period_length == 2);
    }

    SECTION("sqrt(1/2) = [0; 1, 2, 2, 2, ...]") {
        auto cf = cf_expand(RealNumberSpec::square_root(rat(1, 2)), 8);
        REQUIRE(quotients_of(cf) == std::vector<long long>{0, 1, 2, 2, 2, 2, 2, 2});
        REQUIRE(cf.exactness == CfExactness::EXACT_PERIODIC);
        REQUIRE(cf.period_length == 1);
    }

    SECTION("truncation below the period degrades honestly") {
        auto cf = cf_expand(RealNumberSpec::square_root(rat(2)), 1);
        REQUIRE(quotients_of(cf) == std::vector<long long>{1});
        REQUIRE(cf.exactness == CfExactness::TRUNCATED);
        REQUIRE(!cf.periodic());
    }
}

TEST_CASE("truncated factorial series expose explosive quotient growth") {
    SECTION("base 10, depth 3") {
        auto cf = cf_expand(RealNumberSpec::liouville(10, 3), 40);
        REQUIRE(quotients_of(cf) == std::vector<long long>{0, 9, 11, 99, 1, 10, 9});
        REQUIRE(denominators_of(cf) ==
                std::vector<long long>{1, 9, 100, 9909, 10009, 109999, 1000000});
        REQUIRE(cf.exactness == CfExactness::TRUNCATED);
    }

    SECTION("base 10, depth 4 jumps past quadratic denominator growth") {
        auto cf = cf_expand(RealNumberSpec::liouville(10, 4), 40);
        REQUIRE(cf.exactness == CfExactness::TRUNCATED);
        bool explosive = false;
        for (std::size_t k = 0; k + 1 < cf.convergents.size(); ++k) {
            if (cf.convergents[k + 1].q > cf.convergents[k].q * cf.convergents[k].q * 100000)
                explosive = true;
        }
        REQUIRE(explosive);
        REQUIRE(cf.convergents.back().q >= detail::pow10(22));
        REQUIRE(determinant_identity_holds(cf));
    }
}

TEST_CASE("continued fractions of named constants match the classical expansions") {
    auto e = cf_expand(RealNumberSpec::euler(), 12);
    REQUIRE(quotients_of(e) == std::vector<long long>{2, 1, 2, 1, 1, 4, 1, 1, 6, 1, 1, 8});
    REQUIRE(e.exactness == CfExactness::TRUNCATED);

    auto pi = cf_expand(RealNumberSpec::pi(), 10);
    REQUIRE(quotients_of(pi) == std::vector<long long>{3, 7, 15, 1, 292, 1, 1, 1, 2, 1});
}

TEST_CASE("convergent invariants hold on every expansion") {
    std::vector<ContinuedFraction> cases;
    cases.push_back(cf_expand(RealNumberSpec::rational(rat(22, 7)), 20));
    cases.push_back(cf_expand(RealNumberSpec::rational(rat(355, 113)), 20));
    cases.push_back(cf_expand(RealNumberSpec::square_root(rat(2)), 18));
    cases.push_back(cf_expand(RealNumberSpec::square_root(rat(3)), 18));
    cases.push_back(cf_expand(RealNumberSpec::square_root(rat(1, 2)), 14));
    cases.push_back(cf_expand(RealNumberSpec::liouville(10, 3), 40));
    cases.push_back(cf_expand(RealNumberSpec::euler(), 15));
    cases.push_back(cf_expand(RealNumberSpec::pi(), 12));
    cases.push_back(cf_expand(RealNumberSpec::decimal("2.718281828459045"), 40));

    for (const auto& cf : cases) {
        CAPTURE(quotients_of(cf));

        SECTION("determinant identity p_k q_{k-1} - p_{k-1} q_k = (-1)^{k-1}") {
            REQUIRE(determinant_identity_holds(cf));
        }

        SECTION("approximation inequality |x - p_k/q_k| < 1/(q_k q_{k+1})") {
            for (std::size_t k = 0; k + 1 < cf.convergents.size(); ++k) {
                const auto& c = cf.convergents[k];
                const auto& n = cf.convergents[k + 1];
                Rational approx(c.p, c.q);
                Rational err_lo = (cf.value.lo - approx).abs();
                Rational err_hi = (cf.value.hi - approx).abs();
                Rational err = err_lo < err_hi ? err_hi : err_lo;
                Rational bound(BigInt(1), c.q * n.q);
                // A terminating expansion attains the bound at its last step.
                if (cf.exactness == CfExactness::EXACT_RATIONAL) {
                    REQUIRE(err <= bound);
                } else {
                    REQUIRE(err < bound);
                }
            }
        }
    }

    SECTION("convergents of sqrt(2) beat every smaller denominator") {
        auto cf = cf_expand(RealNumberSpec::square_root(rat(2)), 8);
        const double r2 = std::sqrt(2.0);
        for (std::size_t k = 1; k < cf.convergents.size(); ++k) {
            const auto qk = static_cast<long long>(cf.convergents[k].q);
            const auto pk = static_cast<long long>(cf.convergents[k].p);
            const double best = std::abs(qk * r2 - pk);
            for (long long q = 1; q < qk; ++q) {
                const double dist = std::abs(q * r2 - std::nearbyint(q * r2));
                REQUIRE(best < dist - 1e-12);
            }
        }
    }
}

TEST_CASE("irrationality exponent estimates") {
    SECTION("sqrt(2) at depth 30 sits in the quadratic-irrational band") {
        auto est = irrationality_exponent_estimate(cf_expand(RealNumberSpec::square_root(rat(2)), 30));
        REQUIRE(est.applicable);
        REQUIRE(std::abs(est.mu_hat - 2.0796) <= 2e-3);
        REQUIRE(est.mu_hat >= 1.9);
        REQUIRE(est.mu_hat <= 2.1);
        // q_0 = 1 yields no exponent; deeper convergents do.
        REQUIRE(std::isnan(est.per_convergent[0]));
        REQUIRE(std::isfinite(est.per_convergent[5]));
        REQUIRE(est.per_convergent.size() == 30);
    }

    SECTION("truncated factorial series report their near-Liouville exponents") {
        auto est5 = irrationality_exponent_estimate(cf_expand(RealNumberSpec::liouville(10, 5), 64));
        REQUIRE(est5.applicable);
        REQUIRE(est5.mu_hat > 5.0);
        REQUIRE(std::abs(est5.mu_hat - 5.9975) <= 2e-3);

        auto est3 = irrationality_exponent_estimate(cf_expand(RealNumberSpec::liouville(10, 3), 64));
        REQUIRE(std::abs(est3.mu_hat - 3.9498) <= 2e-3);
    }

    SECTION("a decimal stand-in for e estimates near 2") {
        auto est = irrationality_exponent_estimate(
            cf_expand(RealNumberSpec::decimal("2.718281828459045"), 64));
        REQUIRE(est.applicable);
        REQUIRE(std::abs(est.mu_hat - 2.245) <= 2e-3);
    }

    SECTION("exact rationals are flagged not applicable") {
        auto est = irrationality_exponent_estimate(cf_expand(RealNumberSpec::rational(rat(17, 12)), 20));
        REQUIRE(!est.applicable);
        REQUIRE(std::isnan(est.mu_hat));
    }

    SECTION("fewer than three convergents is an input error") {
        auto cf = cf_expand(RealNumberSpec::decimal("1.5"), 40);
        REQUIRE(cf.convergents.size() < 3);
        REQUIRE_THROWS_AS(irrationality_exponent_estimate(cf), input_error);
    }
}

TEST_CASE("non-Liouville certificates grade the evidence honestly") {
    SECTION("quadratic surds are certified through their period") {
        auto cert = non_liouville_certificate(RealNumberSpec::square_root(rat(2)));
        REQUIRE(cert.status == CertificateStatus::CERTIFIED);
        REQUIRE(cert.reason.find("period [2]") != std::string::npos);

        auto half = non_liouville_certificate(RealNumberSpec::square_root(rat(1, 2)));
        REQUIRE(half.status == CertificateStatus::CERTIFIED);
        REQUIRE(half.reason.find("period [2]") != std::string::npos);

        auto three = non_liouville_certificate(RealNumberSpec::square_root(rat(3)));
        REQUIRE(three.status == CertificateStatus::CERTIFIED);
        REQUIRE(three.reason.find("period [1,2]") != std::string::npos);
    }

    SECTION("rationals are not irrational") {
        auto cert = non_liouville_certificate(RealNumberSpec::rational(rat(3, 2)));
        REQUIRE(cert.status == CertificateStatus::NOT_IRRATIONAL);
        REQUIRE(cert.reason.find("3/2") != std::string::npos);
    }

    SECTION("estimates stay heuristic, never promoted") {
        auto louie = non_liouville_certificate(RealNumberSpec::liouville(10, 5));
        REQUIRE(louie.status == CertificateStatus::HEURISTIC);
        REQUIRE(louie.mu_hat > 5.0);

        auto e_dec = non_liouville_certificate(RealNumberSpec::decimal("2.718281828459045"));
        REQUIRE(e_dec.status == CertificateStatus::HEURISTIC);
        REQUIRE(std::abs(e_dec.mu_hat - 2.245) <= 2e-3);

        auto e_named = non_liouville_certificate(RealNumberSpec::euler());
        REQUIRE(e_named.status == CertificateStatus::HEURISTIC);
        REQUIRE(e_named.mu_hat >= 1.9);
        REQUIRE(e_named.mu_hat <= 2.6);

        auto r2_dec = non_liouville_certificate(RealNumberSpec::decimal("1.4142135623730951"));
        REQUIRE(r2_dec.status == CertificateStatus::HEURISTIC);
        REQUIRE(std::abs(r2_dec.mu_hat - 2.109) <= 2e-3);
    }

    SECTION("insufficient precision stays unknown") {
        auto cert = non_liouville_certificate(RealNumberSpec::decimal("1.5"));
        REQUIRE(cert.status == CertificateStatus::UNKNOWN);
        REQUIRE(cert.reason.find("fewer than 3") != std::string::npos);
    }
}

TEST_CASE("small-divisor scans in one dimension") {
    SECTION("sqrt(2): the minimum sits on the first convergent") {
        auto rep = small_divisor_scan(RealNumberSpec::square_root(rat(2)), 200, 1.0);
        REQUIRE(!rep.zero_found);
        REQUIRE(std::abs(rep.min_value - 0.8284271247461903) <= 1e-12);
        REQUIRE(rep.arg_tau == 1);
        REQUIRE(rep.arg_xi == Freq{1});
        REQUIRE(rep.argmin_on_convergent_denominator);
        REQUIRE(rep.digits_used >= 64);
    }

    SECTION("integer eta resonates immediately") {
        auto rep = small_divisor_scan(RealNumberSpec::rational(rat(1)), 50, 1.0);
        REQUIRE(rep.zero_found);
        REQUIRE(rep.min_value == 0.0);
        REQUIRE(rep.arg_tau == 1);
        REQUIRE(rep.arg_xi == Freq{1});
    }

    SECTION("rational eta p/q resonates at xi = q") {
        auto rep = small_divisor_scan(RealNumberSpec::rational(rat(3, 7)), 50, 2.0);
        REQUIRE(rep.zero_found);
        REQUIRE(rep.arg_tau == 3);
        REQUIRE(rep.arg_xi == Freq{7});
    }

    SECTION("truncated factorial series: tau = 0 against the tiny value wins") {
        auto rep = small_divisor_scan(RealNumberSpec::liouville(10, 3), 10000, 3.0);
        REQUIRE(!rep.zero_found);
        REQUIRE(std::abs(rep.min_value - 0.110001) <= 1e-12);
        REQUIRE(rep.arg_tau == 0);
        REQUIRE(rep.arg_xi == Freq{1});
        REQUIRE(rep.argmin_on_convergent_denominator);
    }
}

TEST_CASE("small-divisor scans use true euclidean norms in two dimensions") {
    SECTION("sqrt(2) resonates on a non-square norm: tau = sqrt(2)*sqrt(50)") {
        auto rep = small_divisor_scan(RealNumberSpec::square_root(rat(2)), 50, 1.0, 2);
        REQUIRE(rep.zero_found);
        REQUIRE(rep.min_value == 0.0);
        REQUIRE(rep.arg_tau == 10);
        REQUIRE(normsq_of(rep.arg_xi) == 50);
        REQUIRE(rep.arg_xi == Freq{1, -7});
    }

    SECTION("sqrt(3) never resonates; values match a direct enumeration") {
        const double r3 = std::sqrt(3.0);
        for (double R : {20.0, 50.0}) {
            auto rep = small_divisor_scan(RealNumberSpec::square_root(rat(3)), R, 1.0, 2);
            REQUIRE(!rep.zero_found);

            double best = std::numeric_limits<double>::infinity();
            std::int64_t best_tau = -1, best_nsq = -1;
            const auto max_nsq = static_cast<std::int64_t>(R * R + 1e-9);
            for (std::int64_t a = 0; a * a <= max_nsq; ++a) {
                for (std::int64_t b = -static_cast<std::int64_t>(R); b <= R; ++b) {
                    const std::int64_t nsq = a * a + b * b;
                    if (nsq == 0 || nsq > max_nsq) continue;
                    const double s = std::sqrt(static_cast<double>(nsq));
                    for (std::int64_t t = 0; t + s <= R + 1e-9; ++t) {
                        const double v = std::abs(t - r3 * s) * (s + t);
                        if (v < best) {
                            best = v;
                            best_tau = t;
                            best_nsq = nsq;
                        }
                    }
                }
            }
            CAPTURE(R);
            REQUIRE(std::abs(rep.min_value - best) <= 1e-9);
            REQUIRE(rep.arg_tau == best_tau);
            REQUIRE(normsq_of(rep.arg_xi) == best_nsq);
        }
    }

    SECTION("frozen two-dimensional minima for sqrt(3)") {
        auto r20 = small_divisor_scan(RealNumberSpec::square_root(rat(3)), 20, 1.0, 2);
        REQUIRE(std::abs(r20.min_value - 0.7891135698127067) <= 1e-9);
        REQUIRE(r20.arg_tau == 11);
        REQUIRE(normsq_of(r20.arg_xi) == 40);

        auto r50 = small_divisor_scan(RealNumberSpec::square_root(rat(3)), 50, 1.0, 2);
        REQUIRE(std::abs(r50.min_value - 0.78873013846767) <= 1e-9);
        REQUIRE(r50.arg_tau == 31);
        REQUIRE(normsq_of(r50.arg_xi) == 320);
    }
}

TEST_CASE("scan input validation and precision exhaustion") {
    auto r2 = RealNumberSpec::square_root(rat(2));
    REQUIRE_THROWS_AS(small_divisor_scan(r2, 50, 0.0), input_error);
    REQUIRE_THROWS_AS(small_divisor_scan(r2, 0.5, 1.0), input_error);
    REQUIRE_THROWS_AS(small_divisor_scan(r2, 50, 1.0, 0), input_error);
    REQUIRE_THROWS_AS(small_divisor_scan(r2, 50, 1.0, 4), input_error);

    SECTION("a coarse decimal cannot separate its near-resonances") {
        // 1.41 +- 0.005: already 17 * eta straddles 24, and no precision
        // request can shrink a declared decimal width.
        auto eta = RealNumberSpec::decimal("1.41");
        try {
            small_divisor_scan(eta, 250, 1.0);
            FAIL("expected precision_error");
        } catch (const precision_error& e) {
            const std::string msg = e.what();
            REQUIRE(msg.find("digits") != std::string::npos);
        }
    }

    SECTION("a full-precision decimal resolves the same scan") {
        auto eta = RealNumberSpec::decimal("1.4142135623730951");
        auto rep = small_divisor_scan(eta, 200, 1.0);
        REQUIRE(!rep.zero_found);
        REQUIRE(std::abs(rep.min_value - 0.8284271247461903) <= 1e-9);
        REQUIRE(rep.arg_tau == 1);
        REQUIRE(rep.arg_xi == Freq{1});
    }
}

#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "vekua/discriminant.hpp"

using namespace vekua;

namespace {
VekuaOperator<ExactScalar> heat_op(const Rational& eta_sq, ExactScalar A, ExactScalar B) {
    return {heat_spec<ExactScalar>(1, eta_sq), std::move(A), std::move(B)};
}
VekuaOperator<ExactScalar> wave_op(const Rational& eta_sq, ExactScalar A, ExactScalar B) {
    return {wave_spec<ExactScalar>(1, eta_sq), std::move(A), std::move(B)};
}
} // namespace

TEST_CASE("delta on the heat family", "[discriminant]") {
    SECTION("free heat: delta = sigma^2, modulus tau^2 + |xi|^4") {
        auto P = heat_op(Rational(1), ExactScalar(0), ExactScalar(0));
        REQUIRE(delta(P, Freq{1, 0}) == ExactScalar(Rational(-1)));        // (i)^2
        REQUIRE(delta(P, Freq{0, 1}) == ExactScalar(Rational(1)));         // (1)^2
        REQUIRE(delta(P, Freq{2, 1}) == ExactScalar(Rational(-3), Rational(4)));  // (2i+1)^2
        REQUIRE(delta(P, Freq{0, 0}).is_zero());
        REQUIRE(delta(P, Freq{1, 1}).normsq() == Rational(4));             // tau^2+xi^4 = 2
    }
    SECTION("perturbed heat has no nonzero-frequency zeros and min |delta| = 6") {
        auto P = heat_op(Rational(1), ExactScalar(Rational(2), Rational(3)), ExactScalar(1));
        REQUIRE(delta(P, Freq{0, 0}) == ExactScalar(Rational(12)));  // |A|^2 - |B|^2
        // delta = sigma^2 - 4 sigma + 12 here; at sigma = 1 + 3i it is -6i.
        REQUIRE(delta(P, Freq{3, 1}) == ExactScalar(Rational(0), Rational(-6)));
        auto zs = zero_set(P, 8);
        REQUIRE(zs.empty());
        auto rep = dc_scan(P, 16);
        REQUIRE(rep.certified);
        REQUIRE(rep.zeros.empty());
        REQUIRE(rep.min_nonzero_modulus_sq == Rational(36));
        REQUIRE(rep.argmin == Freq{3, -1});
        REQUIRE(rep.gamma_star == 0.0);
        REQUIRE(rep.evidence == ScanEvidence::SUPPORTED);
    }
    SECTION("resonant heat instance vanishes exactly at (+-1, +-1)") {
        auto P = heat_op(Rational(BigInt(1), BigInt(4)),
                         ExactScalar(Rational(BigInt(1), BigInt(4)), Rational(BigInt(5), BigInt(4))),
                         ExactScalar(Rational(BigInt(3), BigInt(4))));
        REQUIRE(delta(P, Freq{1, 1}).is_zero());
        REQUIRE(delta(P, Freq{-1, 1}).is_zero());
        auto zs = zero_set(P, 8);
        REQUIRE(zs == std::vector<Freq>{{-1, -1}, {-1, 1}, {1, -1}, {1, 1}});
    }
}

TEST_CASE("delta on the wave family", "[discriminant]") {
    SECTION("sqrt(2) wave with A=i, B=1: delta = (tau^2 - 2 xi^2)^2") {
        auto P = wave_op(Rational(2), ExactScalar::i(), ExactScalar(1));
        REQUIRE(delta(P, Freq{3, 2}) == ExactScalar(Rational(1)));
        REQUIRE(delta(P, Freq{41, 29}) == ExactScalar(Rational(1)));  // Pell minimum
        REQUIRE(delta(P, Freq{0, 0}).is_zero());
        auto rep = dc_scan(P, 64);
        REQUIRE(rep.zeros == std::vector<Freq>{{0, 0}});
        REQUIRE(rep.min_nonzero_modulus_sq == Rational(1));
        REQUIRE(rep.gamma_star == 0.0);
        REQUIRE(rep.evidence == ScanEvidence::SUPPORTED);
    }
    SECTION("resonant free wave is refuted by zeros far out") {
        auto P = wave_op(Rational(1), ExactScalar(0), ExactScalar(0));
        auto rep = dc_scan(P, 64);
        REQUIRE(rep.evidence == ScanEvidence::ZEROS_AT_LARGE_NORM);
        REQUIRE(std::find(rep.zeros.begin(), rep.zeros.end(), Freq{45, 45}) != rep.zeros.end());
        REQUIRE(std::find(rep.zeros.begin(), rep.zeros.end(), Freq{-45, 45}) != rep.zeros.end());
    }
}

TEST_CASE("zero sets of elliptic perturbations", "[discriminant]") {
    // L = laplacian, A = -5, B = 4: |xi|^2 in {1, 9} solves (|xi|^2-5)^2 = 16.
    VekuaOperator<ExactScalar> P{laplace_spec<ExactScalar>(2), ExactScalar(-5), ExactScalar(4)};
    auto zs = zero_set(P, 5);
    REQUIRE(zs.size() == 8);
    for (const auto& z : zs) {
        auto n = normsq_of(z);
        REQUIRE((n == 1 || n == 9));
    }
    REQUIRE(zero_set(P, 0).empty());
}

TEST_CASE("pair symmetry: conj(delta(xi)) = delta(-xi)", "[discriminant]") {
    std::mt19937 rng(2024);
    std::uniform_int_distribution<int> num(-6, 6);
    std::uniform_int_distribution<int> den(1, 5);
    auto rand_scalar = [&] {
        return ExactScalar(Rational(BigInt(num(rng)), BigInt(den(rng))),
                           Rational(BigInt(num(rng)), BigInt(den(rng))));
    };
    std::uniform_int_distribution<int> ord(0, 2);
    for (int trial = 0; trial < 25; ++trial) {
        std::map<MultiIndex, ExactScalar> t;
        for (int k = 0; k < 5; ++k) {
            MultiIndex alpha({ord(rng), ord(rng)});
            if (alpha.order() == 0) continue;
            auto c = rand_scalar();
            if (!c.is_zero()) t.emplace(alpha, c);
        }
        if (t.empty()) continue;
        VekuaOperator<ExactScalar> P{OperatorSpec<ExactScalar>(2, std::move(t)), rand_scalar(), rand_scalar()};
        std::uniform_int_distribution<std::int64_t> fr(-9, 9);
        for (int k = 0; k < 10; ++k) {
            Freq xi{fr(rng), fr(rng)};
            REQUIRE(delta(P, xi).conj() == delta(P, negated(xi)));
        }
    }
}

TEST_CASE("prepared delta lanes match the direct formula", "[discriminant]") {
    std::mt19937 rng(777);
    std::uniform_int_distribution<int> num(-6, 6);
    std::uniform_int_distribution<int> den(1, 5);
    auto rand_scalar = [&] {
        return ExactScalar(Rational(BigInt(num(rng)), BigInt(den(rng))),
                           Rational(BigInt(num(rng)), BigInt(den(rng))));
    };
    std::uniform_int_distribution<int> ord(0, 2);
    std::uniform_int_distribution<std::int64_t> fr(-15, 15);
    int fast_instances = 0;
    for (int trial = 0; trial < 25; ++trial) {
        std::map<MultiIndex, ExactScalar> t;
        for (int k = 0; k < 5; ++k) {
            MultiIndex alpha({ord(rng), ord(rng)});
            if (alpha.order() == 0) continue;
            auto c = rand_scalar();
            if (!c.is_zero()) t.emplace(alpha, c);
        }
        if (t.empty()) continue;
        VekuaOperator<ExactScalar> P{OperatorSpec<ExactScalar>(2, std::move(t)), rand_scalar(), rand_scalar()};
        DeltaEvaluator<ExactScalar> ev(P, 15);
        if (ev.has_raw_lane()) ++fast_instances;
        for (int k = 0; k < 12; ++k) {
            Freq xi{fr(rng), fr(rng)};
            REQUIRE(ev.eval(xi) == delta(P, xi));
            REQUIRE(ev.modulus_sq(xi) == delta(P, xi).normsq());
        }
    }
    REQUIRE(fast_instances >= 20);  // the 128-bit lane must actually engage
}

TEST_CASE("float backend delta agrees with exact to rounding", "[discriminant]") {
    VekuaOperator<ExactScalar> PE = heat_op(Rational(1), ExactScalar(Rational(2), Rational(3)), ExactScalar(1));
    VekuaOperator<FloatScalar> PF{heat_spec<FloatScalar>(1, 1.0), FloatScalar(2.0, 3.0), FloatScalar(1.0)};
    for (std::int64_t tau = -6; tau <= 6; ++tau)
        for (std::int64_t xi = -6; xi <= 6; ++xi) {
            auto de = delta(PE, Freq{tau, xi}).to_complex();
            auto df = delta(PF, Freq{tau, xi}).to_complex();
            REQUIRE(std::abs(de - df) <= 1e-9 * (1.0 + std::abs(de)));
        }
    auto rep = dc_scan(PF, 16);
    REQUIRE(!rep.certified);
    REQUIRE(rep.evidence == ScanEvidence::SUPPORTED);
    REQUIRE(rep.min_nonzero_modulus == Catch::Approx(6.0).epsilon(1e-12));
}

TEST_CASE("compatibility defect at a degenerate pair", "[discriminant]") {
    auto P = heat_op(Rational(BigInt(1), BigInt(4)),
                     ExactScalar(Rational(BigInt(1), BigInt(4)), Rational(BigInt(5), BigInt(4))),
                     ExactScalar(Rational(BigInt(3), BigInt(4))));
    Freq z{1, 1};
    REQUIRE(delta(P, z).is_zero());
    // (conj sigma(-xi) - conj A) = 9i/4 here; f with fhat(xi) = i/3,
    // fhat(-xi) = 1 balances it exactly.
    ExactScalar compatible = compatibility_defect(P, z, ExactScalar(Rational(0), Rational(BigInt(1), BigInt(3))),
                                                  ExactScalar(1).conj());
    REQUIRE(compatible.is_zero());
    ExactScalar incompatible = compatibility_defect(P, z, ExactScalar(1), ExactScalar(0));
    REQUIRE(!incompatible.is_zero());
    REQUIRE(incompatible == ExactScalar(Rational(0), Rational(BigInt(9), BigInt(4))));
}

TEST_CASE("evidence grading from growth estimates", "[discriminant][scan]") {
    REQUIRE(grade_evidence(0.5, 1.8, 3.1, false, 64) == ScanEvidence::REFUTED_EVIDENCE);
    REQUIRE(grade_evidence(1.0, 1.05, 1.08, false, 64) == ScanEvidence::SUPPORTED);
    REQUIRE(grade_evidence(0.2, 0.8, 1.3, false, 64) == ScanEvidence::UNDETERMINED);
    REQUIRE(grade_evidence(0.0, 1.2, 2.5, true, 64) == ScanEvidence::ZEROS_AT_LARGE_NORM);
    // the growth test is suppressed below radius 16
    REQUIRE(grade_evidence(0.0, 1.2, 2.5, false, 8) == ScanEvidence::UNDETERMINED);
    REQUIRE(grade_evidence(0.0, 0.0, 0.05, false, 8) == ScanEvidence::SUPPORTED);
}

TEST_CASE("scan reporting details", "[discriminant][scan]") {
    auto P = heat_op(Rational(1), ExactScalar(Rational(2), Rational(3)), ExactScalar(1));
    SECTION("radius below 4 is rejected") {
        REQUIRE_THROWS_AS(dc_scan(P, 3), input_error);
    }
    SECTION("streaming sink sees every lattice point exactly once, deterministically") {
        std::vector<ScanRow> rows1, rows2;
        ScanOptions o1, o2;
        o1.sink = [&](const ScanRow& r) { rows1.push_back(r); };
        o2.sink = [&](const ScanRow& r) { rows2.push_back(r); };
        dc_scan(P, 4, o1);
        dc_scan(P, 4, o2);
        REQUIRE(rows1.size() == 48);  // lattice points with 0 < |xi|^2 <= 16
        std::set<Freq> seen;
        for (const auto& r : rows1) {
            REQUIRE(normsq_of(r.xi) <= 16);
            REQUIRE(normsq_of(r.xi) >= 1);
            REQUIRE(r.shell == shell_of(normsq_of(r.xi)));
            seen.insert(r.xi);
        }
        REQUIRE(seen.size() == 48);
        for (size_t i = 0; i < rows1.size(); ++i) {
            REQUIRE(rows1[i].xi == rows2[i].xi);
            REQUIRE(rows1[i].modulus == rows2[i].modulus);
            REQUIRE(rows1[i].gamma_star == rows2[i].gamma_star);
        }
    }
    SECTION("shell minima and gamma arrays have the documented shape") {
        auto rep = dc_scan(P, 16);
        REQUIRE(rep.shell_min_modulus.size() == 17);  // index 0 unused
        REQUIRE(rep.gamma_star_by_radius.size() == 16);
        REQUIRE(rep.shell_min_modulus[1] == 9.0);
        REQUIRE(std::isinf(rep.shell_min_modulus[0]));
        for (size_t k = 1; k < rep.gamma_star_by_radius.size(); ++k)
            REQUIRE(rep.gamma_star_by_radius[k] >= rep.gamma_star_by_radius[k - 1]);
    }
}

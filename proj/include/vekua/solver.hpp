#pragma once

#include <cmath>
#include <set>
#include <string>
#include <vector>

#include "vekua/coefficient_field.hpp"
#include "vekua/discriminant.hpp"
#include "vekua/linsolve.hpp"
#include "vekua/operator_spec.hpp"

namespace vekua {

/// Pu = f in Fourier space decouples into 2x2 systems per frequency pair
/// {xi, -xi} (conjugate-linear in u, complex-linear in (u(xi), conj u(-xi))):
///   (sigma(xi) - A) u(xi)            - B conj(u(-xi)) = f(xi)
///   -conj(B) u(xi) + (conj(sigma(-xi)) - conj(A)) conj(u(-xi)) = conj(f(-xi))
/// with determinant delta_xi.

enum class PairHandling { INVERTIBLE, COMPATIBLE_MIN_NORM, INCOMPATIBLE };

inline std::string to_string(PairHandling h) {
    switch (h) {
        case PairHandling::INVERTIBLE: return "INVERTIBLE";
        case PairHandling::COMPATIBLE_MIN_NORM: return "COMPATIBLE_MIN_NORM";
        default: return "INCOMPATIBLE";
    }
}

template <class S>
struct PairSolution {
    S u_plus;   ///< u(xi)
    S u_minus;  ///< u(-xi)
    PairHandling handling = PairHandling::INVERTIBLE;
    S delta;
    /// The compatibility functional (conj sigma(-xi) - conj A) f(xi)
    /// + B conj(f(-xi)); zero is required for solvability when delta = 0.
    S defect;
    /// Floating backend only: the defect was judged incompatible but lies
    /// within 1e-6 of the compatibility tolerance band.
    bool warning = false;
};

namespace detail {

/// Realified 4x4 (or 2x2 at xi = 0) minimal-norm solve of the singular
/// pair system, in the complex-linear variables (x, y) = (u(xi), conj u(-xi)).
template <class S>
void realify_append(std::vector<std::vector<typename S::Real>>& M, std::vector<typename S::Real>& b,
                    const std::vector<S>& row, const S& rhs) {
    using R = typename S::Real;
    std::vector<R> re_row, im_row;
    for (const S& c : row) {
        re_row.push_back(real_part(c));
        re_row.push_back(R(0) - imag_part(c));
        im_row.push_back(imag_part(c));
        im_row.push_back(real_part(c));
    }
    M.push_back(std::move(re_row));
    b.push_back(real_part(rhs));
    M.push_back(std::move(im_row));
    b.push_back(imag_part(rhs));
}

template <class S>
bool judged_compatible(const S& defect, const S& fplus, const S& fminus_conj, bool realified_consistent,
                       bool& warning) {
    if constexpr (std::is_same_v<S, ExactScalar>) {
        (void)defect;
        (void)fplus;
        (void)fminus_conj;
        (void)warning;
        return realified_consistent;
    } else {
        double fscale = std::max(fplus.abs_value(), fminus_conj.abs_value());
        double mag = defect.abs_value();
        bool ok = mag <= kFloatZeroTol * (1.0 + fscale) && realified_consistent;
        warning = !ok && mag <= kCompatWarnTol * (1.0 + fscale);
        return ok;
    }
}

} // namespace detail

/// Solve the frequency-pair system at the canonical representative xi.
/// fplus = f(xi), fminus_conj = conj(f(-xi)).  Never throws on singular
/// systems: the outcome is conveyed through `handling`.
template <class S, class I>
PairSolution<S> solve_pair(const VekuaOperator<S>& P, const std::vector<I>& xi, const S& fplus,
                           const S& fminus_conj) {
    if (static_cast<int>(xi.size()) != P.dim())
        throw input_error("frequency dimension does not match operator dimension");
    bool at_origin = is_zero_vec(xi);
    if (!at_origin && !is_lex_positive(xi))
        throw input_error("solve_pair requires the canonical (lex-positive) pair representative");

    PairSolution<S> out;
    out.delta = delta(P, xi);
    out.defect = compatibility_defect(P, xi, fplus, fminus_conj);

    if (at_origin && !(fminus_conj == fplus.conj()))
        throw input_error("at xi = 0 the mirrored coefficient must equal conj(f(0))");

    S sp = symbol_eval(P.L, xi);
    S sm_conj = symbol_eval(P.L, negated(xi)).conj();

    if (!out.delta.is_zero()) {
        out.handling = PairHandling::INVERTIBLE;
        // Cramer on the pair system; the mirrored component evaluates the
        // same formula at -xi, i.e. with conjugated data.
        out.u_plus = ((sm_conj - P.A.conj()) * fplus + P.B * fminus_conj) / out.delta;
        out.u_minus = ((sp.conj() - P.A.conj()) * fminus_conj.conj() + P.B * fplus.conj()) / out.delta.conj();
        return out;
    }

    using R = typename S::Real;
    std::vector<std::vector<R>> M;
    std::vector<R> rhs;
    if (at_origin) {
        // Self-paired mode: -A x - B conj(x) = f(0) realifies to a 2x2 with
        // determinant |A|^2 - |B|^2 = delta_0.
        R ar = real_part(P.A), ai = imag_part(P.A);
        R br = real_part(P.B), bi = imag_part(P.B);
        M = {{R(0) - ar - br, ai - bi}, {R(0) - ai - bi, R(0) - ar + br}};
        rhs = {real_part(fplus), imag_part(fplus)};
    } else {
        detail::realify_append(M, rhs, std::vector<S>{sp - P.A, S{} - P.B}, fplus);
        detail::realify_append(M, rhs, std::vector<S>{S{} - P.B.conj(), sm_conj - P.A.conj()}, fminus_conj);
    }
    auto mn = min_norm_solve<R>(std::move(M), std::move(rhs));
    bool compatible = detail::judged_compatible(out.defect, fplus, fminus_conj, mn.consistent, out.warning);
    if (!compatible) {
        out.handling = PairHandling::INCOMPATIBLE;
        return out;  // zero-filled
    }
    out.handling = PairHandling::COMPATIBLE_MIN_NORM;
    if (at_origin) {
        out.u_plus = S(mn.x[0], mn.x[1]);
        out.u_minus = out.u_plus;
    } else {
        out.u_plus = S(mn.x[0], mn.x[1]);
        out.u_minus = S(mn.x[2], mn.x[3]).conj();
    }
    return out;
}

/// f = Pu for a finitely supported u: f(xi) = (sigma(xi) - A) u(xi)
/// - B conj(u(-xi)); exact in the exact backend.
template <class S, class I>
CoefficientField<S, I> apply(const VekuaOperator<S>& P, const CoefficientField<S, I>& u) {
    if (u.dim() != P.dim()) throw input_error("field dimension does not match operator dimension");
    CoefficientField<S, I> f(u.dim());
    std::set<std::vector<I>> support;
    for (const auto& [xi, c] : u) {
        support.insert(xi);
        support.insert(negated(xi));
    }
    for (const auto& xi : support) {
        S value = (symbol_eval(P.L, xi) - P.A) * u.coeff(xi) - P.B * u.coeff(negated(xi)).conj();
        f.set(xi, value);
    }
    return f;
}

struct SingularPairRecord {
    Freq xi;
    PairHandling handling = PairHandling::COMPATIBLE_MIN_NORM;
    double defect_magnitude = 0.0;
    bool warning = false;
};

template <class S>
struct SolveOutcome {
    CoefficientField<S> solution;
    std::vector<SingularPairRecord> singular_pairs;
    /// sup over the union support of |apply(P, solution) - f|.
    double residual = 0.0;

    SolveOutcome() : solution(1) {}

    bool has_incompatible() const {
        for (const auto& r : singular_pairs)
            if (r.handling == PairHandling::INCOMPATIBLE) return true;
        return false;
    }
};

/// Solve Pu = f pairwise over every canonical pair meeting the support of
/// f.  Incompatible pairs are zero-filled and reported, never fatal.
template <class S>
SolveOutcome<S> solve(const VekuaOperator<S>& P, const CoefficientField<S>& f) {
    if (f.dim() != P.dim()) throw input_error("field dimension does not match operator dimension");
    SolveOutcome<S> out;
    out.solution = CoefficientField<S>(f.dim());

    std::set<Freq> reps;
    for (const auto& [xi, c] : f) reps.insert(canonical_pair_rep(xi));
    for (const Freq& xi : reps) {
        S fplus = f.coeff(xi);
        S fminus_conj = f.coeff(negated(xi)).conj();
        PairSolution<S> ps = solve_pair(P, xi, fplus, fminus_conj);
        out.solution.set(xi, ps.u_plus);
        if (!is_zero_vec(xi)) out.solution.set(negated(xi), ps.u_minus);
        if (ps.handling != PairHandling::INVERTIBLE)
            out.singular_pairs.push_back({xi, ps.handling, ps.defect.abs_value(), ps.warning});
    }
    out.residual = sup_difference(apply(P, out.solution), f);
    return out;
}

} // namespace vekua

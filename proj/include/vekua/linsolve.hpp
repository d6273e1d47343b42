#pragma once

#include <cmath>
#include <vector>

#include "vekua/rational.hpp"
#include "vekua/util.hpp"

namespace vekua {

/// Dense real linear algebra over either the rationals (exact) or doubles
/// (tolerance-based rank decisions).  Only small systems pass through here:
/// the realified per-pair solves and the brute-force test oracles.

namespace detail {

template <class R>
struct RealFieldOps;

template <>
struct RealFieldOps<Rational> {
    static bool is_zero(const Rational& x, double /*scale*/) { return x.is_zero(); }
    static bool abs_greater(const Rational& a, const Rational& b) {
        return a.abs() > b.abs();
    }
};

template <>
struct RealFieldOps<double> {
    static bool is_zero(double x, double scale) { return std::abs(x) <= kFloatZeroTol * (1.0 + scale); }
    static bool abs_greater(double a, double b) { return std::abs(a) > std::abs(b); }
};

} // namespace detail

template <class R>
struct MinNormSolution {
    /// Whether A x = b admits any solution (exact for Rational, judged with
    /// the scale-aware tolerance for double).
    bool consistent = false;
    int rank = 0;
    /// The minimal-Euclidean-norm solution when consistent.
    std::vector<R> x;
};

/// Minimal-norm solve of a dense system A x = b by Gauss-Jordan reduction:
/// among all solutions, the unique one orthogonal to the kernel.  A is
/// m x n, row-major.
template <class R>
MinNormSolution<R> min_norm_solve(std::vector<std::vector<R>> A, std::vector<R> b) {
    using Ops = detail::RealFieldOps<R>;
    const int m = static_cast<int>(A.size());
    const int n = m == 0 ? 0 : static_cast<int>(A[0].size());
    if (static_cast<int>(b.size()) != m) throw input_error("linear system shape mismatch");
    for (const auto& row : A)
        if (static_cast<int>(row.size()) != n) throw input_error("ragged linear system matrix");

    double scale = 0.0;
    if constexpr (std::is_same_v<R, double>) {
        for (const auto& row : A)
            for (double v : row) scale = std::max(scale, std::abs(v));
        for (double v : b) scale = std::max(scale, std::abs(v));
    }

    // Gauss-Jordan with partial pivoting to reduced row-echelon form.
    std::vector<int> pivot_col;
    int row = 0;
    for (int col = 0; col < n && row < m; ++col) {
        int best = row;
        for (int r = row + 1; r < m; ++r)
            if (Ops::abs_greater(A[r][col], A[best][col])) best = r;
        if (Ops::is_zero(A[best][col], scale)) continue;
        std::swap(A[best], A[row]);
        std::swap(b[best], b[row]);
        R inv_p = A[row][col];
        for (int c = col; c < n; ++c) A[row][c] = A[row][c] / inv_p;
        b[row] = b[row] / inv_p;
        A[row][col] = R(1);
        for (int r = 0; r < m; ++r) {
            if (r == row) continue;
            R f = A[r][col];
            if (Ops::is_zero(f, scale)) continue;
            for (int c = col; c < n; ++c) A[r][c] = A[r][c] - f * A[row][c];
            b[r] = b[r] - f * b[row];
            A[r][col] = R(0);
        }
        pivot_col.push_back(col);
        ++row;
    }

    MinNormSolution<R> out;
    out.rank = row;
    for (int r = row; r < m; ++r)
        if (!Ops::is_zero(b[r], scale)) return out;  // inconsistent
    out.consistent = true;

    // Particular solution: free variables zero.
    std::vector<R> x0(n, R(0));
    for (int r = 0; r < out.rank; ++r) x0[pivot_col[r]] = b[r];

    // Kernel basis: one column per free variable.
    std::vector<int> is_pivot(n, 0);
    for (int c : pivot_col) is_pivot[c] = 1;
    std::vector<std::vector<R>> kernel;
    for (int c = 0; c < n; ++c) {
        if (is_pivot[c]) continue;
        std::vector<R> k(n, R(0));
        k[c] = R(1);
        for (int r = 0; r < out.rank; ++r) k[pivot_col[r]] = R(0) - A[r][c];
        kernel.push_back(std::move(k));
    }

    if (kernel.empty()) {
        out.x = std::move(x0);
        return out;
    }

    // Project x0 off the kernel: x* = x0 - K (K^T K)^{-1} K^T x0.  The Gram
    // matrix is positive definite because the kernel basis has full column
    // rank, so the inner solve always succeeds.
    const int k = static_cast<int>(kernel.size());
    std::vector<std::vector<R>> gram(k, std::vector<R>(k, R(0)));
    std::vector<R> rhs(k, R(0));
    for (int i = 0; i < k; ++i) {
        for (int j = 0; j < k; ++j)
            for (int c = 0; c < n; ++c) gram[i][j] = gram[i][j] + kernel[i][c] * kernel[j][c];
        for (int c = 0; c < n; ++c) rhs[i] = rhs[i] + kernel[i][c] * x0[c];
    }
    auto coeffs = min_norm_solve<R>(gram, rhs);
    for (int i = 0; i < k; ++i)
        for (int c = 0; c < n; ++c) x0[c] = x0[c] - coeffs.x[i] * kernel[i][c];
    out.x = std::move(x0);
    return out;
}

} // namespace vekua

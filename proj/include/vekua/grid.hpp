#pragma once

#include <complex>
#include <vector>

#include "vekua/solver.hpp"

namespace vekua {

/// Uniform-grid samples on the torus, row-major over node indices
/// k = (k_0, ..., k_{n-1}), k_j in 0..N_j-1, at nodes x_k = 2 pi k / N.
struct GridData {
    std::vector<int> sizes;
    std::vector<std::complex<double>> values;

    int dim() const { return static_cast<int>(sizes.size()); }
    std::size_t node_count() const {
        std::size_t n = 1;
        for (int s : sizes) n *= static_cast<std::size_t>(s);
        return n;
    }
};

namespace detail {
inline void check_grid(const GridData& g) {
    if (g.sizes.empty()) throw input_error("grid must have at least one axis");
    for (int s : g.sizes) {
        if (s < 1) throw input_error("grid sizes must be positive");
        if (s % 2 == 0)
            throw input_error("grid sizes must be odd so every mode has its negation on the grid");
    }
    if (g.values.size() != g.node_count()) throw input_error("grid sample count does not match sizes");
}
} // namespace detail

/// Forward DFT, normalized so that coefficients are the Fourier
/// coefficients of the trigonometric interpolant:
/// u(xi) = (Prod N_j)^{-1} sum_k samples(k) e^{-i xi . x_k},
/// with per-axis frequencies -(N_j-1)/2 .. (N_j-1)/2.
inline CoefficientField<FloatScalar> grid_to_coefficients(const GridData& g) {
    detail::check_grid(g);
    std::vector<std::complex<double>> data = g.values;
    const int dim = g.dim();

    double sample_scale = 0.0;
    for (const auto& v : g.values) sample_scale = std::max(sample_scale, std::abs(v));

    // Separable naive DFT, one axis at a time.
    std::size_t stride = 1;
    for (int axis = dim - 1; axis >= 0; --axis) {
        const int N = g.sizes[axis];
        std::vector<std::complex<double>> twiddle(N);
        for (int m = 0; m < N; ++m) {
            double th = -2.0 * M_PI * m / N;
            twiddle[m] = {std::cos(th), std::sin(th)};
        }
        std::vector<std::complex<double>> line(N), spec(N);
        const std::size_t block = stride * static_cast<std::size_t>(N);
        for (std::size_t base = 0; base < data.size(); base += block) {
            for (std::size_t off = 0; off < stride; ++off) {
                for (int s = 0; s < N; ++s) line[s] = data[base + off + stride * s];
                for (int t = 0; t < N; ++t) {
                    std::complex<double> acc{};
                    for (int s = 0; s < N; ++s)
                        acc += line[s] * twiddle[static_cast<std::size_t>(t) * s % N];
                    spec[t] = acc / static_cast<double>(N);
                }
                for (int t = 0; t < N; ++t) data[base + off + stride * t] = spec[t];
            }
        }
        stride = block;
    }

    CoefficientField<FloatScalar> out(dim);
    Freq xi(dim);
    for (std::size_t idx = 0; idx < data.size(); ++idx) {
        std::size_t rem = idx;
        for (int j = dim - 1; j >= 0; --j) {
            int t = static_cast<int>(rem % g.sizes[j]);
            rem /= g.sizes[j];
            xi[j] = t <= (g.sizes[j] - 1) / 2 ? t : t - g.sizes[j];
        }
        // Carrying the sample scale lets the project-wide zero rule discard
        // transform noise.
        out.set(xi, FloatScalar::with_scale(data[idx], sample_scale));
    }
    return out;
}

/// Evaluate a coefficient field on grid nodes: u(x_k) = sum u(xi) e^{i xi . x_k}.
/// Frequencies must be representable on the grid.
inline GridData coefficients_to_grid(const CoefficientField<FloatScalar>& u, const std::vector<int>& sizes) {
    GridData g;
    g.sizes = sizes;
    g.values.assign(g.node_count(), {0.0, 0.0});
    detail::check_grid(g);
    if (u.dim() != g.dim()) throw input_error("field dimension does not match grid dimension");
    for (const auto& [xi, c] : u)
        for (std::size_t j = 0; j < xi.size(); ++j)
            if (2 * std::abs(xi[j]) + 1 > sizes[j])
                throw input_error("coefficient frequency " + freq_to_string(xi) + " exceeds the grid band");

    std::vector<int> k(g.dim(), 0);
    for (std::size_t idx = 0; idx < g.values.size(); ++idx) {
        std::size_t rem = idx;
        for (int j = g.dim() - 1; j >= 0; --j) {
            k[j] = static_cast<int>(rem % sizes[j]);
            rem /= sizes[j];
        }
        std::complex<double> acc{};
        for (const auto& [xi, c] : u) {
            double phase = 0.0;
            for (int j = 0; j < g.dim(); ++j)
                phase += 2.0 * M_PI * static_cast<double>(xi[j]) * k[j] / sizes[j];
            acc += c.value() * std::complex<double>(std::cos(phase), std::sin(phase));
        }
        g.values[idx] = acc;
    }
    return g;
}

struct GridSolveResult {
    GridData solution;
    SolveOutcome<FloatScalar> outcome;
};

/// Grid-sampled right side -> grid-sampled solution through the coefficient
/// solver; the residual in the outcome is measured in coefficient space.
inline GridSolveResult solve_grid(const VekuaOperator<FloatScalar>& P, const GridData& f) {
    detail::check_grid(f);
    if (f.dim() != P.dim()) throw input_error("grid dimension does not match operator dimension");
    GridSolveResult r;
    auto fhat = grid_to_coefficients(f);
    r.outcome = solve(P, fhat);
    r.solution = coefficients_to_grid(r.outcome.solution, f.sizes);
    return r;
}

} // namespace vekua

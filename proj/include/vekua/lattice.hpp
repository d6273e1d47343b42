#pragma once

#include <cmath>
#include <cstdint>
#include <functional>

#include "vekua/multi_index.hpp"
#include "vekua/util.hpp"

namespace vekua {

/// floor(sqrt(n)) for machine integers, exact.
inline std::int64_t floor_sqrt64(std::int64_t n) {
    if (n < 0) throw input_error("floor_sqrt64 of a negative number");
    auto s = static_cast<std::int64_t>(std::sqrt(static_cast<double>(n)));
    while (s > 0 && s * s > n) --s;
    while ((s + 1) * (s + 1) <= n) ++s;
    return s;
}

/// Deterministic enumeration of the lex-positive half of the lattice ball
/// 0 < |xi|^2 <= max_normsq.  Every frequency pair {xi, -xi} is visited
/// exactly once, through its canonical (lex-positive) representative; the
/// origin is not visited.  Order: leading-zero prefix length ascending,
/// then coordinates ascending.
template <class F>
void for_canonical_ball(int dim, std::int64_t max_normsq, F&& visit) {
    if (dim < 1) throw input_error("lattice dimension must be >= 1");
    if (max_normsq < 0) throw input_error("lattice radius must be non-negative");
    Freq xi(dim, 0);

    // Fill coordinates j..dim-1 freely within the remaining norm budget.
    auto tail = [&](auto&& self, int j, std::int64_t budget) -> void {
        if (j == dim) {
            visit(static_cast<const Freq&>(xi));
            return;
        }
        std::int64_t r = floor_sqrt64(budget);
        for (std::int64_t v = -r; v <= r; ++v) {
            xi[j] = v;
            self(self, j + 1, budget - v * v);
        }
        xi[j] = 0;
    };

    for (int lead = 0; lead < dim; ++lead) {
        // Coordinates before `lead` are zero; coordinate `lead` is >= 1.
        std::int64_t v = 1;
        for (; v * v <= max_normsq; ++v) {
            xi[lead] = v;
            tail(tail, lead + 1, max_normsq - v * v);
        }
        xi[lead] = 0;
    }
}

/// Shell index of a nonzero frequency: the smallest integer radius k with
/// |xi| <= k, i.e. k = ceil(|xi|).
inline int shell_of(std::int64_t normsq) {
    std::int64_t s = floor_sqrt64(normsq);
    return static_cast<int>(s * s == normsq ? s : s + 1);
}

} // namespace vekua

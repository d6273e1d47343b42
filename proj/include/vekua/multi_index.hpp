#pragma once

#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "vekua/rational.hpp"
#include "vekua/util.hpp"

namespace vekua {

/// Differentiation multi-index alpha on the n-torus.
struct MultiIndex {
    std::vector<int> components;

    MultiIndex() = default;
    explicit MultiIndex(std::vector<int> c) : components(std::move(c)) {
        for (int v : components)
            if (v < 0) throw input_error("multi-index components must be non-negative");
    }

    int dim() const { return static_cast<int>(components.size()); }

    /// |alpha| = sum of components.
    int order() const { return std::accumulate(components.begin(), components.end(), 0); }

    bool operator==(const MultiIndex& o) const { return components == o.components; }
    bool operator<(const MultiIndex& o) const { return components < o.components; }

    std::string to_string() const {
        std::string s = "(";
        for (size_t j = 0; j < components.size(); ++j)
            s += (j ? "," : "") + std::to_string(components[j]);
        return s + ")";
    }
};

/// Frequency vectors: int64 lattice points for scans within double range,
/// big-integer points for the deep obstruction constructions.
using Freq = std::vector<std::int64_t>;
using FreqBig = std::vector<BigInt>;

template <class I>
std::vector<I> negated(const std::vector<I>& xi) {
    std::vector<I> out(xi.size());
    for (size_t j = 0; j < xi.size(); ++j) out[j] = -xi[j];
    return out;
}

/// First nonzero coordinate positive (zero vector is not lex-positive).
template <class I>
bool is_lex_positive(const std::vector<I>& xi) {
    for (const I& v : xi) {
        if (v > 0) return true;
        if (v < 0) return false;
    }
    return false;
}

/// Canonical representative of the pair {xi, -xi}: the lex-positive one;
/// the zero vector is its own representative.
template <class I>
std::vector<I> canonical_pair_rep(const std::vector<I>& xi) {
    if (is_lex_positive(xi)) return xi;
    return negated(xi);
}

template <class I>
bool is_zero_vec(const std::vector<I>& xi) {
    for (const I& v : xi)
        if (v != 0) return false;
    return true;
}

template <class I>
I normsq_of(const std::vector<I>& xi) {
    I s = 0;
    for (const I& v : xi) s += v * v;
    return s;
}

/// x^e for integer-like x, e >= 0.
template <class I>
I int_pow(I x, int e) {
    I acc = 1, base = x;
    while (e > 0) {
        if (e & 1) acc *= base;
        base *= base;
        e >>= 1;
    }
    return acc;
}

/// xi^alpha = prod xi_j^{alpha_j}.
template <class I>
I monomial(const std::vector<I>& xi, const MultiIndex& alpha) {
    I acc = 1;
    for (size_t j = 0; j < xi.size(); ++j)
        if (alpha.components[j] != 0) acc *= int_pow<I>(xi[j], alpha.components[j]);
    return acc;
}

template <class I>
std::string freq_to_string(const std::vector<I>& xi) {
    std::string s = "(";
    for (size_t j = 0; j < xi.size(); ++j) {
        if (j) s += ",";
        if constexpr (std::is_same_v<I, BigInt>) s += xi[j].str();
        else s += std::to_string(xi[j]);
    }
    return s + ")";
}

} // namespace vekua

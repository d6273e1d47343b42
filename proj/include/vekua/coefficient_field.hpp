#pragma once

#include <cmath>
#include <map>
#include <vector>

#include "vekua/complex_scalar.hpp"
#include "vekua/multi_index.hpp"
#include "vekua/util.hpp"

namespace vekua {

/// Finitely supported map Z^n -> C holding Fourier coefficients; absent
/// keys are zero, and zeros are never stored.
template <class S, class I = std::int64_t>
class CoefficientField {
public:
    using Key = std::vector<I>;
    using Map = std::map<Key, S>;

    explicit CoefficientField(int dim) : dim_(dim) {
        if (dim < 1) throw input_error("coefficient field dimension must be >= 1");
    }

    int dim() const { return dim_; }
    bool empty() const { return coeffs_.empty(); }
    std::size_t size() const { return coeffs_.size(); }

    /// Coefficient at xi (zero when absent).
    S coeff(const Key& xi) const {
        check_dim(xi);
        auto it = coeffs_.find(xi);
        return it == coeffs_.end() ? S{} : it->second;
    }

    /// Set the coefficient at xi; storing an exact zero erases the key.
    void set(const Key& xi, const S& value) {
        check_dim(xi);
        if (value.is_zero())
            coeffs_.erase(xi);
        else
            coeffs_[xi] = value;
    }

    const Map& coefficients() const { return coeffs_; }
    typename Map::const_iterator begin() const { return coeffs_.begin(); }
    typename Map::const_iterator end() const { return coeffs_.end(); }

    /// Largest |xi|^2 over the support (0 for the empty field).
    I max_normsq() const {
        I best{};
        for (const auto& [xi, c] : coeffs_) {
            I n = normsq_of(xi);
            if (n > best) best = n;
        }
        return best;
    }

    /// Whether the field could be the transform of a real-valued function:
    /// conj(coeff(xi)) = coeff(-xi) across the support.
    bool is_conjugate_symmetric() const {
        for (const auto& [xi, c] : coeffs_)
            if (!(coeff(negated(xi)) == c.conj())) return false;
        return true;
    }

    /// Sup of |coeff| over the support, as a double.
    double sup_modulus() const {
        double best = 0.0;
        for (const auto& [xi, c] : coeffs_) best = std::max(best, c.abs_value());
        return best;
    }

    friend bool operator==(const CoefficientField& a, const CoefficientField& b) {
        return a.dim_ == b.dim_ && a.coeffs_ == b.coeffs_;
    }

private:
    void check_dim(const Key& xi) const {
        if (static_cast<int>(xi.size()) != dim_)
            throw input_error("frequency dimension does not match coefficient field dimension");
    }

    int dim_;
    Map coeffs_;
};

/// Sup over the union support of |a - b|, as a double.
template <class S, class I>
double sup_difference(const CoefficientField<S, I>& a, const CoefficientField<S, I>& b) {
    double best = 0.0;
    for (const auto& [xi, c] : a) best = std::max(best, (c - b.coeff(xi)).abs_value());
    for (const auto& [xi, c] : b) best = std::max(best, (a.coeff(xi) - c).abs_value());
    return best;
}

} // namespace vekua

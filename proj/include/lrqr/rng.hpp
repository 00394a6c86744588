#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <span>
#include <vector>

#include "lrqr/errors.hpp"

namespace lrqr {

// Samplers built directly on mt19937_64 raw output. <random> distributions
// are implementation-defined, so generated datasets would not be reproducible
// across standard libraries; these are.

inline double uniform01(std::mt19937_64& g) {
    return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

inline double uniform(std::mt19937_64& g, double lo, double hi) {
    return lo + (hi - lo) * uniform01(g);
}

// Box-Muller; draws two uniforms per normal.
inline double normal(std::mt19937_64& g) {
    double u1 = uniform01(g);
    double u2 = uniform01(g);
    while (u1 <= 0.0) u1 = uniform01(g);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

// Inverse-CDF draw from a finite distribution; probs must sum to ~1.
inline std::size_t categorical(std::mt19937_64& g, std::span<const double> probs) {
    const double u = uniform01(g);
    double acc = 0.0;
    for (std::size_t k = 0; k < probs.size(); ++k) {
        acc += probs[k];
        if (u < acc) return k;
    }
    return probs.size() - 1;
}

inline std::uint64_t bounded(std::mt19937_64& g, std::uint64_t n) {
    return g() % n; // bias is negligible for n << 2^64
}

template <typename T>
void shuffle(std::vector<T>& v, std::mt19937_64& g) {
    for (std::size_t i = v.size(); i > 1; --i) {
        std::size_t j = static_cast<std::size_t>(bounded(g, i));
        std::swap(v[i - 1], v[j]);
    }
}

inline std::vector<std::size_t> shuffled_indices(std::size_t n, std::mt19937_64& g) {
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    shuffle(idx, g);
    return idx;
}

// Evenly sized fold assignment of n items, folds cycling over a shuffled order.
inline std::vector<int> fold_assignment(std::size_t n, int folds, std::mt19937_64& g) {
    if (folds < 2) throw std::invalid_argument("fold_assignment: need at least 2 folds");
    auto idx = shuffled_indices(n, g);
    std::vector<int> fold(n);
    for (std::size_t k = 0; k < n; ++k) fold[idx[k]] = static_cast<int>(k % folds);
    return fold;
}

} // namespace lrqr

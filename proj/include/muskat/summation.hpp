#pragma once

#include <cmath>
#include <cstddef>
#include <span>

namespace muskat {

/// Neumaier-compensated scalar accumulator.
struct CompensatedSum {
    double sum = 0.0;
    double comp = 0.0;

    inline void add(double v) {
        const double t = sum + v;
        if (std::abs(sum) >= std::abs(v))
            comp += (sum - t) + v;
        else
            comp += (v - t) + sum;
        sum = t;
    }

    inline double total() const { return sum + comp; }
};

/// K independent Neumaier lanes; term m goes to lane m % K. The lane count
/// and the final combination tree are fixed, so results are reproducible
/// regardless of how the caller batches the terms.
template <int K>
struct CompensatedLanes {
    double s[K] = {};
    double c[K] = {};

    inline void add(int lane, double v) {
        const double t = s[lane] + v;
        if (std::abs(s[lane]) >= std::abs(v))
            c[lane] += (s[lane] - t) + v;
        else
            c[lane] += (v - t) + s[lane];
        s[lane] = t;
    }

    /// Adds one value per lane; straight-line so the compiler can SLP-vectorize.
    inline void add_block(const double* v) {
        for (int l = 0; l < K; ++l) add(l, v[l]);
    }

    double total() const {
        double acc[K];
        for (int l = 0; l < K; ++l) acc[l] = s[l] + c[l];
        int n = K;
        while (n > 1) {
            for (int l = 0; l < n / 2; ++l) acc[l] = acc[2 * l] + acc[2 * l + 1];
            n /= 2;
        }
        return acc[0];
    }
};

/// Balanced binary-tree sum. Requires len to be a power of two. Exact for
/// arrays of identical values (every partial sum is a power-of-two multiple),
/// which keeps constant fields and their means bit-exact.
inline double tree_sum_pow2(const double* v, std::ptrdiff_t len) {
    if (len == 1) return v[0];
    const std::ptrdiff_t half = len / 2;
    return tree_sum_pow2(v, half) + tree_sum_pow2(v + half, half);
}

inline double compensated_total(std::span<const double> v) {
    CompensatedSum acc;
    for (double x : v) acc.add(x);
    return acc.total();
}

}  // namespace muskat

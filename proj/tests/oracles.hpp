#pragma once

// Test-side reference implementations, deliberately independent of the
// production evaluation path: interpolation by direct summation of naively
// computed (O(N^2)) Fourier coefficients, and plain long-double
// accumulation of the alpha sums in ascending order.

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "muskat/grid.hpp"
#include "muskat/nonlocal.hpp"

namespace oracle {

class NaiveInterpolant {
  public:
    explicit NaiveInterpolant(const muskat::GridFunction& g)
        : half_length_(g.grid.half_length), n_(g.grid.node_count) {
        // Direct DFT, no FFT.
        coef_.resize(static_cast<std::size_t>(n_));
        for (int k = 0; k < n_; ++k) {
            std::complex<long double> acc = 0.0L;
            for (int j = 0; j < n_; ++j) {
                const long double phase = -2.0L * std::numbers::pi_v<long double> * k * j / n_;
                acc += static_cast<long double>(g.values[j]) *
                       std::complex<long double>(std::cos(phase), std::sin(phase));
            }
            coef_[static_cast<std::size_t>(k)] = acc / static_cast<long double>(n_);
        }
    }

    double operator()(double x) const {
        const long double px = x + half_length_;
        const long double base = std::numbers::pi_v<long double> / half_length_;
        long double acc = coef_[0].real();
        for (int i = 1; i < n_; ++i) {
            const int k = i <= n_ / 2 ? i : i - n_;
            const long double kap = base * k;
            const auto c = coef_[static_cast<std::size_t>(i)];
            if (k == n_ / 2)
                acc += c.real() * std::cos(kap * px);
            else
                acc += c.real() * std::cos(kap * px) - c.imag() * std::sin(kap * px);
        }
        return static_cast<double>(acc);
    }

    double derivative(double x) const {
        const long double px = x + half_length_;
        const long double base = std::numbers::pi_v<long double> / half_length_;
        long double acc = 0.0L;
        for (int i = 1; i < n_; ++i) {
            const int k = i <= n_ / 2 ? i : i - n_;
            if (k == n_ / 2) continue;  // odd-order derivative drops Nyquist
            const long double kap = base * k;
            const auto c = coef_[static_cast<std::size_t>(i)];
            acc += kap * (-c.real() * std::sin(kap * px) - c.imag() * std::cos(kap * px));
        }
        return static_cast<double>(acc);
    }

  private:
    double half_length_;
    int n_;
    std::vector<std::complex<long double>> coef_;
};

struct QuadratureSpec {
    double h_alpha;
    long m_count;
    bool tail;
    static QuadratureSpec from(const muskat::QuadratureConfig& q, const muskat::Grid& g) {
        return {q.spacing_for(g), q.pair_count(g), q.tail_correction};
    }
    double radius() const { return m_count * h_alpha; }
};

/// Grid mean by plain long-double summation.
inline double naive_mean(const muskat::GridFunction& g) {
    long double acc = 0.0L;
    for (int j = 0; j < g.size(); ++j) acc += g.values[j];
    return static_cast<double>(acc / g.size());
}

inline double rhs_at(const muskat::GridFunction& f, const NaiveInterpolant& fi, double fp_x,
                     int node, const QuadratureSpec& q) {
    const double x = f.grid.node(node);
    const double fx = f.values[node];
    long double acc = 0.0L;
    for (long m = 0; m < q.m_count; ++m) {
        const double a = (m + 0.5) * q.h_alpha;
        const double dm = fx - fi(x - a);
        const double dp = fx - fi(x + a);
        const double tm = (fp_x * a - dm) / (dm * dm + a * a);
        const double tp = (-fp_x * a - dp) / (dp * dp + a * a);
        acc += static_cast<long double>(tm + tp) * q.h_alpha;
    }
    double out = static_cast<double>(acc);
    if (q.tail) out -= 2.0 * (fx - naive_mean(f)) / q.radius();
    return out;
}

inline double lf_at(const muskat::GridFunction& f, const NaiveInterpolant& fi,
                    const muskat::GridFunction& g, const NaiveInterpolant& gi, int node,
                    const QuadratureSpec& q) {
    const double x = f.grid.node(node);
    const double fx = f.values[node];
    const double gx = g.values[node];
    long double acc = 0.0L;
    for (long m = 0; m < q.m_count; ++m) {
        const double a = (m + 0.5) * q.h_alpha;
        const double dm = fx - fi(x - a);
        const double dp = fx - fi(x + a);
        const double tm = (gx - gi(x - a)) / (dm * dm + a * a);
        const double tp = (gx - gi(x + a)) / (dp * dp + a * a);
        acc += static_cast<long double>(tm + tp) * q.h_alpha;
    }
    double out = static_cast<double>(acc);
    if (q.tail) out += 2.0 * (gx - naive_mean(g)) / q.radius();
    return out;
}

inline double df_at(const muskat::GridFunction& f, const NaiveInterpolant& fi,
                    const muskat::GridFunction& g, const NaiveInterpolant& gi, int node,
                    const QuadratureSpec& q) {
    const double x = f.grid.node(node);
    const double fx = f.values[node];
    const double gx = g.values[node];
    long double acc = 0.0L;
    for (long m = 0; m < q.m_count; ++m) {
        const double a = (m + 0.5) * q.h_alpha;
        const double dm = fx - fi(x - a);
        const double dp = fx - fi(x + a);
        const double gm = gx - gi(x - a);
        const double gp = gx - gi(x + a);
        acc += static_cast<long double>(gm * gm / (dm * dm + a * a) +
                                        gp * gp / (dp * dp + a * a)) *
               q.h_alpha;
    }
    double out = static_cast<double>(acc);
    if (q.tail) {
        long double msq = 0.0L;
        for (int j = 0; j < g.size(); ++j) msq += g.values[j] * g.values[j];
        const double mean = naive_mean(g);
        const double mean_sq = static_cast<double>(msq / g.size());
        out += 2.0 * (gx * gx - 2.0 * gx * mean + mean_sq) / q.radius();
    }
    return out;
}

inline double dp_at(const muskat::GridFunction& f, const NaiveInterpolant& fi,
                    const muskat::GridFunction& g, const NaiveInterpolant& gi, double p, int node,
                    const QuadratureSpec& q) {
    const double x = f.grid.node(node);
    const double fx = f.values[node];
    const double gx = g.values[node];
    const double fpx = fi.derivative(x);
    const double gpx = gi.derivative(x);
    const double model_coef = 2.0 * std::pow(std::abs(gpx), p) / (1.0 + fpx * fpx);
    long double acc = 0.0L;
    for (long m = 0; m < q.m_count; ++m) {
        const double a = (m + 0.5) * q.h_alpha;
        const double dm = fx - fi(x - a);
        const double dp_ = fx - fi(x + a);
        acc += static_cast<long double>(std::pow(std::abs(gx - gi(x - a)), p) / (dm * dm + a * a) +
                                        std::pow(std::abs(gx - gi(x + a)), p) /
                                            (dp_ * dp_ + a * a) -
                                        model_coef * std::pow(a, p - 2.0)) *
               q.h_alpha;
    }
    double out = static_cast<double>(acc) +
                 model_coef * std::pow(q.radius(), p - 1.0) / (p - 1.0);
    if (q.tail) {
        // Period mean of |g(x) - g(x - a)|^p on the staggered half-grid lags.
        const double h = g.grid.spacing();
        long double mp = 0.0L;
        for (int i = 0; i < g.size(); ++i)
            mp += std::pow(std::abs(gx - gi(g.grid.node(i) - 0.5 * h)), p);
        out += 2.0 * static_cast<double>(mp / g.size()) / q.radius();
    }
    return out;
}

inline double velocity_at(const muskat::GridFunction& f, const NaiveInterpolant& fi, int node,
                          const QuadratureSpec& q) {
    const double x = f.grid.node(node);
    const double fx = f.values[node];
    long double acc = 0.0L;
    for (long m = 0; m < q.m_count; ++m) {
        const double a = (m + 0.5) * q.h_alpha;
        const double dm = fx - fi(x - a);
        const double dp = fx - fi(x + a);
        acc += static_cast<long double>(-a / (dm * dm + a * a) + a / (dp * dp + a * a)) * q.h_alpha;
    }
    return static_cast<double>(acc);
}

}  // namespace oracle

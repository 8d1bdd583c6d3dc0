#include "muskat/bounds.hpp"

#include <cmath>
#include <stdexcept>

namespace muskat {

double Modulus::operator()(double a) const {
    if (a <= 0.0) return 0.0;
    switch (family) {
        case Family::power:
            return K * std::pow(a, beta);
        case Family::capped_power:
            return std::min(K * std::pow(a, beta), cap);
        case Family::table: {
            if (table_d.empty()) return 0.0;
            double prev_d = 0.0, prev_v = 0.0;
            for (std::size_t i = 0; i < table_d.size(); ++i) {
                if (a <= table_d[i])
                    return prev_v + (table_v[i] - prev_v) * (a - prev_d) / (table_d[i] - prev_d);
                prev_d = table_d[i];
                prev_v = table_v[i];
            }
            return table_v.back();
        }
    }
    return 0.0;
}

std::string Modulus::describe() const {
    switch (family) {
        case Family::power:
            return "power(K=" + std::to_string(K) + ", beta=" + std::to_string(beta) + ")";
        case Family::capped_power:
            return "capped-power(K=" + std::to_string(K) + ", beta=" + std::to_string(beta) +
                   ", cap=" + std::to_string(cap) + ")";
        case Family::table:
            return "table(" + std::to_string(table_d.size()) + " points)";
    }
    return "?";
}

void Modulus::validate() const {
    if (family != Family::table) {
        if (!(K > 0.0)) throw std::invalid_argument("modulus K must be positive");
        if (!(beta > 0.0 && beta <= 1.0))
            throw std::invalid_argument("modulus beta must lie in (0, 1]");
        if (family == Family::capped_power && !(cap > 0.0))
            throw std::invalid_argument("modulus cap must be positive");
    } else {
        if (table_d.size() != table_v.size() || table_d.empty())
            throw std::invalid_argument("modulus table must have matching nonempty d/v");
        double prev_d = 0.0, prev_v = 0.0;
        for (std::size_t i = 0; i < table_d.size(); ++i) {
            if (!(table_d[i] > prev_d) || table_v[i] < prev_v)
                throw std::invalid_argument("modulus table must be increasing in d, non-decreasing in v");
            prev_d = table_d[i];
            prev_v = table_v[i];
        }
    }
}

double cubic_lower_bound(double m, double B) {
    if (!(B > 0.0)) throw std::invalid_argument("cubic_lower_bound requires B > 0");
    return m * m * m / (24.0 * B * (1.0 + B * B));
}

double dp_lower_bound(double m, double B, double p) {
    if (!(B > 0.0)) throw std::invalid_argument("dp_lower_bound requires B > 0");
    if (!(p > 1.0 && p < 2.0))
        throw std::invalid_argument("dp_lower_bound requires p in (1,2)");
    return std::pow(m, p + 1.0) / (96.0 * B * (1.0 + B * B));
}

double lp_lower_bound(double m, double B, double p, double Mp, LpBoundVariant variant) {
    if (!(Mp > 0.0)) throw std::invalid_argument("lp_lower_bound requires Mp > 0");
    if (variant == LpBoundVariant::D)
        return std::pow(m, 2.0 + p) / (std::pow(8.0, p) * std::pow(Mp, p) * (1.0 + B * B));
    if (!(p > 1.0 && p < 2.0))
        throw std::invalid_argument("lp_lower_bound Dp variant requires p in (1,2)");
    return std::pow(m, 2.0 * p) / (128.0 * std::pow(Mp, p) * (1.0 + B * B));
}

double fppp_lower_bound(double m3, double Minf, double B) {
    if (!(Minf > 0.0)) throw std::invalid_argument("fppp_lower_bound requires Minf > 0");
    return m3 * m3 * m3 / (24.0 * Minf * (1.0 + B * B));
}

namespace {

/// int_{a0}^{a1} (c0 + c1 a) / a^3 da, exact.
double linear_segment_tail(double c0, double c1, double a0, double a1) {
    const double inv0 = 1.0 / a0, inv1 = 1.0 / a1;
    return 0.5 * c0 * (inv0 * inv0 - inv1 * inv1) + c1 * (inv0 - inv1);
}

}  // namespace

double tail_integral(const Modulus& rho, double r) {
    if (!(r > 0.0)) throw std::invalid_argument("tail_integral requires r > 0");
    const double lo = 0.5 * r;
    switch (rho.family) {
        case Modulus::Family::power:
            // int K a^{beta-3} da = K (r/2)^{beta-2} / (2-beta)
            return rho.K * std::pow(lo, rho.beta - 2.0) / (2.0 - rho.beta);
        case Modulus::Family::capped_power: {
            if (!std::isfinite(rho.cap))
                return rho.K * std::pow(lo, rho.beta - 2.0) / (2.0 - rho.beta);
            const double cross = std::pow(rho.cap / rho.K, 1.0 / rho.beta);
            if (lo >= cross) return 0.5 * rho.cap / (lo * lo);
            const double power_part = rho.K / (2.0 - rho.beta) *
                                      (std::pow(lo, rho.beta - 2.0) - std::pow(cross, rho.beta - 2.0));
            return power_part + 0.5 * rho.cap / (cross * cross);
        }
        case Modulus::Family::table: {
            // Piecewise-linear segments integrated exactly, constant tail
            // rho(d_max) beyond the last knot.
            double acc = 0.0;
            double prev_d = 0.0, prev_v = 0.0;
            for (std::size_t i = 0; i < rho.table_d.size(); ++i) {
                const double d1 = rho.table_d[i], v1 = rho.table_v[i];
                const double a0 = std::max(lo, prev_d);
                if (a0 < d1) {
                    const double c1 = (v1 - prev_v) / (d1 - prev_d);
                    acc += linear_segment_tail(prev_v - c1 * prev_d, c1, a0, d1);
                }
                prev_d = d1;
                prev_v = v1;
            }
            const double a0 = std::max(lo, prev_d);
            return acc + 0.5 * prev_v / (a0 * a0);
        }
    }
    return 0.0;
}

double solve_r(double y, const Modulus& rho, double B) {
    (void)B;
    if (!(y > 0.0)) throw std::invalid_argument("solve_r requires y > 0");
    rho.validate();
    const double target = y / 6.0;
    const auto phi = [&](double r) { return r * tail_integral(rho, r); };

    double lo = 1e-12;
    if (!(phi(lo) > target)) {
        // rho behaves linearly near the origin (or vanishes): no root from
        // the left, matching the non-Lipschitz precondition.
        throw std::domain_error("solve_r: no sign change in bracket for modulus " + rho.describe());
    }
    double hi = 2.0 * lo;
    int doublings = 0;
    while (phi(hi) > target) {
        lo = hi;
        hi *= 2.0;
        if (++doublings > 200)
            throw std::domain_error("solve_r: no sign change in bracket for modulus " + rho.describe());
    }
    // phi(lo) >= target >= phi(hi); bisect to relative width 1e-12.
    for (int it = 0; it < 200 && (hi - lo) > 1e-12 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (phi(mid) > target)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

double L_B(double y, const Modulus& rho, double B) {
    if (y <= 0.0) return 0.0;
    return y * y / ((1.0 + B * B) * solve_r(y, rho, B));
}

std::pair<double, double> remainder_envelope(double alpha, double Dval, double p) {
    if (alpha == 0.0) throw std::invalid_argument("remainder_envelope requires alpha != 0");
    if (Dval < 0.0) throw std::invalid_argument("remainder_envelope requires Dval >= 0");
    const double a = std::abs(alpha);
    const double cp = std::pow((p - 1.0) / (p + 1.0), (p - 1.0) / p);
    const double cp2 = p / (2.0 * p + 1.0);
    const double dpow = std::pow(Dval, 1.0 / p);
    return {cp * std::pow(a, 1.0 / p) * dpow, cp2 * std::pow(a, (p + 1.0) / p) * dpow};
}

}  // namespace muskat

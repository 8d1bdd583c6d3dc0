#pragma once

#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace muskat {

/// Bounded non-decreasing modulus of continuity with rho(0) = 0.
/// power:        rho(a) = K a^beta           (cap = inf)
/// capped-power: rho(a) = min(K a^beta, cap)
/// table:        piecewise-linear through (d_i, v_i), constant beyond d_max.
struct Modulus {
    enum class Family { power, capped_power, table };
    Family family = Family::capped_power;
    double K = 1.0;
    double beta = 0.5;
    double cap = std::numeric_limits<double>::infinity();
    std::vector<double> table_d;
    std::vector<double> table_v;

    double operator()(double a) const;
    std::string describe() const;
    void validate() const;
};

/// Slope bound B, exponent p, and the curvature norms entering the lemma
/// bounds.
struct BoundParams {
    double B = 0.0;
    double p = 2.0;
    double Mp = 0.0;
    double Minf = 0.0;
};

/// m^3 / (24 B (1+B^2)) — the pointwise cubic lower bound on D_f[f''].
double cubic_lower_bound(double m, double B);

/// m^{p+1} / (96 B (1+B^2)) for p in (1,2) — lower bound on D_f^p[f''].
double dp_lower_bound(double m, double B, double p);

enum class LpBoundVariant { D, Dp };

/// Variant D:  m^{2+p} / (8^p Mp^p (1+B^2)).
/// Variant Dp: m^{2p} / (128 Mp^p (1+B^2)), p in (1,2).
double lp_lower_bound(double m, double B, double p, double Mp, LpBoundVariant variant);

/// m3^3 / (24 Minf (1+B^2)) — lower bound on D_f[f'''].
double fppp_lower_bound(double m3, double Minf, double B);

/// int_{r/2}^inf rho(a) / a^3 da, closed form per family.
double tail_integral(const Modulus& rho, double r);

/// Smallest r > 0 with r * tail_integral(rho, r) = y / 6, by bracketing and
/// bisection to relative tolerance 1e-12.
double solve_r(double y, const Modulus& rho, double B);

/// L_B(y) = y^2 / ((1+B^2) r(y)); L_B(0) = 0.
double L_B(double y, const Modulus& rho, double B);

/// Envelope constants for the finite-difference remainders, from the
/// Cauchy-Schwarz (p = 2) and Hoelder (p in (1,2)) chains:
///   |R1| <= C_p |a|^{1/p} Dval^{1/p},  C_p = ((p-1)/(p+1))^{(p-1)/p}
///   |R2| <= C'_p |a|^{(p+1)/p} Dval^{1/p},  C'_p = p/(2p+1)
/// At p = 2 these are 1/sqrt(3) and 2/5, with Dval = D[f''](x).
std::pair<double, double> remainder_envelope(double alpha, double Dval, double p);

}  // namespace muskat

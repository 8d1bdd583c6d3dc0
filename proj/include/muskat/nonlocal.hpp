#pragma once

#include "muskat/grid.hpp"

namespace muskat {

/// Staggered symmetric-pair quadrature for the principal-value alpha
/// integrals. Nodes sit at +-(m + 1/2) h_alpha for 0 <= m < M, so alpha = 0
/// is never touched and each +- pair is summed atomically, which realizes
/// the principal value. Truncation at A = M h_alpha is supplemented (by
/// default) with the analytic leading-order tail of the periodized
/// integrand, which for the kernel-weighted operators is the period mean of
/// the paired numerator times int_A^inf da/a^2 = 1/A.
struct QuadratureConfig {
    double alpha_spacing = 0.0;      // 0 = use the grid spacing
    double truncation_radius = 0.0;  // 0 = 8 L
    bool tail_correction = true;
    bool reverse_enumeration = false;  // accumulate pairs in reverse order (order-invariance probe)

    double spacing_for(const Grid& g) const;
    double radius_for(const Grid& g) const;
    long pair_count(const Grid& g) const;        // M
    double effective_radius(const Grid& g) const;  // M h_alpha
    bool aligned(const Grid& g) const;           // alpha nodes on the half-shifted grid
    void validate(const Grid& g) const;
};

/// The five terms on the right side of the curvature equation; T5 is the
/// derivative of the transport velocity.
struct TTerms {
    GridFunction t1, t2, t3, t4, t5;
};

/// First- and second-order finite-difference remainders of f'' at one point.
struct Remainders {
    double r1 = 0.0;  // D_a f'(x) - f''(x)
    double r2 = 0.0;  // D_a f(x) - f'(x) + (a/2) f''(x)
};

/// dt f = PV int (f'(x) a - d_a f) / ((d_a f)^2 + a^2) da.
GridFunction muskat_rhs(const GridFunction& f, const QuadratureConfig& q);

/// v = -PV int a / ((d_a f)^2 + a^2) da.
GridFunction velocity(const GridFunction& f, const QuadratureConfig& q);

/// L_f[g] = PV int d_a g / ((d_a f)^2 + a^2) da.
GridFunction apply_Lf(const GridFunction& f, const GridFunction& g, const QuadratureConfig& q);

/// D_f[g] = int (d_a g)^2 / ((d_a f)^2 + a^2) da  (pointwise >= 0).
GridFunction apply_Df(const GridFunction& f, const GridFunction& g, const QuadratureConfig& q);

/// D_f^p[g] = int |d_a g|^p / ((d_a f)^2 + a^2) da for p in (1,2).
GridFunction apply_Dp(const GridFunction& f, const GridFunction& g, double p,
                      const QuadratureConfig& q);

/// dt f' = -v dx f' - L_f[f'] + 2 int (d_a f - a f') (d_a f) (d_a f') / den^2 da.
GridFunction fprime_rhs(const GridFunction& f, const QuadratureConfig& q);

TTerms t_terms(const GridFunction& f, const QuadratureConfig& q);

/// Finite-difference remainders at grid node `node` with offset alpha != 0;
/// off-grid values come from the trigonometric interpolant.
Remainders remainders(const GridFunction& f, int node, double alpha);

}  // namespace muskat

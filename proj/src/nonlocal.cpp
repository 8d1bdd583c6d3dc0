#include "muskat/nonlocal.hpp"

#include <array>
#include <cmath>
#include <vector>

#include "muskat/spectral.hpp"
#include "muskat/summation.hpp"
#include "muskat/threading.hpp"

namespace muskat {

double QuadratureConfig::spacing_for(const Grid& g) const {
    return alpha_spacing > 0.0 ? alpha_spacing : g.spacing();
}

double QuadratureConfig::radius_for(const Grid& g) const {
    return truncation_radius > 0.0 ? truncation_radius : 8.0 * g.half_length;
}

long QuadratureConfig::pair_count(const Grid& g) const {
    return std::max(1L, std::lround(radius_for(g) / spacing_for(g)));
}

double QuadratureConfig::effective_radius(const Grid& g) const {
    return pair_count(g) * spacing_for(g);
}

bool QuadratureConfig::aligned(const Grid& g) const {
    return std::abs(spacing_for(g) - g.spacing()) <= 1e-12 * g.spacing();
}

void QuadratureConfig::validate(const Grid& g) const {
    if (!(spacing_for(g) > 0.0)) throw ConfigError("alpha_spacing must be positive");
    if (radius_for(g) < g.half_length)
        throw ConfigError("truncation_radius must be at least the domain half-length");
}

namespace {

constexpr int kLanes = 8;

void require_finite(const GridFunction& f, const char* who) {
    if (!f.values.allFinite()) throw std::invalid_argument(std::string(who) + ": non-finite input");
}

void require_same_grid(const GridFunction& f, const GridFunction& g, const char* who) {
    if (!(f.grid == g.grid)) throw std::invalid_argument(std::string(who) + ": grid mismatch");
}

/// Circularly extended samples of a field on the half-shifted grid,
/// g~(x_i - h/2) for i in [-M, N+M], so that for alpha_m = (m+1/2) h the
/// lookups  g~(x_j - alpha_m) = ext[off+j-m]  and
/// g~(x_j + alpha_m) = ext[off+j+m+1]  are contiguous in m.
struct AlignedTable {
    Eigen::ArrayXd ext;
    long off = 0;

    void build(const GridFunction& g, long m_count) {
        const GridFunction half = shifted_samples(g, 0.5 * g.grid.spacing());
        const long n = g.size();
        off = m_count;
        ext.resize(n + 2 * m_count + 2);
        for (long i = -m_count; i <= n + m_count + 1; ++i)
            ext[i + off] = half.values[((i % n) + n) % n];
    }
};

template <int NF>
struct Scratch {
    std::vector<double> buf;  // n_out rows of length M
    double* row(int r, long m_count) { return buf.data() + static_cast<long>(r) * m_count; }
};

Scratch<0>& scratch() {
    thread_local Scratch<0> s;
    return s;
}

/// Symmetric-pair quadrature driver, aligned path (alpha nodes on the
/// half-shifted grid). Term::pair(j, alpha, mv, pv, out) fills one value per
/// output with the (+alpha) + (-alpha) contribution. Summation order per
/// node is fixed: terms go to lane m % 8, lanes combine in a fixed tree.
template <int NF, int NO, class Term>
void pair_sum_aligned(const Grid& grid, const QuadratureConfig& q,
                      const std::array<const GridFunction*, NF>& fields, const Term& term,
                      std::array<Eigen::ArrayXd*, NO> out) {
    const long n = grid.node_count;
    const long m_count = q.pair_count(grid);
    const double ha = q.spacing_for(grid);

    std::array<AlignedTable, NF> tab;
    for (int f = 0; f < NF; ++f) tab[f].build(*fields[f], m_count);
    for (int r = 0; r < NO; ++r) out[r]->resize(n);

    parallel_for(0, n, [&](std::int64_t lo, std::int64_t hi) {
        auto& sc = scratch();
        if (static_cast<long>(sc.buf.size()) < NO * m_count)
            sc.buf.resize(static_cast<std::size_t>(NO * m_count));
        for (long j = lo; j < hi; ++j) {
            std::array<const double*, NF> mbase, pbase;
            for (int f = 0; f < NF; ++f) {
                mbase[f] = tab[f].ext.data() + tab[f].off + j;      // index with [-m]
                pbase[f] = tab[f].ext.data() + tab[f].off + j + 1;  // index with [+m]
            }
            for (long m = 0; m < m_count; ++m) {
                const double alpha = (m + 0.5) * ha;
                std::array<double, NF> mv, pv;
                for (int f = 0; f < NF; ++f) {
                    mv[f] = mbase[f][-m];
                    pv[f] = pbase[f][m];
                }
                std::array<double, NO> o;
                term.pair(static_cast<int>(j), alpha, mv, pv, o);
                for (int r = 0; r < NO; ++r) sc.row(r, m_count)[m] = o[r];
            }
            for (int r = 0; r < NO; ++r) {
                const double* row = sc.row(r, m_count);
                CompensatedLanes<kLanes> lanes;
                if (!q.reverse_enumeration) {
                    long m = 0;
                    for (; m + kLanes <= m_count; m += kLanes) lanes.add_block(row + m);
                    for (; m < m_count; ++m) lanes.add(static_cast<int>(m % kLanes), row[m]);
                } else {
                    for (long m = m_count - 1; m >= 0; --m)
                        lanes.add(static_cast<int>((m_count - 1 - m) % kLanes), row[m]);
                }
                (*out[r])[j] = lanes.total() * ha;
            }
        }
    });
}

/// General path for alpha spacings not tied to the grid: per alpha node the
/// shifted samples of every field are produced spectrally, and nodes
/// accumulate in the same fixed per-node order (m ascending, lane m % 8).
template <int NF, int NO, class Term>
void pair_sum_general(const Grid& grid, const QuadratureConfig& q,
                      const std::array<const GridFunction*, NF>& fields, const Term& term,
                      std::array<Eigen::ArrayXd*, NO> out) {
    const long n = grid.node_count;
    const long m_count = q.pair_count(grid);
    const double ha = q.spacing_for(grid);

    std::vector<std::array<CompensatedLanes<kLanes>, NO>> lanes(static_cast<std::size_t>(n));
    for (long m_iter = 0; m_iter < m_count; ++m_iter) {
        const long m = q.reverse_enumeration ? m_count - 1 - m_iter : m_iter;
        const int lane = static_cast<int>(m_iter % kLanes);
        const double alpha = (m + 0.5) * ha;
        std::array<GridFunction, NF> rm, rp;
        for (int f = 0; f < NF; ++f) {
            rm[f] = shifted_samples(*fields[f], alpha);
            rp[f] = shifted_samples(*fields[f], -alpha);
        }
        parallel_for(0, n, [&](std::int64_t lo, std::int64_t hi) {
            for (long j = lo; j < hi; ++j) {
                std::array<double, NF> mv, pv;
                for (int f = 0; f < NF; ++f) {
                    mv[f] = rm[f].values[j];
                    pv[f] = rp[f].values[j];
                }
                std::array<double, NO> o;
                term.pair(static_cast<int>(j), alpha, mv, pv, o);
                for (int r = 0; r < NO; ++r) lanes[static_cast<std::size_t>(j)][r].add(lane, o[r]);
            }
        });
    }
    for (int r = 0; r < NO; ++r) {
        out[r]->resize(n);
        for (long j = 0; j < n; ++j) (*out[r])[j] = lanes[static_cast<std::size_t>(j)][r].total() * ha;
    }
}

template <int NF, int NO, class Term>
void pair_sum(const Grid& grid, const QuadratureConfig& q,
              const std::array<const GridFunction*, NF>& fields, const Term& term,
              std::array<Eigen::ArrayXd*, NO> out) {
    q.validate(grid);
    if (q.aligned(grid))
        pair_sum_aligned<NF, NO>(grid, q, fields, term, out);
    else
        pair_sum_general<NF, NO>(grid, q, fields, term, out);
}

// Paired integrands. den(d, a) = d^2 + a^2; the two sides of a pair are
// merged over a common denominator so each pair costs one division.

struct RhsTerm {
    const double* f;
    const double* fp;
    inline void pair(int j, double alpha, const std::array<double, 1>& mv,
                     const std::array<double, 1>& pv, std::array<double, 1>& o) const {
        const double fj = f[j], fpj = fp[j];
        const double dm = fj - mv[0];
        const double dp = fj - pv[0];
        const double a2 = alpha * alpha;
        const double den_m = dm * dm + a2;
        const double den_p = dp * dp + a2;
        const double num_m = fpj * alpha - dm;
        const double num_p = -fpj * alpha - dp;
        o[0] = (num_m * den_p + num_p * den_m) / (den_m * den_p);
    }
};

struct VelocityTerm {
    const double* f;
    inline void pair(int j, double alpha, const std::array<double, 1>& mv,
                     const std::array<double, 1>& pv, std::array<double, 1>& o) const {
        const double fj = f[j];
        const double dm = fj - mv[0];
        const double dp = fj - pv[0];
        const double a2 = alpha * alpha;
        const double den_m = dm * dm + a2;
        const double den_p = dp * dp + a2;
        o[0] = alpha * (den_m - den_p) / (den_m * den_p);
    }
};

struct LfTerm {
    const double* f;
    const double* g;
    inline void pair(int j, double alpha, const std::array<double, 2>& mv,
                     const std::array<double, 2>& pv, std::array<double, 1>& o) const {
        const double fj = f[j], gj = g[j];
        const double dm = fj - mv[0];
        const double dp = fj - pv[0];
        const double a2 = alpha * alpha;
        const double den_m = dm * dm + a2;
        const double den_p = dp * dp + a2;
        o[0] = ((gj - mv[1]) * den_p + (gj - pv[1]) * den_m) / (den_m * den_p);
    }
};

struct DfTerm {
    const double* f;
    const double* g;
    inline void pair(int j, double alpha, const std::array<double, 2>& mv,
                     const std::array<double, 2>& pv, std::array<double, 1>& o) const {
        const double fj = f[j], gj = g[j];
        const double dm = fj - mv[0];
        const double dp = fj - pv[0];
        const double gm = gj - mv[1];
        const double gp = gj - pv[1];
        const double a2 = alpha * alpha;
        const double den_m = dm * dm + a2;
        const double den_p = dp * dp + a2;
        o[0] = (gm * gm * den_p + gp * gp * den_m) / (den_m * den_p);
    }
};

// The D^p integrand carries an integrable a^{p-2} singularity at a = 0, so
// the plain midpoint rule converges like h^{p-1}. We subtract the local
// model 2 |g'(x)|^p a^{p-2} / (1 + f'(x)^2) from the summand (the paired
// residual is O(a^p)) and add back its closed-form integral over (0, A).
struct DpTerm {
    const double* f;
    const double* g;
    const double* fp;
    const double* gp;
    double p;
    inline void pair(int j, double alpha, const std::array<double, 2>& mv,
                     const std::array<double, 2>& pv, std::array<double, 1>& o) const {
        const double fj = f[j], gj = g[j];
        const double dm = fj - mv[0];
        const double dp = fj - pv[0];
        const double a2 = alpha * alpha;
        const double den_m = dm * dm + a2;
        const double den_p = dp * dp + a2;
        const double model = 2.0 * std::pow(std::abs(gp[j]), p) * std::pow(alpha, p - 2.0) /
                             (1.0 + fp[j] * fp[j]);
        o[0] = (std::pow(std::abs(gj - mv[1]), p) * den_p +
                std::pow(std::abs(gj - pv[1]), p) * den_m) /
                   (den_m * den_p) -
               model;
    }
};

/// One pass producing L_f[f'], the quadratic term of the slope equation, and
/// the velocity; shifted fields are {f, f'}.
struct SlopeTerm {
    const double* f;
    const double* fp;
    inline void pair(int j, double alpha, const std::array<double, 2>& mv,
                     const std::array<double, 2>& pv, std::array<double, 3>& o) const {
        const double fj = f[j], fpj = fp[j];
        const double dfm = fj - mv[0];
        const double dfp = fj - pv[0];
        const double dgm = fpj - mv[1];
        const double dgp = fpj - pv[1];
        const double a2 = alpha * alpha;
        const double den_m = dfm * dfm + a2;
        const double den_p = dfp * dfp + a2;
        const double inv = 1.0 / (den_m * den_p);
        o[0] = (dgm * den_p + dgp * den_m) * inv;  // L_f[f']
        const double qm = 2.0 * (dfm - alpha * fpj) * dfm * dgm;
        const double qp = 2.0 * (dfp + alpha * fpj) * dfp * dgp;
        o[1] = (qm * den_p * den_p + qp * den_m * den_m) * inv * inv;  // quadratic term
        o[2] = alpha * (den_m - den_p) * inv;                          // velocity
    }
};

/// One pass for T1..T5; shifted fields are {f, f', f''}.
struct TTermsTerm {
    const double* f;
    const double* fp;
    const double* fpp;
    inline void pair(int j, double alpha, const std::array<double, 3>& mv,
                     const std::array<double, 3>& pv, std::array<double, 5>& o) const {
        const double fj = f[j], fpj = fp[j], fppj = fpp[j];
        const double dfm = fj - mv[0], dfp = fj - pv[0];
        const double dgm = fpj - mv[1], dgp = fpj - pv[1];
        const double dhm = fppj - mv[2], dhp = fppj - pv[2];
        const double a2 = alpha * alpha;
        const double den_m = dfm * dfm + a2;
        const double den_p = dfp * dfp + a2;
        const double inv = 1.0 / (den_m * den_p);
        const double inv2 = inv * inv;
        const double wm = den_p * den_p;  // multiply +alpha numerators
        const double wp = den_m * den_m;
        const double em = dfm - alpha * fpj;  // d_a f - a f'(x), both signs of a
        const double ep = dfp + alpha * fpj;
        o[0] = (4.0 * (dgm - alpha * fppj) * dfm * dgm * wm +
                4.0 * (dgp + alpha * fppj) * dfp * dgp * wp) * inv2;
        o[1] = (2.0 * em * dgm * dgm * wm + 2.0 * ep * dgp * dgp * wp) * inv2;
        o[2] = (2.0 * em * dfm * dhm * wm + 2.0 * ep * dfp * dhp * wp) * inv2;
        o[3] = (-8.0 * em * dfm * dfm * dgm * dgm * wm * den_p -
                8.0 * ep * dfp * dfp * dgp * dgp * wp * den_m) * inv2 * inv;
        o[4] = (2.0 * dgm * dfm * alpha * wm - 2.0 * dgp * dfp * alpha * wp) * inv2;
    }
};

/// Period mean of |g(x_j) - g(x_j - a)|^p over one alpha period, per node,
/// on the staggered half-grid lags. Used for the D^p tail.
Eigen::ArrayXd dp_period_mean(const GridFunction& g, double p) {
    const int n = g.size();
    const GridFunction half = shifted_samples(g, 0.5 * g.grid.spacing());
    Eigen::ArrayXd out(n);
    parallel_for(0, n, [&](std::int64_t lo, std::int64_t hi) {
        for (long j = lo; j < hi; ++j) {
            CompensatedSum acc;
            for (int i = 0; i < n; ++i) acc.add(std::pow(std::abs(g.values[j] - half.values[i]), p));
            out[j] = acc.total() / n;
        }
    });
    return out;
}

}  // namespace

GridFunction muskat_rhs(const GridFunction& f, const QuadratureConfig& q) {
    require_finite(f, "muskat_rhs");
    const GridFunction fp = spectral_derivative(f, 1);
    GridFunction out{f.grid, Eigen::ArrayXd()};
    RhsTerm term{f.values.data(), fp.values.data()};
    pair_sum<1, 1>(f.grid, q, {&f}, term, {&out.values});
    if (q.tail_correction) {
        const double mean = grid_mean(f);
        const double inv_a = 1.0 / q.effective_radius(f.grid);
        out.values -= 2.0 * inv_a * (f.values - mean);
    }
    return out;
}

GridFunction velocity(const GridFunction& f, const QuadratureConfig& q) {
    require_finite(f, "velocity");
    GridFunction out{f.grid, Eigen::ArrayXd()};
    VelocityTerm term{f.values.data()};
    pair_sum<1, 1>(f.grid, q, {&f}, term, {&out.values});
    // Paired leading terms cancel in the period mean; no tail term.
    return out;
}

GridFunction apply_Lf(const GridFunction& f, const GridFunction& g, const QuadratureConfig& q) {
    require_finite(f, "apply_Lf");
    require_finite(g, "apply_Lf");
    require_same_grid(f, g, "apply_Lf");
    GridFunction out{f.grid, Eigen::ArrayXd()};
    LfTerm term{f.values.data(), g.values.data()};
    pair_sum<2, 1>(f.grid, q, {&f, &g}, term, {&out.values});
    if (q.tail_correction) {
        const double mean = grid_mean(g);
        const double inv_a = 1.0 / q.effective_radius(f.grid);
        out.values += 2.0 * inv_a * (g.values - mean);
    }
    return out;
}

GridFunction apply_Df(const GridFunction& f, const GridFunction& g, const QuadratureConfig& q) {
    require_finite(f, "apply_Df");
    require_finite(g, "apply_Df");
    require_same_grid(f, g, "apply_Df");
    GridFunction out{f.grid, Eigen::ArrayXd()};
    DfTerm term{f.values.data(), g.values.data()};
    pair_sum<2, 1>(f.grid, q, {&f, &g}, term, {&out.values});
    if (q.tail_correction) {
        const double mean = grid_mean(g);
        GridFunction g2{g.grid, g.values * g.values};
        const double mean_sq = grid_mean(g2);
        const double inv_a = 1.0 / q.effective_radius(f.grid);
        out.values += 2.0 * inv_a * (g.values * g.values - 2.0 * mean * g.values + mean_sq);
    }
    return out;
}

GridFunction apply_Dp(const GridFunction& f, const GridFunction& g, double p,
                      const QuadratureConfig& q) {
    if (!(p > 1.0 && p < 2.0))
        throw std::invalid_argument("apply_Dp requires p in (1,2), got " + std::to_string(p));
    require_finite(f, "apply_Dp");
    require_finite(g, "apply_Dp");
    require_same_grid(f, g, "apply_Dp");
    const GridFunction fp = spectral_derivative(f, 1);
    const GridFunction gp = spectral_derivative(g, 1);
    GridFunction out{f.grid, Eigen::ArrayXd()};
    DpTerm term{f.values.data(), g.values.data(), fp.values.data(), gp.values.data(), p};
    pair_sum<2, 1>(f.grid, q, {&f, &g}, term, {&out.values});
    const double a_eff = q.effective_radius(f.grid);
    out.values += 2.0 * gp.values.abs().pow(p) * std::pow(a_eff, p - 1.0) /
                  ((p - 1.0) * (1.0 + fp.values * fp.values));
    if (q.tail_correction)
        out.values += 2.0 / a_eff * dp_period_mean(g, p);
    return out;
}

GridFunction fprime_rhs(const GridFunction& f, const QuadratureConfig& q) {
    require_finite(f, "fprime_rhs");
    const GridFunction fp = spectral_derivative(f, 1);
    const GridFunction fpp = spectral_derivative(f, 2);
    Eigen::ArrayXd lf, quad, vel;
    SlopeTerm term{f.values.data(), fp.values.data()};
    pair_sum<2, 3>(f.grid, q, {&f, &fp}, term, {&lf, &quad, &vel});
    if (q.tail_correction) {
        // Only L_f carries a leading tail; its mean matches the x-derivative
        // of the tail of the evolution right side.
        const double mean = grid_mean(fp);
        lf += 2.0 / q.effective_radius(f.grid) * (fp.values - mean);
    }
    GridFunction out{f.grid, -vel * fpp.values - lf + quad};
    return out;
}

TTerms t_terms(const GridFunction& f, const QuadratureConfig& q) {
    require_finite(f, "t_terms");
    const GridFunction fp = spectral_derivative(f, 1);
    const GridFunction fpp = spectral_derivative(f, 2);
    TTerms out{{f.grid, {}}, {f.grid, {}}, {f.grid, {}}, {f.grid, {}}, {f.grid, {}}};
    TTermsTerm term{f.values.data(), fp.values.data(), fpp.values.data()};
    pair_sum<3, 5>(f.grid, q, {&f, &fp, &fpp},
                   term, {&out.t1.values, &out.t2.values, &out.t3.values, &out.t4.values,
                          &out.t5.values});
    return out;
}

Remainders remainders(const GridFunction& f, int node, double alpha) {
    if (alpha == 0.0) throw std::invalid_argument("remainders: alpha must be nonzero");
    require_finite(f, "remainders");
    const double x = f.grid.node(node);
    const GridFunction fp = spectral_derivative(f, 1);
    const GridFunction fpp = spectral_derivative(f, 2);
    const double f_x = f.values[node];
    const double fp_x = fp.values[node];
    const double fpp_x = fpp.values[node];
    const double f_xa = eval_interpolant(f, x - alpha);
    const double fp_xa = eval_interpolant(fp, x - alpha);
    Remainders r;
    r.r1 = (fp_x - fp_xa) / alpha - fpp_x;
    r.r2 = (f_x - f_xa) / alpha - fp_x + 0.5 * alpha * fpp_x;
    return r;
}

}  // namespace muskat

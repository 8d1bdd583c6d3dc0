#include "muskat/suites.hpp"

#include <cmath>
#include <numbers>

#include "muskat/evolve.hpp"
#include "muskat/spectral.hpp"
#include "muskat/summation.hpp"

namespace muskat {

namespace {

constexpr double kPi = std::numbers::pi;

CheckReport identity_report(const std::string& name, double worst_rel, double tol,
                            double location = 0.0) {
    CheckReport rep;
    rep.name = name;
    rep.tolerance = tol;
    rep.worst_margin = -worst_rel;
    rep.worst_location = location;
    rep.pass = worst_rel <= tol;
    return rep;
}

GridFunction cos_mode(const Grid& g, double k) {
    GridFunction f{g, Eigen::ArrayXd(g.node_count)};
    for (int j = 0; j < g.node_count; ++j) f.values[j] = std::cos(k * g.node(j));
    return f;
}

GridFunction sine(const Grid& g, double a, double k = 1.0) {
    GridFunction f{g, Eigen::ArrayXd(g.node_count)};
    for (int j = 0; j < g.node_count; ++j) f.values[j] = a * std::sin(k * g.node(j));
    return f;
}

double grid_total(const GridFunction& g) {
    CompensatedSum acc;
    for (int j = 0; j < g.size(); ++j) acc.add(g.values[j]);
    return acc.total() * g.grid.spacing();
}

double rel_diff(const Eigen::ArrayXd& got, const Eigen::ArrayXd& want) {
    return (got - want).abs().maxCoeff() / std::max(1e-300, want.abs().maxCoeff());
}

}  // namespace

std::vector<CheckReport> suite_operators(const RunConfig& cfg) {
    std::vector<CheckReport> reports;
    std::mt19937_64 rng(cfg.seed);

    // Constant-coefficient reduction of L_f against the Fourier-side Lambda,
    // modes up to N/8 at N = 1024. The quadrature uses a generous truncation
    // radius so its O(1/(k^3 A^3)) tail remainder sits below the tolerance.
    {
        const Grid g = make_grid(kPi, 1024);
        const GridFunction zero = constant_function(g, 0.0);
        QuadratureConfig q;
        q.truncation_radius = 64.0 * g.half_length;
        double worst = 0.0, where = 0.0;
        for (double k : {1.0, 2.0, 3.0, 5.0, 8.0, 16.0, 37.0, 64.0, 128.0}) {
            const GridFunction c = cos_mode(g, k);
            const double rel = rel_diff(apply_Lf(zero, c, q).values, lambda_op(c).values);
            if (rel > worst) {
                worst = rel;
                where = k;
            }
        }
        reports.push_back(identity_report("lambda_vs_quadrature", worst, 1e-6, where));
    }
    {
        const Grid g = make_grid(kPi, 1024);
        const GridFunction c = cos_mode(g, 1.0);
        const GridFunction lc = lambda_op(c);
        double worst = 0.0;
        for (int j = 0; j < g.node_count; ++j)
            worst = std::max(worst, std::abs(lc.values[j] - kPi * std::cos(g.node(j))));
        reports.push_back(identity_report("lambda_cos_pi_exact", worst, 1e-10));
    }
    {
        const Grid g = make_grid(kPi, 1024);
        const GridFunction f = random_band_limited(g, g.node_count / 4, 1.0, rng);
        const GridFunction lhs = lambda_op(f);
        const GridFunction rhs = hilbert(spectral_derivative(f, 1));
        reports.push_back(
            identity_report("lambda_hilbert_dx", rel_diff(lhs.values, rhs.values), 1e-12));
    }

    // H^{1/2} identity at N = 512 with the default radius 8L, and the
    // truncation-convergence study with the tail estimate disabled (the raw
    // truncation error of the periodized integrand halves as A doubles).
    {
        const Grid g = make_grid(kPi, 512);
        const GridFunction zero = constant_function(g, 0.0);
        const GridFunction c = cos_mode(g, 1.0);
        QuadratureConfig q;  // A = 8L, tail on
        const double total = grid_total(apply_Df(zero, c, q));
        const double target = 2.0 * kPi * kPi;
        reports.push_back(
            identity_report("hhalf_identity_2pi2", std::abs(total - target) / target, 0.01));

        QuadratureConfig qraw;
        qraw.tail_correction = false;
        std::vector<double> errs;
        for (double mult : {8.0, 16.0, 32.0}) {
            qraw.truncation_radius = mult * g.half_length;
            errs.push_back(std::abs(grid_total(apply_Df(zero, c, qraw)) - target));
        }
        double margin = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i + 1 < errs.size(); ++i) {
            const double ratio = errs[i] / errs[i + 1];
            margin = std::min(margin, 0.3 - std::abs(ratio - 2.0));
        }
        CheckReport rep;
        rep.name = "hhalf_tail_convergence";
        rep.tolerance = 0.0;
        rep.worst_margin = margin;
        rep.pass = margin >= 0.0;
        reports.push_back(rep);
    }

    // Zero mean of L_f[|f''|^p] over ten random band-limited fields.
    {
        const Grid g = make_grid(kPi, 1024);
        QuadratureConfig q;
        for (double p : {1.5, 2.0}) {
            double worst = 0.0;
            for (int trial = 0; trial < 10; ++trial) {
                const GridFunction f = random_band_limited(g, g.node_count / 8, 0.5, rng);
                const GridFunction fpp = spectral_derivative(f, 2);
                const GridFunction phi = abs_power(fpp, p);
                const double total = grid_total(apply_Lf(f, phi, q));
                worst = std::max(worst, std::abs(total) / grid_total(phi));
            }
            const std::string name =
                p == 2.0 ? "lf_zero_mean_p2" : "lf_zero_mean_p15";
            reports.push_back(identity_report(name, worst, 1e-6));
        }
    }

    // Structural consistency of the slope and curvature equations with the
    // spectral derivatives of the evolution right side.
    {
        const Grid g = make_grid(kPi, 1024);
        QuadratureConfig q;
        const GridFunction f = sine(g, 0.3);
        const GridFunction rhs = muskat_rhs(f, q);
        reports.push_back(identity_report(
            "slope_equation_consistency",
            rel_diff(fprime_rhs(f, q).values, spectral_derivative(rhs, 1).values), 1e-4));

        const GridFunction v = velocity(f, q);
        const GridFunction fpp = spectral_derivative(f, 2);
        const GridFunction fppp = spectral_derivative(f, 3);
        const GridFunction lf_fpp = apply_Lf(f, fpp, q);
        const TTerms t = t_terms(f, q);
        const Eigen::ArrayXd assembled = -v.values * fppp.values - lf_fpp.values + t.t1.values +
                                         t.t2.values + t.t3.values + t.t4.values;
        reports.push_back(identity_report(
            "curvature_equation_assembly",
            rel_diff(assembled, spectral_derivative(rhs, 2).values), 1e-3));
    }

    // Dilation covariance: g(x) = f(2x)/2 evaluated with the quadrature
    // whose alpha grid is the pullback of the original one.
    {
        const Grid g = make_grid(kPi, 256);
        const GridFunction f = random_band_limited(g, 5, 0.5, rng);
        const int lambda = 2;
        GridFunction fl{g, Eigen::ArrayXd(g.node_count)};
        for (int j = 0; j < g.node_count; ++j)
            fl.values[j] =
                eval_interpolant(f, std::remainder(lambda * g.node(j), g.period())) / lambda;
        QuadratureConfig qf;
        qf.alpha_spacing = lambda * g.spacing();
        qf.truncation_radius = lambda * 8.0 * g.half_length;
        QuadratureConfig qg;
        const GridFunction rl = muskat_rhs(fl, qg);
        const GridFunction rf = muskat_rhs(f, qf);
        double worst = 0.0;
        for (int j = 0; j < g.node_count; ++j) {
            const double want =
                eval_interpolant(rf, std::remainder(lambda * g.node(j), g.period()));
            worst = std::max(worst, std::abs(rl.values[j] - want));
        }
        reports.push_back(identity_report("dilation_covariance",
                                          worst / rf.values.abs().maxCoeff(), 1e-6));
    }

    return reports;
}

std::vector<CheckReport> suite_bounds(const RunConfig& cfg) {
    std::vector<CheckReport> reports;
    std::mt19937_64 rng(cfg.seed);
    const Grid g = make_grid(kPi, 512);
    QuadratureConfig q;

    // Twenty random band-limited fields; aggregate the worst margin per
    // lemma. The corrupt_bounds_factor hook scales the bound side so the
    // harness's sensitivity can itself be tested.
    {
        std::vector<CheckReport> agg;
        std::uniform_real_distribution<double> slope_dist(0.2, 1.2);
        for (int trial = 0; trial < 20; ++trial) {
            const GridFunction f =
                random_band_limited(g, g.node_count / 8, slope_dist(rng), rng);
            std::vector<CheckReport> reps;
            try {
                reps = check_pointwise_bounds(f, q, nullptr, 1.5, cfg.corrupt_bounds_factor);
            } catch (const ResolutionError& e) {
                CheckReport skip;
                skip.name = "pointwise_bounds_trial_" + std::to_string(trial);
                skip.skipped = true;
                skip.pass = true;
                skip.note = e.what();
                reports.push_back(skip);
                continue;
            }
            if (agg.empty()) {
                agg = reps;
            } else {
                for (std::size_t i = 0; i < reps.size(); ++i) {
                    if (reps[i].worst_margin < agg[i].worst_margin) {
                        agg[i].worst_margin = reps[i].worst_margin;
                        agg[i].worst_location = reps[i].worst_location;
                    }
                    agg[i].pass = agg[i].pass && reps[i].pass;
                    agg[i].tolerance = std::max(agg[i].tolerance, reps[i].tolerance);
                }
            }
        }
        for (auto& rep : agg) reports.push_back(rep);
    }

    // Modulus-of-continuity bound on data that provably obeys
    // rho(a) = min(K a^beta, 2B): a sine with a^2 k^3 <= 1/2 has
    // |d_a f'| <= min(|f''|_inf |a|, 2B) below the root envelope.
    {
        const GridFunction f = sine(g, 0.3);
        const double B = max_abs(spectral_derivative(f, 1));
        Modulus rho = cfg.modulus;
        if (cfg.modulus_cap_auto) rho.cap = 2.0 * B;
        const auto reps = check_pointwise_bounds(f, q, &rho, 1.5, cfg.corrupt_bounds_factor);
        for (const auto& rep : reps)
            if (rep.name == "modulus_lower_bound") reports.push_back(rep);
    }

    // The implicit radius solves its defining equation, and matches the
    // closed form r(y) = 128 / y^2 for the uncapped root modulus.
    {
        Modulus capped = cfg.modulus;
        if (cfg.modulus_cap_auto) capped.cap = 0.6;
        double worst = 0.0, where = 0.0;
        for (double y : {0.03, 0.3, 3.0, 30.0, 300.0}) {
            const double r = solve_r(y, capped, 0.3);
            const double rel = std::abs(r * tail_integral(capped, r) - y / 6.0) / (y / 6.0);
            if (rel > worst) {
                worst = rel;
                where = y;
            }
        }
        reports.push_back(identity_report("solve_r_defining_eq", worst, 1e-10, where));

        Modulus uncapped;
        uncapped.family = Modulus::Family::power;
        uncapped.K = 1.0;
        uncapped.beta = 0.5;
        worst = 0.0;
        for (double y : {0.5, 6.0, 12.0, 77.0}) {
            const double r = solve_r(y, uncapped, 1.0);
            const double want = 128.0 / (y * y);
            worst = std::max(worst, std::abs(r - want) / want);
        }
        reports.push_back(identity_report("solve_r_closed_form", worst, 1e-10));
    }

    // Ratio tracking for the nonlinear-term envelopes (unquantified
    // universal constant: reported, never asserted).
    {
        const GridFunction f = sine(g, 0.3);
        const RatioReport ratios = empirical_constants(f, 0.5, q);
        CheckReport rep;
        rep.name = "t_terms_ratio_report";
        rep.pass = true;
        rep.tolerance = 0.0;
        rep.worst_margin = ratios.max_ratio;
        rep.note = "max=" + format_full(ratios.max_ratio) +
                   " median=" + format_full(ratios.median_ratio) +
                   " nodes=" + std::to_string(ratios.n_used);
        reports.push_back(rep);
    }

    // Remainder envelopes dominate measured remainders on sampled data.
    {
        double worst_ratio = 0.0;
        for (double amp : {0.3, 1.0}) {
            const GridFunction f = sine(g, amp);
            const GridFunction fpp = spectral_derivative(f, 2);
            const GridFunction dval = apply_Df(constant_function(g, 0.0), fpp, q);
            for (int node = 1; node < g.node_count; node += 13) {
                for (double a : {0.05, 0.3, 1.1, -0.6}) {
                    const Remainders r = remainders(f, node, a);
                    const auto [b1, b2] = remainder_envelope(a, dval.values[node], 2.0);
                    if (b1 > 0.0) worst_ratio = std::max(worst_ratio, std::abs(r.r1) / b1);
                    if (b2 > 0.0) worst_ratio = std::max(worst_ratio, std::abs(r.r2) / b2);
                }
            }
        }
        CheckReport rep;
        rep.name = "remainder_envelope_dominance";
        rep.tolerance = 1e-6;
        rep.worst_margin = 1.0 - worst_ratio;
        rep.pass = rep.worst_margin >= -rep.tolerance;
        reports.push_back(rep);
    }

    return reports;
}

std::vector<CheckReport> suite_theorems(const RunConfig& cfg) {
    std::vector<CheckReport> reports;

    const RunResult res = run(cfg.sim);

    const auto rate_report = [&](const std::string& name, auto value_of) {
        CheckReport rep;
        rep.name = name;
        rep.tolerance = 1e-8;  // absolute drift per unit time
        double worst = -std::numeric_limits<double>::infinity();
        double where = 0.0;
        for (std::size_t i = 1; i < res.series.size(); ++i) {
            const double dt = res.series[i].t - res.series[i - 1].t;
            if (!(dt > 0.0)) continue;
            const double rate = (value_of(res.series[i]) - value_of(res.series[i - 1])) / dt;
            if (rate > worst) {
                worst = rate;
                where = res.series[i].t;
            }
        }
        rep.worst_margin = -worst;
        rep.worst_location = where;
        rep.pass = worst <= rep.tolerance;
        return rep;
    };

    reports.push_back(rate_report("max_principle_sup", [](const SeriesRow& r) { return r.sup_f; }));
    reports.push_back(rate_report("max_principle_l2",
                                  [](const SeriesRow& r) { return r.m2 * r.m2; }));
    reports.push_back(
        rate_report("max_principle_slope", [](const SeriesRow& r) { return r.slope_B; }));

    {
        CheckReport rep;
        rep.name = "curvature_envelope";
        rep.tolerance = 0.0;  // the 1e-6 allowance is part of the envelope
        double worst = std::numeric_limits<double>::infinity();
        double where = 0.0;
        for (const SeriesRow& row : res.series) {
            const double margin = row.envelope + 1e-6 - row.minf;
            if (margin < worst) {
                worst = margin;
                where = row.t;
            }
        }
        rep.worst_margin = worst;
        rep.worst_location = where;
        rep.pass = worst >= 0.0;
        reports.push_back(rep);
    }

    for (std::size_t li = 0; li < res.ledgers.size(); ++li) {
        CheckReport rep;
        const double p = res.ledgers[li].p;
        rep.name = p == 2.0 ? "ledger_slack_p2"
                            : (p == 1.5 ? "ledger_slack_p15"
                                        : "ledger_slack_p" + std::to_string(p));
        rep.tolerance = 1e-8;
        double worst = std::numeric_limits<double>::infinity();
        double where = 0.0;
        for (std::size_t i = 0; i < res.ledger_slacks.size(); ++i) {
            if (res.ledger_slacks[i][li] < worst) {
                worst = res.ledger_slacks[i][li];
                where = res.series[i].t;
            }
        }
        rep.worst_margin = worst;
        rep.worst_location = where;
        rep.pass = worst >= -rep.tolerance;
        reports.push_back(rep);
    }

    {
        CheckReport rep;
        rep.name = "curvature_lp_monotone";
        rep.tolerance = 1e-8;
        double worst = -std::numeric_limits<double>::infinity();
        double where = 0.0;
        for (std::size_t i = 1; i < res.metrics_series.size(); ++i) {
            for (const auto& [p, mp] : res.metrics_series[i].curvature_Mp) {
                const double increase = mp - res.metrics_series[i - 1].curvature_Mp.at(p);
                if (increase > worst) {
                    worst = increase;
                    where = res.series[i].t;
                }
            }
        }
        rep.worst_margin = -worst;
        rep.worst_location = where;
        rep.pass = worst <= rep.tolerance;
        reports.push_back(rep);
    }

    // Twin-trajectory divergence against the Gronwall envelope. The probe
    // has its own fixed configuration: the base state is a 0.05-amplitude
    // sine followed to t = 10.
    {
        SimConfig twin_cfg;
        twin_cfg.grid = make_grid(cfg.sim.grid.half_length, 256);
        twin_cfg.init.family = "sine";
        twin_cfg.init.a = 0.05;
        twin_cfg.init.k = 1.0;
        twin_cfg.quad.truncation_radius = 2.0 * twin_cfg.grid.half_length;
        twin_cfg.t_end = 10.0;
        twin_cfg.output_stride = 200;
        const TwinReport twin = twin_divergence(twin_cfg, 1e-6);
        CheckReport rep;
        rep.name = "twin_gronwall";
        rep.tolerance = 0.0;
        double worst = std::numeric_limits<double>::infinity();
        double where = 0.0;
        for (std::size_t i = 0; i < twin.times.size(); ++i) {
            const double margin = twin.envelope[i] - twin.divergence[i];
            if (margin < worst) {
                worst = margin;
                where = twin.times[i];
            }
        }
        rep.worst_margin = worst;
        rep.worst_location = where;
        rep.pass = twin.below_envelope;
        rep.note = "B=" + format_full(twin.B) + " eps=" + format_full(twin.epsilon);
        reports.push_back(rep);
    }

    return reports;
}

std::vector<CheckReport> run_suite(const std::string& name, const RunConfig& cfg) {
    if (name == "operators") return suite_operators(cfg);
    if (name == "bounds") return suite_bounds(cfg);
    if (name == "theorems") return suite_theorems(cfg);
    throw ConfigError("unknown verification suite \"" + name +
                      "\" (expected operators | bounds | theorems)");
}

}  // namespace muskat

#include "muskat/evolve.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "muskat/spectral.hpp"

namespace muskat {

void SimConfig::validate() const {
    if (!(cfl_safety > 0.0 && cfl_safety <= 0.5))
        throw ConfigError("cfl_safety must lie in (0, 0.5]");
    if (!(t_end > 0.0)) throw ConfigError("t_end must be positive");
    if (output_stride < 1) throw ConfigError("output_stride must be >= 1");
    quad.validate(grid);
    for (double p : ledger_exponents)
        if (!(p > 1.0) || std::isinf(p)) throw ConfigError("ledger exponents must be finite and > 1");
}

double cfl_dt(const GridFunction& f, const SimConfig& cfg) {
    const double B = max_abs(spectral_derivative(f, 1));
    return cfg.cfl_safety * f.grid.spacing() * std::min(1.0, 1.0 + B * B) / std::numbers::pi;
}

SimState step(const SimState& s, double dt, const QuadratureConfig& q) {
    // Shu-Osher form of SSP-RK3.
    const GridFunction k1 = muskat_rhs(s.f, q);
    GridFunction u1{s.f.grid, s.f.values + dt * k1.values};
    const GridFunction k2 = muskat_rhs(u1, q);
    GridFunction u2{s.f.grid, 0.75 * s.f.values + 0.25 * (u1.values + dt * k2.values)};
    const GridFunction k3 = muskat_rhs(u2, q);
    SimState out;
    out.f = GridFunction{s.f.grid,
                         s.f.values / 3.0 + (2.0 / 3.0) * (u2.values + dt * k3.values)};
    out.t = s.t + dt;
    out.step_index = s.step_index + 1;
    return out;
}

namespace {

SeriesRow observe(const SimState& s, double M0, double B0, const std::vector<Ledger>& ledgers,
                  Metrics& metrics_out) {
    SeriesRow row;
    row.t = s.t;
    const Metrics m =
        snapshot_metrics(s.f, {1.5, 2.0, 3.0, std::numeric_limits<double>::infinity()});
    metrics_out = m;
    row.sup_f = m.sup_f;
    row.slope_B = m.slope_B;
    row.m2 = m.curvature_Mp.at(2.0);
    row.minf = m.curvature_Mp.at(std::numeric_limits<double>::infinity());
    row.hhalf = m.hhalf;
    row.envelope = B0 > 0.0 ? envelope_curvature(s.t, M0, B0) : M0;
    row.slack_p2 = 0.0;
    for (const Ledger& led : ledgers)
        if (led.p == 2.0) row.slack_p2 = led.slack();
    return row;
}

}  // namespace

RunResult run(const SimConfig& cfg) {
    cfg.validate();
    RunResult res;
    SimState s;
    s.f = sample(cfg.init, cfg.grid);

    const Metrics m0 = snapshot_metrics(s.f, {std::numeric_limits<double>::infinity()});
    const double B0 = m0.slope_B;
    const double M0 = m0.curvature_Mp.at(std::numeric_limits<double>::infinity());
    for (double p : cfg.ledger_exponents) res.ledgers.push_back(make_ledger(p, s.f, B0));

    const auto slack_row = [&res] {
        std::vector<double> slacks;
        for (const Ledger& led : res.ledgers) slacks.push_back(led.slack());
        return slacks;
    };
    Metrics mrow;
    res.series.push_back(observe(s, M0, B0, res.ledgers, mrow));
    res.metrics_series.push_back(mrow);
    res.ledger_slacks.push_back(slack_row());

    while (s.t < cfg.t_end) {
        double dt = cfl_dt(s.f, cfg);
        if (s.t + dt > cfg.t_end) dt = cfg.t_end - s.t;
        if (!(dt > 0.0)) break;
        s = step(s, dt, cfg.quad);

        if (cfg.inject_nan_at_step >= 0 && s.step_index == cfg.inject_nan_at_step)
            s.f.values[0] = std::numeric_limits<double>::quiet_NaN();

        if (!s.f.values.allFinite()) {
            res.events.push_back({s.t, "nan_detected",
                                  "step " + std::to_string(s.step_index)});
            res.halted_on_event = true;
            break;
        }
        for (Ledger& led : res.ledgers) ledger_update(led, s.f, dt);

        const double B = max_abs(spectral_derivative(s.f, 1));
        if (B > cfg.slope_threshold) {
            res.events.push_back({s.t, "slope_threshold",
                                  "B=" + std::to_string(B)});
            res.halted_on_event = true;
            res.series.push_back(observe(s, M0, B0, res.ledgers, mrow));
            res.metrics_series.push_back(mrow);
            res.ledger_slacks.push_back(slack_row());
            break;
        }

        if (s.step_index % cfg.output_stride == 0 || s.t >= cfg.t_end) {
            const SeriesRow row = observe(s, M0, B0, res.ledgers, mrow);
            res.series.push_back(row);
            res.metrics_series.push_back(mrow);
            res.ledger_slacks.push_back(slack_row());
            if (B0 > 0.0 && row.minf > row.envelope + 1e-6)
                res.events.push_back({s.t, "envelope_violation",
                                      "minf=" + std::to_string(row.minf)});
        }
    }
    res.final_state = std::move(s);
    return res;
}

TwinReport twin_divergence(const SimConfig& cfg, double eps0) {
    cfg.validate();
    if (eps0 < 0.0) throw std::invalid_argument("twin_divergence requires eps0 >= 0");

    SimState s1;
    s1.f = sample(cfg.init, cfg.grid);
    InitialData bump_spec;
    bump_spec.family = "gaussian";
    bump_spec.a = 1.0;
    bump_spec.sigma = cfg.grid.half_length / 8.0;
    GridFunction bump = sample(bump_spec, cfg.grid);
    bump.values /= max_abs(bump);
    SimState s2;
    s2.f = GridFunction{cfg.grid, s1.f.values + eps0 * bump.values};

    TwinReport rep;
    rep.initial_gap = (s2.f.values - s1.f.values).abs().maxCoeff();

    std::vector<double> dist;
    for (int i = 1; i <= 24; ++i) dist.push_back(cfg.grid.half_length * i / 24.0);
    Eigen::ArrayXd rho_max = Eigen::ArrayXd::Zero(static_cast<long>(dist.size()));

    const auto probe_modulus = [&](const GridFunction& f) {
        const ModulusEstimate est = estimate_modulus(spectral_derivative(f, 1), dist);
        for (std::size_t i = 0; i < dist.size(); ++i)
            rho_max[static_cast<long>(i)] =
                std::max(rho_max[static_cast<long>(i)], est.rho_hat[i]);
    };

    double running_B = 0.0;
    const auto record = [&](const SimState& a, const SimState& b) {
        rep.times.push_back(a.t);
        rep.divergence.push_back((b.f.values - a.f.values).abs().maxCoeff());
        running_B = std::max(running_B, max_abs(spectral_derivative(a.f, 1)));
        running_B = std::max(running_B, max_abs(spectral_derivative(b.f, 1)));
        probe_modulus(b.f);
    };

    record(s1, s2);
    while (s1.t < cfg.t_end) {
        double dt = std::min(cfl_dt(s1.f, cfg), cfl_dt(s2.f, cfg));
        if (s1.t + dt > cfg.t_end) dt = cfg.t_end - s1.t;
        if (!(dt > 0.0)) break;
        s1 = step(s1, dt, cfg.quad);
        s2 = step(s2, dt, cfg.quad);
        if (!s1.f.values.allFinite() || !s2.f.values.allFinite()) break;
        if (s1.step_index % cfg.output_stride == 0 || s1.t >= cfg.t_end) record(s1, s2);
    }

    rep.B = running_B;
    // eps from the aggregated modulus: largest sampled distance with
    // rho_hat <= 1/2.
    rep.epsilon = 0.0;
    for (std::size_t i = 0; i < dist.size(); ++i)
        if (rho_max[static_cast<long>(i)] <= 0.5) rep.epsilon = dist[i];
    if (rep.epsilon == 0.0)
        throw std::domain_error("twin_divergence: no distance with slope modulus <= 1/2");

    rep.envelope.resize(rep.times.size());
    rep.below_envelope = true;
    for (std::size_t i = 0; i < rep.times.size(); ++i) {
        rep.envelope[i] =
            rep.initial_gap * std::exp(2.0 * rep.B * rep.B * rep.times[i] / rep.epsilon);
        if (rep.divergence[i] > rep.envelope[i] * (1.0 + 1e-9) + 1e-300)
            rep.below_envelope = false;
    }
    return rep;
}

}  // namespace muskat

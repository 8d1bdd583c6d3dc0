#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "muskat/evolve.hpp"
#include "muskat/spectral.hpp"

using namespace muskat;
constexpr double pi = std::numbers::pi;

namespace {

SimConfig small_config(int n, double amplitude, double t_end) {
    SimConfig cfg;
    cfg.grid = make_grid(pi, n);
    cfg.init.family = "sine";
    cfg.init.a = amplitude;
    cfg.init.k = 1.0;
    cfg.quad.truncation_radius = 2.0 * cfg.grid.half_length;
    cfg.t_end = t_end;
    cfg.output_stride = 16;
    return cfg;
}

}  // namespace

TEST_CASE("cfl_dt follows the step-size law") {
    SimConfig cfg = small_config(512, 0.0, 1.0);
    cfg.init.family = "constant";
    cfg.init.c = 0.0;
    const GridFunction flat = sample(cfg.init, cfg.grid);
    const double h = cfg.grid.spacing();
    CHECK(cfl_dt(flat, cfg) == doctest::Approx(0.1 * h / pi).epsilon(1e-14));

    cfg.cfl_safety = 0.05;
    CHECK(cfl_dt(flat, cfg) == doctest::Approx(0.05 * h / pi).epsilon(1e-14));
    CHECK(cfl_dt(flat, cfg) <= cfg.cfl_safety * h);

    cfg.cfl_safety = 0.7;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg.cfl_safety = 0.1;
    cfg.t_end = -1.0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("constants are exact steady states of the stepper") {
    SimConfig cfg = small_config(64, 0.0, 1.0);
    cfg.init.family = "constant";
    cfg.init.c = 0.8;
    SimState s;
    s.f = sample(cfg.init, cfg.grid);
    const Eigen::ArrayXd orig = s.f.values;
    const double dt = cfl_dt(s.f, cfg);
    for (int i = 0; i < 50; ++i) s = step(s, dt, cfg.quad);
    CHECK((s.f.values == orig).all());
}

TEST_CASE("one step commutes with grid translations") {
    SimConfig cfg = small_config(128, 0.1, 1.0);
    SimState s;
    s.f = sample(cfg.init, cfg.grid);
    const double dt = cfl_dt(s.f, cfg);
    SimState shifted;
    shifted.f = circular_shift(s.f, 23);
    const SimState a = step(shifted, dt, cfg.quad);
    const SimState b = step(s, dt, cfg.quad);
    const GridFunction bs = circular_shift(b.f, 23);
    CHECK((a.f.values - bs.values).abs().maxCoeff() <= 1e-12);
}

TEST_CASE("step preserves the spatial mean to rounding") {
    SimConfig cfg = small_config(128, 0.3, 1.0);
    SimState s;
    s.f = sample(cfg.init, cfg.grid);
    const double dt = cfl_dt(s.f, cfg);
    double mean_prev = grid_mean(s.f);
    for (int i = 0; i < 20; ++i) {
        s = step(s, dt, cfg.quad);
        const double mean_now = grid_mean(s.f);
        CHECK(std::abs(mean_now - mean_prev) <= 1e-12 * std::max(1.0, max_abs(s.f)));
        mean_prev = mean_now;
    }
}

TEST_CASE("observed time order of the stepper is at least 2.8") {
    SimConfig cfg = small_config(64, 0.3, 1.0);
    SimState s0;
    s0.f = sample(cfg.init, cfg.grid);
    const double T = 0.25;

    const auto integrate = [&](double dt) {
        SimState s = s0;
        while (s.t < T - 1e-14) {
            const double d = std::min(dt, T - s.t);
            s = step(s, d, cfg.quad);
        }
        return s.f.values;
    };

    const double dt0 = 0.02;
    const Eigen::ArrayXd ref = integrate(dt0 / 8);
    const double e1 = (integrate(dt0) - ref).abs().maxCoeff();
    const double e2 = (integrate(dt0 / 2) - ref).abs().maxCoeff();
    const double order = std::log2(e1 / e2);
    MESSAGE("observed SSP-RK3 order: ", order);
    CHECK(order >= 2.8);
}

TEST_CASE("zero data stays identically zero through run()") {
    SimConfig cfg = small_config(64, 0.0, 0.5);
    cfg.init.family = "constant";
    cfg.init.c = 0.0;
    const RunResult r = run(cfg);
    CHECK(r.events.empty());
    CHECK(!r.halted_on_event);
    for (const SeriesRow& row : r.series) {
        CHECK(row.sup_f == 0.0);
        CHECK(row.slope_B == 0.0);
        CHECK(row.m2 == 0.0);
        CHECK(row.minf == 0.0);
        CHECK(row.slack_p2 == 0.0);
    }
}

TEST_CASE("small-slope run obeys the discrete maximum principles") {
    SimConfig cfg = small_config(128, 0.01, 1.0);
    const RunResult r = run(cfg);
    REQUIRE(r.series.size() >= 3);
    for (std::size_t i = 1; i < r.series.size(); ++i) {
        const double dt_out = r.series[i].t - r.series[i - 1].t;
        CHECK(r.series[i].sup_f - r.series[i - 1].sup_f <= 1e-8 * dt_out);
        CHECK(r.series[i].m2 * r.series[i].m2 -
                  r.series[i - 1].m2 * r.series[i - 1].m2 <=
              1e-8 * dt_out);
        CHECK(r.series[i].slope_B - r.series[i - 1].slope_B <= 1e-8 * dt_out);
    }
    // Something actually decayed.
    CHECK(r.series.back().sup_f < 0.0099);
}

TEST_CASE("stability sweep: many steps on a = 0.3 sine stay finite and monotone") {
    SimConfig cfg = small_config(64, 0.3, 32.0);
    const RunResult r = run(cfg);
    CHECK(!r.halted_on_event);
    CHECK(r.final_state.step_index >= 10000);
    CHECK(r.final_state.f.values.allFinite());
    for (std::size_t i = 1; i < r.series.size(); ++i)
        CHECK(r.series[i].sup_f <= r.series[i - 1].sup_f + 1e-10);
}

TEST_CASE("observation stride does not alter the trajectory") {
    SimConfig a = small_config(64, 0.2, 0.3);
    a.output_stride = 1;
    SimConfig b = a;
    b.output_stride = 7;
    const RunResult ra = run(a);
    const RunResult rb = run(b);
    CHECK((ra.final_state.f.values == rb.final_state.f.values).all());
}

TEST_CASE("grid refinement changes the trajectory within the error model") {
    SimConfig coarse = small_config(64, 0.1, 1.0);
    SimConfig fine = small_config(128, 0.1, 1.0);
    const RunResult rc = run(coarse);
    const RunResult rf = run(fine);
    // Compare on the coarse nodes (fine grid contains them at even indices).
    double worst = 0.0;
    for (int j = 0; j < 64; ++j)
        worst = std::max(worst,
                         std::abs(rc.final_state.f.values[j] - rf.final_state.f.values[2 * j]));
    // Documented model: quadrature tail + time discretization, well under 1e-4
    // for this amplitude.
    CHECK(worst <= 1e-4);
}

TEST_CASE("nan injection hook raises the event and halts") {
    SimConfig cfg = small_config(64, 0.1, 1.0);
    cfg.inject_nan_at_step = 5;
    const RunResult r = run(cfg);
    CHECK(r.halted_on_event);
    REQUIRE(r.events.size() == 1);
    CHECK(r.events[0].kind == "nan_detected");
}

TEST_CASE("slope threshold event halts the run") {
    SimConfig cfg = small_config(64, 0.1, 1.0);
    cfg.slope_threshold = 0.01;  // below the initial slope of 0.1
    const RunResult r = run(cfg);
    CHECK(r.halted_on_event);
    REQUIRE(!r.events.empty());
    CHECK(r.events[0].kind == "slope_threshold");
}

TEST_CASE("twin divergence: zero perturbation, initial gap, envelope") {
    SimConfig cfg = small_config(128, 0.05, 2.0);
    cfg.output_stride = 32;

    const TwinReport zero = twin_divergence(cfg, 0.0);
    for (double d : zero.divergence) CHECK(d == 0.0);

    const double eps0 = 1e-6;
    const TwinReport rep = twin_divergence(cfg, eps0);
    CHECK(rep.initial_gap == doctest::Approx(eps0).epsilon(1e-9));
    CHECK(rep.divergence.front() == rep.initial_gap);
    CHECK(rep.below_envelope);
    CHECK(rep.epsilon > 0.0);
    CHECK(rep.B == doctest::Approx(0.05).epsilon(0.01));
}

#pragma once

#include <string>
#include <vector>

#include "muskat/diagnostics.hpp"
#include "muskat/grid.hpp"
#include "muskat/nonlocal.hpp"

namespace muskat {

struct SimConfig {
    Grid grid;
    InitialData init;
    QuadratureConfig quad;
    double cfl_safety = 0.1;
    double t_end = 10.0;
    int output_stride = 100;
    std::vector<double> ledger_exponents = {1.5, 2.0};
    double slope_threshold = 10.0;
    long inject_nan_at_step = -1;  // test hook: poison the state at this step

    void validate() const;
};

struct SimState {
    double t = 0.0;
    GridFunction f;
    long step_index = 0;
};

struct Event {
    double t = 0.0;
    std::string kind;  // slope_threshold | nan_detected | envelope_violation
    std::string payload;
};

using EventLog = std::vector<Event>;

struct SeriesRow {
    double t = 0.0;
    double sup_f = 0.0;
    double slope_B = 0.0;
    double m2 = 0.0;
    double minf = 0.0;
    double hhalf = 0.0;
    double envelope = 0.0;
    double slack_p2 = 0.0;
};

struct RunResult {
    std::vector<SeriesRow> series;
    std::vector<Metrics> metrics_series;  // one per series row, p in {1.5, 2, 3, inf}
    std::vector<std::vector<double>> ledger_slacks;  // per series row, one slack per ledger
    EventLog events;
    std::vector<Ledger> ledgers;
    SimState final_state;
    bool halted_on_event = false;
};

/// dt = cfl_safety * h * min(1, 1 + B^2) / pi with B the measured max slope.
double cfl_dt(const GridFunction& f, const SimConfig& cfg);

/// One three-stage strong-stability-preserving Runge-Kutta step.
SimState step(const SimState& s, double dt, const QuadratureConfig& q);

RunResult run(const SimConfig& cfg);

/// Twin-trajectory uniqueness probe: integrates the base data and a
/// perturbed copy, and compares their sup-norm gap against the Gronwall
/// envelope |g(0)| exp(2 B^2 t / eps), with eps the largest measured
/// distance at which the slope modulus stays below 1/2.
struct TwinReport {
    std::vector<double> times;
    std::vector<double> divergence;
    std::vector<double> envelope;
    double B = 0.0;
    double epsilon = 0.0;
    double initial_gap = 0.0;
    bool below_envelope = true;
};

TwinReport twin_divergence(const SimConfig& cfg, double eps0);

}  // namespace muskat

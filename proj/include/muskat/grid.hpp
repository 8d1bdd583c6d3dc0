#pragma once

#include <Eigen/Core>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace muskat {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Uniform periodic grid on [-L, L) with N = 2^k nodes, x_j = -L + j h.
struct Grid {
    double half_length = 0.0;  // L
    int node_count = 0;        // N

    double spacing() const { return 2.0 * half_length / node_count; }
    double node(int j) const { return -half_length + j * spacing(); }
    double period() const { return 2.0 * half_length; }

    bool operator==(const Grid&) const = default;
};

/// Samples of a real periodic function at the grid nodes.
struct GridFunction {
    Grid grid;
    Eigen::ArrayXd values;

    int size() const { return grid.node_count; }
};

/// Norm snapshot of one interface state: sup |f|, the maximal slope B,
/// the curvature norms M_p = ||f''||_{L^p} (p = inf allowed as a key),
/// and the H^{1/2} seminorm of f''.
struct Metrics {
    double sup_f = 0.0;
    double slope_B = 0.0;
    std::map<double, double> curvature_Mp;
    double hhalf = 0.0;
};

Grid make_grid(double half_length, int node_count);

/// Built-in initial-data families. "table" carries explicit node values.
struct InitialData {
    std::string family = "sine";  // sine | sum_of_sines | gaussian | constant | table
    double a = 1.0;               // amplitude (sine, gaussian)
    double k = 1.0;               // integer wavenumber (sine)
    double sigma = 0.5;           // gaussian width
    double c = 0.0;               // constant value
    std::vector<std::pair<double, double>> terms;  // (a, k) list for sum_of_sines
    std::vector<double> values;                    // table
};

GridFunction sample(const InitialData& spec, const Grid& grid);

/// (h sum |g|^p)^{1/p} over one period for finite p > 1, max |g| for p = inf.
/// p <= 1 is rejected.
double lp_norm(const GridFunction& g, double p);

double max_abs(const GridFunction& g);

/// Grid mean h sum g / (2L), computed with a balanced power-of-two tree so a
/// constant array has an exact mean.
double grid_mean(const GridFunction& g);

GridFunction constant_function(const Grid& grid, double c);

/// Circular shift by whole nodes: out_j = g_{j - shift}.
GridFunction circular_shift(const GridFunction& g, int shift);

/// Pointwise |g|^p.
GridFunction abs_power(const GridFunction& g, double p);

}  // namespace muskat

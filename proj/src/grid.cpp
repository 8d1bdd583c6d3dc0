#include "muskat/grid.hpp"

#include <cmath>

#include "muskat/summation.hpp"

namespace muskat {

namespace {

bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

double sample_gaussian_periodized(double x, double a, double sigma, double period) {
    // Wrapped sum over images; terms fall below 1e-18 of the peak quickly.
    double s = 0.0;
    for (int n = 0;; ++n) {
        const double tp = a * std::exp(-0.5 * std::pow((x - n * period) / sigma, 2));
        const double tm = n == 0 ? 0.0 : a * std::exp(-0.5 * std::pow((x + n * period) / sigma, 2));
        s += tp + tm;
        if (n > 0 && tp + tm < 1e-18 * std::abs(a)) break;
        if (n > 64) break;
    }
    return s;
}

}  // namespace

Grid make_grid(double half_length, int node_count) {
    if (!(half_length > 0.0))
        throw ConfigError("grid half_length must be positive, got " + std::to_string(half_length));
    if (node_count < 8 || !is_pow2(node_count))
        throw ConfigError("grid node_count must be a power of two >= 8, got " +
                          std::to_string(node_count));
    return Grid{half_length, node_count};
}

GridFunction sample(const InitialData& spec, const Grid& grid) {
    GridFunction g{grid, Eigen::ArrayXd::Zero(grid.node_count)};
    const int n = grid.node_count;
    if (spec.family == "sine") {
        for (int j = 0; j < n; ++j)
            g.values[j] = spec.a * std::sin(spec.k * grid.node(j));
    } else if (spec.family == "sum_of_sines") {
        for (int j = 0; j < n; ++j) {
            double v = 0.0;
            for (const auto& [a, k] : spec.terms) v += a * std::sin(k * grid.node(j));
            g.values[j] = v;
        }
    } else if (spec.family == "gaussian") {
        if (!(spec.sigma > 0.0)) throw ConfigError("gaussian sigma must be positive");
        for (int j = 0; j < n; ++j)
            g.values[j] = sample_gaussian_periodized(grid.node(j), spec.a, spec.sigma, grid.period());
    } else if (spec.family == "constant") {
        g.values.setConstant(spec.c);
    } else if (spec.family == "table") {
        if (static_cast<int>(spec.values.size()) != n)
            throw ConfigError("table length " + std::to_string(spec.values.size()) +
                              " does not match grid node_count " + std::to_string(n));
        for (int j = 0; j < n; ++j) g.values[j] = spec.values[static_cast<std::size_t>(j)];
    } else {
        throw ConfigError("unknown initial-data family \"" + spec.family + "\"");
    }
    return g;
}

double lp_norm(const GridFunction& g, double p) {
    if (std::isinf(p)) return max_abs(g);
    if (!(p > 1.0))
        throw std::invalid_argument("lp_norm requires p > 1 or p = inf, got " + std::to_string(p));
    CompensatedSum acc;
    for (int j = 0; j < g.size(); ++j) acc.add(std::pow(std::abs(g.values[j]), p));
    return std::pow(g.grid.spacing() * acc.total(), 1.0 / p);
}

double max_abs(const GridFunction& g) {
    return g.values.abs().maxCoeff();
}

double grid_mean(const GridFunction& g) {
    return tree_sum_pow2(g.values.data(), g.size()) / g.size();
}

GridFunction constant_function(const Grid& grid, double c) {
    return GridFunction{grid, Eigen::ArrayXd::Constant(grid.node_count, c)};
}

GridFunction circular_shift(const GridFunction& g, int shift) {
    const int n = g.size();
    GridFunction out{g.grid, Eigen::ArrayXd(n)};
    for (int j = 0; j < n; ++j) out.values[j] = g.values[((j - shift) % n + n) % n];
    return out;
}

GridFunction abs_power(const GridFunction& g, double p) {
    return GridFunction{g.grid, g.values.abs().pow(p)};
}

}  // namespace muskat

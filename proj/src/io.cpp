#include "muskat/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <set>

namespace muskat {

using nlohmann::json;

std::string format_full(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

RunConfig default_config() {
    RunConfig cfg;
    cfg.sim.grid = make_grid(std::numbers::pi, 512);
    cfg.sim.init.family = "sine";
    cfg.sim.init.a = 0.01;
    cfg.sim.init.k = 1.0;
    cfg.sim.t_end = 10.0;
    cfg.modulus.family = Modulus::Family::capped_power;
    cfg.modulus.K = 1.0;
    cfg.modulus.beta = 0.5;
    return cfg;
}

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw ConfigError("config key \"" + path + "\": " + what);
}

void check_keys(const json& j, const std::string& path, const std::set<std::string>& allowed) {
    if (!j.is_object()) fail(path, "expected an object");
    for (const auto& item : j.items())
        if (!allowed.count(item.key()))
            fail(path.empty() ? item.key() : path + "." + item.key(), "unknown key");
}

double get_num(const json& j, const std::string& path) {
    if (!j.is_number()) fail(path, "expected a number");
    return j.get<double>();
}

}  // namespace

RunConfig parse_config_json(const json& j) {
    RunConfig cfg = default_config();
    check_keys(j, "", {"grid", "init", "quadrature", "modulus", "cfl_safety", "t_end",
                       "output_stride", "ledger_exponents", "slope_threshold", "output_dir",
                       "seed", "test_hooks"});

    double half_length = std::numbers::pi;
    int node_count = 512;
    if (j.contains("grid")) {
        check_keys(j["grid"], "grid", {"N", "L"});
        if (j["grid"].contains("N")) node_count = static_cast<int>(get_num(j["grid"]["N"], "grid.N"));
        if (j["grid"].contains("L")) half_length = get_num(j["grid"]["L"], "grid.L");
    }
    cfg.sim.grid = make_grid(half_length, node_count);

    if (j.contains("init")) {
        const json& init = j["init"];
        check_keys(init, "init", {"family", "a", "k", "sigma", "c", "terms", "values"});
        if (init.contains("family")) {
            if (!init["family"].is_string()) fail("init.family", "expected a string");
            cfg.sim.init.family = init["family"].get<std::string>();
        }
        if (init.contains("a")) cfg.sim.init.a = get_num(init["a"], "init.a");
        if (init.contains("k")) cfg.sim.init.k = get_num(init["k"], "init.k");
        if (init.contains("sigma")) cfg.sim.init.sigma = get_num(init["sigma"], "init.sigma");
        if (init.contains("c")) cfg.sim.init.c = get_num(init["c"], "init.c");
        if (init.contains("terms")) {
            if (!init["terms"].is_array()) fail("init.terms", "expected an array of [a, k] pairs");
            cfg.sim.init.terms.clear();
            for (const auto& t : init["terms"]) {
                if (!t.is_array() || t.size() != 2) fail("init.terms", "expected [a, k] pairs");
                cfg.sim.init.terms.emplace_back(t[0].get<double>(), t[1].get<double>());
            }
        }
        if (init.contains("values")) {
            if (!init["values"].is_array()) fail("init.values", "expected an array");
            cfg.sim.init.values = init["values"].get<std::vector<double>>();
        }
    }

    if (j.contains("quadrature")) {
        const json& q = j["quadrature"];
        check_keys(q, "quadrature", {"alpha_spacing", "truncation_radius", "tail_correction"});
        if (q.contains("alpha_spacing"))
            cfg.sim.quad.alpha_spacing = get_num(q["alpha_spacing"], "quadrature.alpha_spacing");
        if (q.contains("truncation_radius"))
            cfg.sim.quad.truncation_radius =
                get_num(q["truncation_radius"], "quadrature.truncation_radius");
        if (q.contains("tail_correction")) {
            if (!q["tail_correction"].is_boolean()) fail("quadrature.tail_correction", "expected a bool");
            cfg.sim.quad.tail_correction = q["tail_correction"].get<bool>();
        }
    }

    if (j.contains("modulus")) {
        const json& m = j["modulus"];
        check_keys(m, "modulus", {"family", "K", "beta", "cap", "d", "v"});
        if (m.contains("family")) {
            const std::string fam = m["family"].get<std::string>();
            if (fam == "power")
                cfg.modulus.family = Modulus::Family::power;
            else if (fam == "capped-power")
                cfg.modulus.family = Modulus::Family::capped_power;
            else if (fam == "table")
                cfg.modulus.family = Modulus::Family::table;
            else
                fail("modulus.family", "expected power | capped-power | table");
        }
        if (m.contains("K")) cfg.modulus.K = get_num(m["K"], "modulus.K");
        if (m.contains("beta")) cfg.modulus.beta = get_num(m["beta"], "modulus.beta");
        if (m.contains("cap")) {
            cfg.modulus.cap = get_num(m["cap"], "modulus.cap");
            cfg.modulus_cap_auto = false;
        }
        if (m.contains("d")) cfg.modulus.table_d = m["d"].get<std::vector<double>>();
        if (m.contains("v")) cfg.modulus.table_v = m["v"].get<std::vector<double>>();
    }

    if (j.contains("cfl_safety")) cfg.sim.cfl_safety = get_num(j["cfl_safety"], "cfl_safety");
    if (j.contains("t_end")) cfg.sim.t_end = get_num(j["t_end"], "t_end");
    if (j.contains("output_stride"))
        cfg.sim.output_stride = static_cast<int>(get_num(j["output_stride"], "output_stride"));
    if (j.contains("ledger_exponents"))
        cfg.sim.ledger_exponents = j["ledger_exponents"].get<std::vector<double>>();
    if (j.contains("slope_threshold"))
        cfg.sim.slope_threshold = get_num(j["slope_threshold"], "slope_threshold");
    if (j.contains("output_dir")) cfg.output_dir = j["output_dir"].get<std::string>();
    if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();

    if (j.contains("test_hooks")) {
        const json& hooks = j["test_hooks"];
        check_keys(hooks, "test_hooks", {"inject_nan_at_step", "corrupt_bounds_factor"});
        if (hooks.contains("inject_nan_at_step"))
            cfg.sim.inject_nan_at_step =
                static_cast<long>(get_num(hooks["inject_nan_at_step"], "test_hooks.inject_nan_at_step"));
        if (hooks.contains("corrupt_bounds_factor"))
            cfg.corrupt_bounds_factor =
                get_num(hooks["corrupt_bounds_factor"], "test_hooks.corrupt_bounds_factor");
    }

    cfg.sim.validate();
    return cfg;
}

RunConfig parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw ConfigError("config " + path + " is not valid JSON: " + std::string(e.what()));
    }
    return parse_config_json(j);
}

json effective_config(const RunConfig& cfg) {
    json j;
    j["grid"] = {{"N", cfg.sim.grid.node_count}, {"L", cfg.sim.grid.half_length}};
    json init = {{"family", cfg.sim.init.family}};
    if (cfg.sim.init.family == "sine") {
        init["a"] = cfg.sim.init.a;
        init["k"] = cfg.sim.init.k;
    } else if (cfg.sim.init.family == "gaussian") {
        init["a"] = cfg.sim.init.a;
        init["sigma"] = cfg.sim.init.sigma;
    } else if (cfg.sim.init.family == "constant") {
        init["c"] = cfg.sim.init.c;
    } else if (cfg.sim.init.family == "sum_of_sines") {
        json terms = json::array();
        for (const auto& [a, k] : cfg.sim.init.terms) terms.push_back({a, k});
        init["terms"] = terms;
    } else if (cfg.sim.init.family == "table") {
        init["values"] = cfg.sim.init.values;
    }
    j["init"] = init;
    j["quadrature"] = {{"alpha_spacing", cfg.sim.quad.spacing_for(cfg.sim.grid)},
                       {"truncation_radius", cfg.sim.quad.radius_for(cfg.sim.grid)},
                       {"tail_correction", cfg.sim.quad.tail_correction}};
    json mod;
    switch (cfg.modulus.family) {
        case Modulus::Family::power:
            mod["family"] = "power";
            break;
        case Modulus::Family::capped_power:
            mod["family"] = "capped-power";
            break;
        case Modulus::Family::table:
            mod["family"] = "table";
            break;
    }
    if (cfg.modulus.family != Modulus::Family::table) {
        mod["K"] = cfg.modulus.K;
        mod["beta"] = cfg.modulus.beta;
        if (!cfg.modulus_cap_auto) mod["cap"] = cfg.modulus.cap;
    } else {
        mod["d"] = cfg.modulus.table_d;
        mod["v"] = cfg.modulus.table_v;
    }
    j["modulus"] = mod;
    j["cfl_safety"] = cfg.sim.cfl_safety;
    j["t_end"] = cfg.sim.t_end;
    j["output_stride"] = cfg.sim.output_stride;
    j["ledger_exponents"] = cfg.sim.ledger_exponents;
    j["slope_threshold"] = cfg.sim.slope_threshold;
    j["output_dir"] = cfg.output_dir;
    j["seed"] = cfg.seed;
    return j;
}

void write_csv(const std::string& path, const GridFunction& g) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "x,value\n";
    for (int j = 0; j < g.size(); ++j)
        out << format_full(g.grid.node(j)) << ',' << format_full(g.values[j]) << '\n';
    if (!out) throw std::runtime_error("write failure on " + path);
}

GridFunction read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::string line;
    if (!std::getline(in, line) || line.rfind("x,value", 0) != 0)
        throw std::runtime_error(path + ": expected header \"x,value\"");
    std::vector<double> xs, vs;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw std::runtime_error(path + ": malformed row " + line);
        xs.push_back(std::stod(line.substr(0, comma)));
        vs.push_back(std::stod(line.substr(comma + 1)));
    }
    const int n = static_cast<int>(xs.size());
    if (n < 8) throw std::runtime_error(path + ": too few rows for a grid");
    const double L = -xs[0];
    const Grid grid = make_grid(L, n);
    for (int j = 0; j < n; ++j)
        if (std::abs(xs[static_cast<std::size_t>(j)] - grid.node(j)) > 1e-9 * std::max(1.0, L))
            throw std::runtime_error(path + ": x column is not the uniform grid of [-L, L)");
    GridFunction g{grid, Eigen::ArrayXd(n)};
    for (int j = 0; j < n; ++j) g.values[j] = vs[static_cast<std::size_t>(j)];
    return g;
}

void write_series_csv(const std::string& path, const std::vector<SeriesRow>& rows) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "t,sup_f,B,M_2,M_inf,hhalf,envelope,ledger_slack_p2\n";
    for (const SeriesRow& r : rows)
        out << format_full(r.t) << ',' << format_full(r.sup_f) << ',' << format_full(r.slope_B)
            << ',' << format_full(r.m2) << ',' << format_full(r.minf) << ','
            << format_full(r.hhalf) << ',' << format_full(r.envelope) << ','
            << format_full(r.slack_p2) << '\n';
    if (!out) throw std::runtime_error("write failure on " + path);
}

void write_events_json(const std::string& path, const EventLog& events) {
    json arr = json::array();
    for (const Event& e : events)
        arr.push_back({{"t", e.t}, {"kind", e.kind}, {"payload", e.payload}});
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << arr.dump(2) << '\n';
}

json reports_to_json(const std::vector<CheckReport>& reports) {
    json arr = json::array();
    for (const CheckReport& r : reports) {
        json item = {{"name", r.name},
                     {"pass", r.pass},
                     {"worst_margin", r.worst_margin},
                     {"worst_location", r.worst_location},
                     {"tolerance", r.tolerance}};
        if (r.skipped) item["skipped"] = true;
        if (!r.note.empty()) item["note"] = r.note;
        arr.push_back(item);
    }
    return arr;
}

void write_report_json(const std::string& path, const std::vector<CheckReport>& reports) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << reports_to_json(reports).dump(2) << '\n';
}

}  // namespace muskat

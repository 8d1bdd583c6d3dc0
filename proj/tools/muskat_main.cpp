// Command-line harness: simulate the interface, run verification suites,
// evaluate single operators on CSV data, and sweep parameter grids.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "muskat/evolve.hpp"
#include "muskat/io.hpp"
#include "muskat/spectral.hpp"
#include "muskat/suites.hpp"

namespace fs = std::filesystem;
using namespace muskat;
using nlohmann::json;

namespace {

int cmd_simulate(const std::string& config_path) {
    RunConfig cfg;
    try {
        cfg = parse_config(config_path);
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    }
    try {
        fs::create_directories(cfg.output_dir);
        const RunResult res = run(cfg.sim);
        write_series_csv((fs::path(cfg.output_dir) / "series.csv").string(), res.series);
        write_events_json((fs::path(cfg.output_dir) / "events.json").string(), res.events);
        write_csv((fs::path(cfg.output_dir) / "final.csv").string(), res.final_state.f);
        {
            std::ofstream out(fs::path(cfg.output_dir) / "config.effective.json");
            out << effective_config(cfg).dump(2) << '\n';
        }
        std::cout << "simulate: t_end=" << res.final_state.t
                  << " steps=" << res.final_state.step_index
                  << (res.halted_on_event ? " (halted on event)" : "") << '\n';
        return res.halted_on_event ? 2 : 0;
    } catch (const std::exception& e) {
        std::cerr << "simulate failed: " << e.what() << '\n';
        return 1;
    }
}

int cmd_verify(const std::string& config_path, const std::string& suite) {
    RunConfig cfg;
    try {
        cfg = config_path.empty() ? default_config() : parse_config(config_path);
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    }
    try {
        const auto reports = run_suite(suite, cfg);
        fs::create_directories(cfg.output_dir);
        write_report_json((fs::path(cfg.output_dir) / "report.json").string(), reports);
        bool all_pass = true;
        for (const auto& rep : reports) {
            std::cout << (rep.skipped ? "SKIP " : (rep.pass ? "PASS " : "FAIL ")) << rep.name
                      << "  margin=" << rep.worst_margin << " tol=" << rep.tolerance;
            if (!rep.note.empty()) std::cout << "  (" << rep.note << ')';
            std::cout << '\n';
            if (!rep.skipped && !rep.pass) all_pass = false;
        }
        return all_pass ? 0 : 1;
    } catch (const std::exception& e) {
        std::cerr << "verify failed: " << e.what() << '\n';
        return 1;
    }
}

int cmd_op(const std::string& name, const std::string& in_path, const std::string& with_path,
           const std::string& out_path, double p, int term, double alpha_spacing,
           double truncation_radius) {
    try {
        const GridFunction g = read_csv(in_path);
        QuadratureConfig q;
        q.alpha_spacing = alpha_spacing;
        q.truncation_radius = truncation_radius;
        GridFunction f = g;
        if (!with_path.empty()) {
            f = read_csv(with_path);
            if (!(f.grid == g.grid)) {
                std::cerr << "op: grid mismatch between --in and --with\n";
                return 1;
            }
        }
        GridFunction out{g.grid, Eigen::ArrayXd()};
        if (name == "lambda") {
            out = lambda_op(g);
        } else if (name == "hilbert") {
            out = hilbert(g);
        } else if (name == "velocity") {
            out = velocity(g, q);
        } else if (name == "rhs") {
            out = muskat_rhs(g, q);
        } else if (name == "Lf") {
            out = apply_Lf(f, g, q);
        } else if (name == "Df") {
            out = apply_Df(f, g, q);
        } else if (name == "Dp") {
            out = apply_Dp(f, g, p, q);
        } else if (name == "tterms") {
            const TTerms t = t_terms(g, q);
            const GridFunction* pick[5] = {&t.t1, &t.t2, &t.t3, &t.t4, &t.t5};
            if (term < 1 || term > 5) {
                std::cerr << "op tterms: --term must be 1..5\n";
                return 1;
            }
            out = *pick[term - 1];
        } else {
            std::cerr << "op: unknown operator \"" << name
                      << "\" (lambda | hilbert | velocity | rhs | Lf | Df | Dp | tterms)\n";
            return 1;
        }
        write_csv(out_path, out);
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "op failed: " << e.what() << '\n';
        return 1;
    }
}

int cmd_sweep(const std::string& config_path, const std::string& grid_spec) {
    RunConfig base;
    json grid_json;
    try {
        base = config_path.empty() ? default_config() : parse_config(config_path);
        if (fs::exists(grid_spec)) {
            std::ifstream in(grid_spec);
            in >> grid_json;
        } else {
            grid_json = json::parse(grid_spec);
        }
        if (!grid_json.is_object() || grid_json.empty())
            throw ConfigError("sweep grid must be a nonempty object of key -> value list");
    } catch (const std::exception& e) {
        std::cerr << "sweep setup error: " << e.what() << '\n';
        return 1;
    }

    // Cartesian product over the listed keys; values are applied onto the
    // effective base config by dotted path.
    std::vector<std::string> keys;
    std::vector<std::vector<json>> values;
    for (const auto& item : grid_json.items()) {
        keys.push_back(item.key());
        if (!item.value().is_array() || item.value().empty()) {
            std::cerr << "sweep: key " << item.key() << " must map to a nonempty array\n";
            return 1;
        }
        values.push_back(std::vector<json>(item.value().begin(), item.value().end()));
    }

    fs::create_directories(base.output_dir);
    std::ofstream sweep_csv(fs::path(base.output_dir) / "sweep.csv");
    sweep_csv << "run";
    for (const auto& k : keys) sweep_csv << ',' << k;
    sweep_csv << ",final_B,final_M_inf,max_envelope_slack,event\n";

    std::vector<std::size_t> idx(keys.size(), 0);
    int run_no = 0;
    bool done = false;
    while (!done) {
        json patch = effective_config(base);
        for (std::size_t i = 0; i < keys.size(); ++i) {
            json* node = &patch;
            std::string path = keys[i];
            std::size_t dot;
            while ((dot = path.find('.')) != std::string::npos) {
                node = &(*node)[path.substr(0, dot)];
                path = path.substr(dot + 1);
            }
            (*node)[path] = values[i][idx[i]];
        }
        sweep_csv << run_no;
        for (std::size_t i = 0; i < keys.size(); ++i) sweep_csv << ',' << values[i][idx[i]].dump();
        try {
            RunConfig cfg = parse_config_json(patch);
            cfg.output_dir =
                (fs::path(base.output_dir) / ("run_" + std::to_string(run_no))).string();
            fs::create_directories(cfg.output_dir);
            const RunResult res = run(cfg.sim);
            write_series_csv((fs::path(cfg.output_dir) / "series.csv").string(), res.series);
            write_events_json((fs::path(cfg.output_dir) / "events.json").string(), res.events);
            double max_slack = -std::numeric_limits<double>::infinity();
            for (const SeriesRow& r : res.series)
                max_slack = std::max(max_slack, r.envelope + 1e-6 - r.minf);
            sweep_csv << ',' << format_full(res.series.back().slope_B) << ','
                      << format_full(res.series.back().minf) << ',' << format_full(max_slack)
                      << ',' << (res.events.empty() ? "none" : res.events.front().kind) << '\n';
        } catch (const std::exception& e) {
            sweep_csv << ",nan,nan,nan,error:" << e.what() << '\n';
        }
        ++run_no;
        done = true;
        for (std::size_t i = 0; i < idx.size(); ++i) {
            if (++idx[i] < values[i].size()) {
                done = false;
                break;
            }
            idx[i] = 0;
        }
    }
    std::cout << "sweep: " << run_no << " runs\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical laboratory for the 1D porous-medium interface equation"};
    app.require_subcommand(1);

    std::string config_path, suite_name, op_name, in_path, with_path, out_path, grid_spec;
    double p = 1.5, alpha_spacing = 0.0, truncation_radius = 0.0;
    int term = 1;

    auto* sim = app.add_subcommand("simulate", "integrate the interface and write series/events");
    sim->add_option("--config", config_path, "JSON configuration")->required();

    auto* ver = app.add_subcommand("verify", "run a verification suite and write report.json");
    ver->add_option("--suite", suite_name, "operators | bounds | theorems")->required();
    ver->add_option("--config", config_path, "JSON configuration (defaults used when omitted)");

    auto* op = app.add_subcommand("op", "apply one operator to CSV data");
    op->add_option("--name", op_name, "lambda | hilbert | velocity | rhs | Lf | Df | Dp | tterms")
        ->required();
    op->add_option("--in", in_path, "input CSV (x,value); the g argument for Lf/Df/Dp")
        ->required();
    op->add_option("--with", with_path, "background f CSV for Lf/Df/Dp");
    op->add_option("--out", out_path, "output CSV")->required();
    op->add_option("--p", p, "exponent for Dp");
    op->add_option("--term", term, "which T term for tterms (1..5)");
    op->add_option("--alpha-spacing", alpha_spacing, "quadrature alpha spacing (default: grid h)");
    op->add_option("--truncation-radius", truncation_radius, "quadrature radius (default: 8L)");

    auto* sw = app.add_subcommand("sweep", "run a cartesian parameter grid");
    sw->add_option("--config", config_path, "JSON base configuration");
    sw->add_option("--grid", grid_spec, "JSON object or file: key -> list of values")->required();

    CLI11_PARSE(app, argc, argv);

    if (sim->parsed()) return cmd_simulate(config_path);
    if (ver->parsed()) return cmd_verify(config_path, suite_name);
    if (op->parsed())
        return cmd_op(op_name, in_path, with_path, out_path, p, term, alpha_spacing,
                      truncation_radius);
    if (sw->parsed()) return cmd_sweep(config_path, grid_spec);
    return 1;
}

#pragma once

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gfc/gfc.hpp"

namespace gfc::cli {

using nlohmann::json;

struct RunConfig {
    std::string kernel_spec;
    double lambda = 1.0;
    double t_min = 0.1;
    double t_max = 10.0;
    int t_points = 50;
    std::string method = "contour"; // contour | direct | subordination | all
    std::string format = "csv";     // csv | json
    std::string out_path = "-";
    int steps = 4096;
    double grading = 2.0;
    double mlf_alpha = 0.5;
    double mlf_z = 0.0;
};

namespace detail {

inline std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline bool quiet() {
    const char* q = std::getenv("GFC_QUIET");
    return q != nullptr && std::string(q) == "1";
}

inline void progress(std::ostream& err, const std::string& msg) {
    if (!quiet()) err << msg << "\n";
}

inline std::vector<double> log_grid(double lo, double hi, int n) {
    if (!(lo > 0.0) || !(lo < hi)) throw input_error("need 0 < t-min < t-max");
    if (n < 2) throw input_error("t-points must be >= 2");
    std::vector<double> g(n);
    double step = std::log(hi / lo) / (n - 1);
    for (int i = 0; i < n; ++i) g[i] = lo * std::exp(step * i);
    g.back() = hi;
    return g;
}

inline json config_json(const RunConfig& cfg, const KernelSymbol& sym) {
    return json{{"kernel", cfg.kernel_spec}, {"kernel_resolved", sym.describe()},
                {"lambda", cfg.lambda},      {"t_min", cfg.t_min},
                {"t_max", cfg.t_max},        {"t_points", cfg.t_points},
                {"method", cfg.method},      {"format", cfg.format},
                {"steps", cfg.steps},        {"grading", cfg.grading}};
}

struct OutputTarget {
    std::ostream& stream;
    std::unique_ptr<std::ofstream> file;

    static OutputTarget open(const std::string& path, std::ostream& fallback) {
        if (path == "-" || path.empty()) return {fallback, nullptr};
        auto f = std::make_unique<std::ofstream>(path);
        if (!*f) throw input_error("cannot open output file '" + path + "'");
        std::ostream& ref = *f;
        return {ref, std::move(f)};
    }
};

inline int cmd_kernel_check(const RunConfig& cfg, std::ostream& out,
                            std::ostream& err) {
    KernelSymbol sym = load_kernel_spec(cfg.kernel_spec);
    progress(err, "checking kernel " + sym.describe());
    AdmissibilityReport rep = check_admissibility(sym);
    json j;
    j["kernel"] = sym.describe();
    j["k_limits_ok"] = rep.k_limits_ok;
    j["phi_limits_ok"] = rep.phi_limits_ok;
    j["tail_integrable"] = rep.tail_integrable;
    if (rep.tail_integrable)
        j["tail_integral"] = rep.tail_integral;
    else
        j["tail_integral"] = "divergent";
    j["samples"] = {{"p", rep.sample_p}, {"K", rep.sample_K}, {"phi", rep.sample_phi}};
    j["notes"] = rep.notes;
    j["admissible"] = rep.admissible();
    OutputTarget target = OutputTarget::open(cfg.out_path, out);
    target.stream << j.dump(2) << "\n";
    return rep.admissible() ? 0 : 2;
}

struct RouteValues {
    std::vector<double> u;
};

inline RouteValues route_contour(const KernelSymbol& sym, const RunConfig& cfg,
                                 const std::vector<double>& grid) {
    GrowthSolution sol = solve_growth(sym, cfg.lambda, grid);
    RouteValues rv;
    for (size_t i = 0; i < grid.size(); ++i)
        rv.u.push_back(sol.log_space ? std::exp(sol.values[i]) : sol.values[i]);
    return rv;
}

inline RouteValues route_direct(const KernelSymbol& sym, const RunConfig& cfg,
                                const std::vector<double>& grid) {
    MeshSpec mesh{cfg.t_max, cfg.steps, cfg.grading};
    StepSolution sol = solve_growth_direct(sym, cfg.lambda, mesh);
    RouteValues rv;
    for (double t : grid) rv.u.push_back(sol.value_at(t));
    return rv;
}

inline RouteValues route_subordination(const KernelSymbol& sym,
                                       const RunConfig& cfg,
                                       const std::vector<double>& grid) {
    RouteValues rv;
    for (double t : grid)
        rv.u.push_back(growth_via_subordination(sym, cfg.lambda, t));
    return rv;
}

inline int cmd_solve(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    KernelSymbol sym = load_kernel_spec(cfg.kernel_spec);
    std::vector<double> grid = log_grid(cfg.t_min, cfg.t_max, cfg.t_points);
    double p0 = p0_of_lambda(sym, cfg.lambda).p0;
    OutputTarget target = OutputTarget::open(cfg.out_path, out);
    std::ostream& os = target.stream;

    if (cfg.method == "all") {
        progress(err, "solving by contour, direct and subordination routes");
        RouteValues a = route_contour(sym, cfg, grid);
        RouteValues b = route_direct(sym, cfg, grid);
        RouteValues c = route_subordination(sym, cfg, grid);
        double worst = 0.0;
        std::vector<double> disc(grid.size());
        for (size_t i = 0; i < grid.size(); ++i) {
            double lo = std::min({a.u[i], b.u[i], c.u[i]});
            double hi = std::max({a.u[i], b.u[i], c.u[i]});
            disc[i] = (hi - lo) / std::max(std::abs(hi), 1e-300);
            worst = std::max(worst, disc[i]);
        }
        if (cfg.format == "json") {
            json j;
            j["config"] = config_json(cfg, sym);
            j["p0"] = p0;
            j["t"] = grid;
            j["u_contour"] = a.u;
            j["u_direct"] = b.u;
            j["u_subordination"] = c.u;
            j["max_rel_discrepancy"] = worst;
            os << j.dump(2) << "\n";
        } else {
            os << "t,u_contour,u_direct,u_subordination,max_rel_discrepancy\n";
            for (size_t i = 0; i < grid.size(); ++i)
                os << fmt17(grid[i]) << "," << fmt17(a.u[i]) << ","
                   << fmt17(b.u[i]) << "," << fmt17(c.u[i]) << ","
                   << fmt17(disc[i]) << "\n";
        }
        return 0;
    }

    RouteValues rv;
    if (cfg.method == "contour")
        rv = route_contour(sym, cfg, grid);
    else if (cfg.method == "direct")
        rv = route_direct(sym, cfg, grid);
    else if (cfg.method == "subordination")
        rv = route_subordination(sym, cfg, grid);
    else
        throw input_error("unknown method '" + cfg.method + "'");

    if (cfg.format == "json") {
        json rows = json::array();
        for (size_t i = 0; i < grid.size(); ++i)
            rows.push_back({{"t", grid[i]},
                            {"u", rv.u[i]},
                            {"normalized", rv.u[i] * std::exp(-p0 * grid[i])}});
        json j;
        j["config"] = config_json(cfg, sym);
        j["p0"] = p0;
        j["rows"] = rows;
        os << j.dump(2) << "\n";
    } else {
        os << "t,u,normalized,method\n";
        for (size_t i = 0; i < grid.size(); ++i)
            os << fmt17(grid[i]) << "," << fmt17(rv.u[i]) << ","
               << fmt17(rv.u[i] * std::exp(-p0 * grid[i])) << "," << cfg.method
               << "\n";
    }
    return 0;
}

inline int cmd_asymptote(const RunConfig& cfg, std::ostream& out,
                         std::ostream& err) {
    KernelSymbol sym = load_kernel_spec(cfg.kernel_spec);
    progress(err, "locating the growth rate for " + sym.describe());
    RootResult root = p0_of_lambda(sym, cfg.lambda);
    double dphi = sym.phi_prime(root.p0);
    double amplitude = cfg.lambda / (dphi * root.p0);
    OutputTarget target = OutputTarget::open(cfg.out_path, out);
    if (cfg.format == "csv") {
        target.stream << "p0,phi_prime_p0,amplitude\n"
                      << fmt17(root.p0) << "," << fmt17(dphi) << ","
                      << fmt17(amplitude) << "\n";
    } else {
        json j;
        j["config"] = config_json(cfg, sym);
        j["p0"] = root.p0;
        j["phi_prime_p0"] = dphi;
        j["amplitude"] = amplitude;
        j["residual"] = root.residual;
        j["iterations"] = root.iterations;
        target.stream << j.dump(2) << "\n";
    }
    return 0;
}

inline int cmd_subordinate(const RunConfig& cfg, std::ostream& out,
                           std::ostream& err) {
    KernelSymbol sym = load_kernel_spec(cfg.kernel_spec);
    double t = cfg.t_min;
    if (!(t > 0.0)) throw input_error("subordinate: slice time must be > 0");
    progress(err, "inverting the subordination kernel at t=" + fmt17(t));
    std::vector<double> grid = default_subordination_grid(sym, cfg.t_points);
    SubordinationSlice slice = subordination_kernel(sym, t, grid);
    OutputTarget target = OutputTarget::open(cfg.out_path, out);
    std::ostream& os = target.stream;
    if (cfg.format == "json") {
        json j;
        j["config"] = config_json(cfg, sym);
        j["t"] = t;
        j["s"] = slice.s_grid;
        j["G"] = slice.g_values;
        j["mass"] = slice.mass;
        j["min"] = slice.min_value;
        j["head_mass"] = slice.head_mass;
        j["tail_mass"] = slice.tail_mass;
        j["failed_points"] = slice.failed_points;
        os << j.dump(2) << "\n";
    } else {
        os << "s,G\n";
        for (size_t i = 0; i < slice.s_grid.size(); ++i)
            os << fmt17(slice.s_grid[i]) << "," << fmt17(slice.g_values[i]) << "\n";
        os << "# mass=" << fmt17(slice.mass) << " min=" << fmt17(slice.min_value)
           << " head=" << fmt17(slice.head_mass)
           << " tail=" << fmt17(slice.tail_mass)
           << " failed=" << slice.failed_points << "\n";
    }
    return slice.failed_points == 0 ? 0 : 2;
}

inline int cmd_mlf(const RunConfig& cfg, std::ostream& out) {
    MLParams params;
    params.alpha = cfg.mlf_alpha;
    OutputTarget target = OutputTarget::open(cfg.out_path, out);
    target.stream << fmt17(mittag_leffler(params, cfg.mlf_z)) << "\n";
    return 0;
}

} // namespace detail

// Entry point shared by the binary and the CLI tests. args excludes argv[0].
inline int run(std::vector<std::string> args, std::ostream& out,
               std::ostream& err) {
    RunConfig cfg;
    CLI::App app{"growth and relaxation solvers for convolution-kernel "
                 "fractional derivatives"};
    app.require_subcommand(1);

    auto add_kernel = [&](CLI::App* sub) {
        sub->add_option("--kernel", cfg.kernel_spec,
                        "kernel spec file or inline 'key=value; ...' spec")
            ->required();
    };
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--lambda", cfg.lambda, "growth coefficient (> 0)");
        sub->add_option("--t-min", cfg.t_min, "first grid time");
        sub->add_option("--t-max", cfg.t_max, "last grid time");
        sub->add_option("--t-points", cfg.t_points, "grid size");
        sub->add_option("--format", cfg.format, "csv or json")
            ->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--out", cfg.out_path, "output path, '-' for stdout");
    };

    CLI::App* kernel = app.add_subcommand("kernel", "kernel admissibility tools");
    kernel->require_subcommand(1);
    CLI::App* kernel_check =
        kernel->add_subcommand("check", "screen a kernel and report the limits");
    add_kernel(kernel_check);
    kernel_check->add_option("--out", cfg.out_path, "output path");

    CLI::App* solve = app.add_subcommand("solve", "solve the growth problem");
    add_kernel(solve);
    add_common(solve);
    solve->add_option("--method", cfg.method, "contour, direct, subordination, all")
        ->check(CLI::IsMember({"contour", "direct", "subordination", "all"}));
    solve->add_option("--steps", cfg.steps, "direct-solver mesh steps");
    solve->add_option("--grading", cfg.grading, "direct-solver mesh grading");

    CLI::App* asym = app.add_subcommand(
        "asymptote", "growth rate p0, phi'(p0) and the leading amplitude");
    add_kernel(asym);
    asym->add_option("--lambda", cfg.lambda, "growth coefficient (> 0)");
    asym->add_option("--format", cfg.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    asym->add_option("--out", cfg.out_path, "output path");

    CLI::App* subord = app.add_subcommand(
        "subordinate", "emit one time slice of the subordination kernel");
    add_kernel(subord);
    subord->add_option("--t-min", cfg.t_min, "slice time t");
    subord->add_option("--t-points", cfg.t_points, "s-grid size");
    subord->add_option("--format", cfg.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    subord->add_option("--out", cfg.out_path, "output path");

    CLI::App* mlf_cmd =
        app.add_subcommand("mlf", "evaluate the Mittag-Leffler function");
    mlf_cmd->add_option("alpha", cfg.mlf_alpha, "order in (0, 1]")->required();
    mlf_cmd->add_option("z", cfg.mlf_z, "argument")->required();
    mlf_cmd->add_option("--out", cfg.out_path, "output path");

    CLI::App* compare = app.add_subcommand(
        "compare", "cross-check every solution route on one grid");
    add_kernel(compare);
    add_common(compare);
    compare->add_option("--steps", cfg.steps, "direct-solver mesh steps");
    compare->add_option("--grading", cfg.grading, "direct-solver mesh grading");

    try {
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? 0 : 1;
    }

    try {
        if (app.got_subcommand(kernel))
            return detail::cmd_kernel_check(cfg, out, err);
        if (app.got_subcommand(solve)) return detail::cmd_solve(cfg, out, err);
        if (app.got_subcommand(asym)) {
            if (!asym->count("--format")) cfg.format = "json";
            return detail::cmd_asymptote(cfg, out, err);
        }
        if (app.got_subcommand(subord)) {
            if (!subord->count("--t-points")) cfg.t_points = 200;
            return detail::cmd_subordinate(cfg, out, err);
        }
        if (app.got_subcommand(mlf_cmd)) return detail::cmd_mlf(cfg, out);
        if (app.got_subcommand(compare)) {
            cfg.method = "all";
            return detail::cmd_solve(cfg, out, err);
        }
    } catch (const input_error& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}

} // namespace gfc::cli

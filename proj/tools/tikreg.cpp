// tikreg: experiment runner for the regularization lab. Subcommands:
//   matrix-demo  — condition-number study of the 2x2 example matrix
//   ocp          — solve the control problem (exact / crab / direct)
//   sweep        — cross-product of methods x eps x seeds with a summary CSV
//
// Exit codes: 0 success, 2 invalid arguments, 3 numeric failure,
// 4 partial sweep failure.

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "tikreg/crab.hpp"
#include "tikreg/direct.hpp"
#include "tikreg/eigen.hpp"
#include "tikreg/io.hpp"
#include "tikreg/ocp.hpp"
#include "tikreg/sim.hpp"
#include "tikreg/svg.hpp"
#include "tikreg/tikhonov.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace tikreg;
using Clock = std::chrono::steady_clock;

namespace {

constexpr const char* kVersion = "tikreg-lab 1.0";

struct RunReport {
    std::string command;
    json parameters = json::object();
    std::vector<std::string> outputs;
    json timings = json::object();
    std::uint64_t seed = 0;

    json to_json() const {
        return json{{"command", command}, {"parameters", parameters},
                    {"outputs", outputs},  {"timings", timings},
                    {"versions", json{{"artifact", kVersion}, {"seed", seed}}}};
    }
};

void write_report(const fs::path& dir, const RunReport& rep) {
    write_text_atomic(dir / "run_report.json", rep.to_json().dump(2) + "\n");
}

std::size_t worker_count() {
    if (const char* env = std::getenv("TIKREG_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<std::size_t>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

SymMatrix example_matrix(double mu) {
    SymMatrix a(2);
    a.set(0, 0, 1.0);
    a.set(0, 1, 1.0);
    a.set(1, 1, 1.0 + mu);
    return a;
}

Vec linspace(double a, double b, std::size_t n) {
    Vec g(n);
    for (std::size_t i = 0; i < n; ++i)
        g[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
    return g;
}

std::string csv_header(const std::string& columns) {
    return std::string(kCsvSchemaHeader) + "\n" + columns + "\n";
}

// ------------------------------------------------------------------ matrix

int cmd_matrix_demo(double mu, double eps, const fs::path& out_dir) {
    fs::create_directories(out_dir);
    RunReport rep;
    rep.command = "matrix-demo";
    rep.parameters = {{"mu", mu}, {"eps", eps}};
    const auto t0 = Clock::now();

    const SymMatrix a = example_matrix(mu);
    const TikhonovOperator d = build_forward_difference(2);
    const Vec b{0.5, 0.5};

    const PerturbationReport pert = predict_condition(a, d, eps);
    const Vec x_unreg = solve_regularized(a, d, 0.0, b);
    const Vec x_reg = solve_regularized(a, d, eps, b);

    const double j_unreg = quadratic_objective(a, b, d, 0.0, x_unreg);
    const double j_reg = quadratic_objective(a, b, d, 0.0, x_reg);
    Vec resid = a.apply(x_reg);
    for (std::size_t i = 0; i < resid.size(); ++i) resid[i] -= b[i];

    json j = to_json(pert, a.n(), mu);
    j["unregularized_condition"] = json_number(condition_number(a));
    j["x_unreg"] = x_unreg;
    j["x_reg"] = x_reg;
    // the three candidate readings of the published "residual"
    j["objective_at_x_reg_eps0"] = j_reg;
    j["objective_gap_eps0"] = j_reg - j_unreg;
    j["equation_residual_sq"] = dot(resid, resid);

    const fs::path report_path = out_dir / "perturbation_report.json";
    write_text_atomic(report_path, j.dump(2) + "\n");
    rep.outputs.push_back(report_path.string());

    rep.timings["total_seconds"] = std::chrono::duration<double>(Clock::now() - t0).count();
    write_report(out_dir, rep);
    std::cout << j.dump(2) << "\n";
    return 0;
}

// --------------------------------------------------------------------- ocp

struct OcpOverrides {
    std::size_t quad_points = kDefaultQuadPoints;
    int modes = 12;
    DEConfig de;
};

struct OcpOutcome {
    double J = 0.0;
    double sup_err_u = 0.0;
    double wall_seconds = 0.0;
};

OcpOutcome run_ocp(const std::string& method, double eps, std::uint64_t seed,
                   const fs::path& out_dir, const OcpOverrides& ov) {
    fs::create_directories(out_dir);
    RunReport rep;
    rep.command = "ocp";
    rep.seed = seed;
    rep.parameters = {{"method", method}, {"eps", eps}, {"seed", seed},
                      {"quad_points", ov.quad_points}, {"modes", ov.modes}};
    const auto t0 = Clock::now();

    const ControlProblem prob(eps);
    const Vec grid = linspace(0.0, kPi, ov.quad_points);
    OcpOutcome out;

    Vec u_num, x_num;
    std::optional<OptimResult> optim;

    if (method == "exact") {
        u_num.resize(grid.size());
        x_num.resize(grid.size());
        for (std::size_t i = 0; i < grid.size(); ++i) {
            u_num[i] = optimal_control(grid[i], eps);
            x_num[i] = optimal_state(grid[i], eps);
        }
        out.J = optimal_objective(eps);
    } else {
        ControlSignal control = [&] {
            if (method == "crab") {
                CrabBasis basis;
                basis.modes = ov.modes;
                DEConfig cfg = ov.de;
                cfg.ND = ov.modes;
                cfg.seed = seed;
                auto [res, ctrl] = crab_solve(prob, basis, cfg, ov.quad_points);
                optim = std::move(res);
                return std::move(ctrl);
            }
            DirectConfig cfg;
            cfg.quad_points = ov.quad_points;
            auto [res, ctrl] = direct_solve(prob, cfg);
            optim = std::move(res);
            return std::move(ctrl);
        }();
        out.J = optim->best_value;
        u_num = control.values();
        const Trajectory traj = integrate_states(control, prob);
        const CubicSpline xs(traj.grid, traj.x);
        x_num.resize(grid.size());
        for (std::size_t i = 0; i < grid.size(); ++i) x_num[i] = xs(grid[i]);
    }

    // exact overlays (undefined at eps = 0)
    Vec u_exact, x_exact;
    if (eps > 0.0) {
        u_exact.resize(grid.size());
        x_exact.resize(grid.size());
        for (std::size_t i = 0; i < grid.size(); ++i) {
            u_exact[i] = optimal_control(grid[i], eps);
            x_exact[i] = optimal_state(grid[i], eps);
            out.sup_err_u = std::max(out.sup_err_u, std::abs(u_num[i] - u_exact[i]));
        }
    }

    // control/state CSV
    {
        std::ostringstream csv;
        csv << csv_header("t,u,x,u_exact,x_exact");
        for (std::size_t i = 0; i < grid.size(); ++i) {
            csv << grid[i] << "," << u_num[i] << "," << x_num[i] << ",";
            if (eps > 0.0)
                csv << u_exact[i] << "," << x_exact[i];
            else
                csv << ",";
            csv << "\n";
        }
        const fs::path p = out_dir / "solution.csv";
        write_text_atomic(p, csv.str());
        rep.outputs.push_back(p.string());
    }

    // objective JSON
    {
        json j{{"epsilon", eps}, {"quad_points", ov.quad_points}, {"J", out.J},
               {"method", method}};
        if (eps > 0.0) j["J_star"] = optimal_objective(eps);
        const fs::path p = out_dir / "objective.json";
        write_text_atomic(p, j.dump(2) + "\n");
        rep.outputs.push_back(p.string());
    }

    if (optim) {
        std::ostringstream csv;
        csv << csv_header("generation,best_J,wall_seconds");
        const double wall = std::chrono::duration<double>(Clock::now() - t0).count();
        for (std::size_t g = 0; g < optim->history.size(); ++g)
            csv << g + 1 << "," << optim->history[g].best_value << ","
                << wall * static_cast<double>(g + 1) /
                       static_cast<double>(optim->history.size())
                << "\n";
        const fs::path p = out_dir / "trace.csv";
        write_text_atomic(p, csv.str());
        rep.outputs.push_back(p.string());

        json j{{"seed", seed},
               {"method", method},
               {"config",
                json{{"F", ov.de.F}, {"CR", ov.de.CR}, {"NP", ov.de.NP},
                     {"Nmax", ov.de.Nmax}, {"ND", ov.modes}}},
               {"coeffs", optim->best_coeffs},
               {"J", optim->best_value}};
        const fs::path pc = out_dir / "coefficients.json";
        write_text_atomic(pc, j.dump(2) + "\n");
        rep.outputs.push_back(pc.string());
    }

    // SVG after all data is flushed, so a plot failure cannot corrupt CSVs
    {
        SvgPlot plot("control, eps=" + std::to_string(eps), "t", "u(t)");
        plot.add_curve(method, grid, u_num, "#1f77b4");
        if (eps > 0.0 && method != "exact")
            plot.add_curve("exact", grid, u_exact, "#d62728", true);
        if (eps <= 0.04) {
            Vec ul(grid.size());
            for (std::size_t i = 0; i < grid.size(); ++i)
                ul[i] = limit_functions(std::max(grid[i], 1e-12)).u;
            plot.add_curve("limit", grid, ul, "#2ca02c", true);
        }
        const fs::path p = out_dir / "control.svg";
        write_text_atomic(p, plot.render());
        rep.outputs.push_back(p.string());
    }

    out.wall_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    rep.timings["total_seconds"] = out.wall_seconds;
    write_report(out_dir, rep);
    return out;
}

int cmd_ocp(const std::string& method, double eps, std::uint64_t seed, const fs::path& out_dir,
            const OcpOverrides& ov) {
    if (method == "exact" && !(eps > 0.0)) {
        std::cerr << "tikreg: method=exact requires eps > 0\n";
        return 2;
    }
    const OcpOutcome out = run_ocp(method, eps, seed, out_dir, ov);
    std::cout << "method=" << method << " eps=" << eps << " J=" << out.J
              << " outputs in " << out_dir << "\n";
    return 0;
}

// ------------------------------------------------------------------- sweep

int cmd_sweep(const std::vector<double>& eps_list, const std::vector<std::uint64_t>& seeds,
              const fs::path& out_dir, const OcpOverrides& ov) {
    if (eps_list.empty() || seeds.empty()) {
        std::cerr << "tikreg: sweep needs non-empty --eps and --seeds lists\n";
        return 2;
    }
    fs::create_directories(out_dir);

    struct Cell {
        std::string method;
        double eps;
        std::uint64_t seed;
        fs::path dir;
        bool ok = false;
        std::string error;
        OcpOutcome outcome;
    };
    std::vector<Cell> cells;
    for (double eps : eps_list) {
        // exact ignores seeds: one cell per eps (and only for eps > 0)
        if (eps > 0.0) {
            std::ostringstream dir;
            dir << "exact_eps" << eps;
            cells.push_back({"exact", eps, 0, out_dir / dir.str()});
        }
        for (const std::string& method : {std::string("crab"), std::string("direct")})
            for (std::uint64_t seed : seeds) {
                std::ostringstream dir;
                dir << method << "_eps" << eps << "_seed" << seed;
                cells.push_back({method, eps, seed, out_dir / dir.str()});
            }
    }

    std::atomic<std::size_t> next{0};
    const std::size_t nworkers = std::min(worker_count(), cells.size());
    auto worker = [&] {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= cells.size()) break;
            Cell& c = cells[i];
            try {
                c.outcome = run_ocp(c.method, c.eps, c.seed, c.dir, ov);
                c.ok = true;
            } catch (const std::exception& e) {
                c.error = e.what();
            }
        }
    };
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < nworkers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();

    // single-threaded aggregation after the join barrier
    std::ostringstream csv;
    csv << csv_header("method,eps,seed,J,J_star,sup_err_u,wall_seconds");
    bool any_failed = false;
    for (const Cell& c : cells) {
        if (!c.ok) {
            any_failed = true;
            std::cerr << "sweep cell failed (" << c.method << ", eps=" << c.eps
                      << ", seed=" << c.seed << "): " << c.error << "\n";
            continue;
        }
        csv << c.method << "," << c.eps << "," << c.seed << "," << c.outcome.J << ",";
        if (c.eps > 0.0) csv << optimal_objective(c.eps);
        csv << "," << c.outcome.sup_err_u << "," << c.outcome.wall_seconds << "\n";
    }
    write_text_atomic(out_dir / "summary.csv", csv.str());
    std::cout << "sweep summary: " << (out_dir / "summary.csv") << "\n";
    return any_failed ? 4 : 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Tikhonov regularization lab"};
    app.require_subcommand(1);

    // matrix-demo
    double mu = 1e-6, eps = 0.01;
    std::string out = "out";
    auto* demo = app.add_subcommand("matrix-demo", "condition-number study");
    demo->add_option("--mu", mu, "near-singularity parameter")->check(CLI::PositiveNumber);
    demo->add_option("--eps", eps, "Tikhonov weight")->check(CLI::NonNegativeNumber);
    demo->add_option("--out", out, "output directory");

    // ocp
    std::string method = "exact";
    double ocp_eps = 1.0;
    std::uint64_t seed = 0;
    std::string ocp_out = "out";
    OcpOverrides ov;
    auto* ocp = app.add_subcommand("ocp", "solve the control problem");
    ocp->add_option("--method", method, "exact|crab|direct")
        ->check(CLI::IsMember({"exact", "crab", "direct"}));
    ocp->add_option("--eps", ocp_eps, "Tikhonov weight")->check(CLI::NonNegativeNumber);
    ocp->add_option("--seed", seed, "RNG seed");
    ocp->add_option("--out", ocp_out, "output directory");
    ocp->add_option("--quad-points", ov.quad_points, "quadrature grid size");
    ocp->add_option("--modes", ov.modes, "CRAB basis size");
    ocp->add_option("--de-np", ov.de.NP, "DE population");
    ocp->add_option("--de-f", ov.de.F, "DE differential weight");
    ocp->add_option("--de-cr", ov.de.CR, "DE crossover rate");
    ocp->add_option("--de-gens", ov.de.Nmax, "DE generations");

    // sweep
    std::vector<double> eps_list;
    std::vector<std::uint64_t> seed_list;
    std::string sweep_out = "out";
    auto* sweep = app.add_subcommand("sweep", "methods x eps x seeds");
    sweep->add_option("--eps", eps_list, "eps values")->delimiter(',');
    sweep->add_option("--seeds", seed_list, "seeds")->delimiter(',');
    sweep->add_option("--out", sweep_out, "output directory");
    sweep->add_option("--quad-points", ov.quad_points, "quadrature grid size");
    sweep->add_option("--modes", ov.modes, "CRAB basis size");
    sweep->add_option("--de-np", ov.de.NP, "DE population");
    sweep->add_option("--de-f", ov.de.F, "DE differential weight");
    sweep->add_option("--de-cr", ov.de.CR, "DE crossover rate");
    sweep->add_option("--de-gens", ov.de.Nmax, "DE generations");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (demo->parsed()) return cmd_matrix_demo(mu, eps, out);
        if (ocp->parsed()) return cmd_ocp(method, ocp_eps, seed, ocp_out, ov);
        if (sweep->parsed()) return cmd_sweep(eps_list, seed_list, sweep_out, ov);
    } catch (const numeric_error& e) {
        std::cerr << "tikreg: numeric failure: " << e.what() << "\n";
        return 3;
    } catch (const degenerate_spectrum_error& e) {
        std::cerr << "tikreg: " << e.what() << "\n";
        return 3;
    } catch (const std::domain_error& e) {
        std::cerr << "tikreg: invalid argument: " << e.what() << "\n";
        return 2;
    } catch (const dimension_error& e) {
        std::cerr << "tikreg: invalid argument: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "tikreg: error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}

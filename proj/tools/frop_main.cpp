// frop: fractional rearrangement and obstacle problem solver, batch front-end.
//
// Subcommands: dirichlet, rearrange, obstacle, verify, sweep. Options come
// from flags or a key = value config file with one [section] per subcommand;
// flags override the file. Exit codes: 0 success, 1 solver non-convergence,
// 2 configuration error.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "frop/dirichlet.hpp"
#include "frop/errors.hpp"
#include "frop/io.hpp"
#include "frop/kernel.hpp"
#include "frop/obstacle.hpp"
#include "frop/operator.hpp"
#include "frop/rearrangement.hpp"
#include "frop/slimit.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace frop;

namespace {

Domain parse_domain(const std::string& spec) {
    const auto colon = spec.find(':');
    const std::string kind = spec.substr(0, colon);
    std::vector<double> v;
    if (colon != std::string::npos) {
        std::stringstream ss(spec.substr(colon + 1));
        std::string item;
        while (std::getline(ss, item, ',')) v.push_back(std::stod(item));
    }
    if (kind == "interval" && v.size() == 2) return Domain::interval(v[0], v[1]);
    if (kind == "rect" && v.size() == 4) return Domain::rectangle(v[0], v[1], v[2], v[3]);
    if (kind == "disk" && v.size() == 3) return Domain::disk(v[0], v[1], v[2]);
    throw CLI::ValidationError(
        "--domain", "expected interval:a,b or rect:ax,bx,ay,by or disk:cx,cy,r, got " + spec);
}

bool is_unit_ball(const Domain& d) {
    if (d.kind() == DomainKind::interval) return d.lo(0) == -1.0 && d.hi(0) == 1.0;
    if (d.kind() == DomainKind::disk) {
        return d.disk_cx() == 0.0 && d.disk_cy() == 0.0 && d.disk_radius() == 1.0;
    }
    return false;
}

void dump_json(const fs::path& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << j.dump(2) << "\n";
}

json common_summary(const std::string& command, const Domain& domain, int n,
                    const KernelParams& kernel) {
    json j;
    j["command"] = command;
    j["n"] = n;
    j["s"] = kernel.s;
    j["normalized"] = kernel.normalized;
    j["seed"] = kPowerIterationSeed;
    switch (domain.kind()) {
        case DomainKind::interval:
            j["domain_kind"] = "interval";
            j["domain_a"] = domain.lo(0);
            j["domain_b"] = domain.hi(0);
            break;
        case DomainKind::rectangle:
            j["domain_kind"] = "rectangle";
            j["domain_ax"] = domain.lo(0);
            j["domain_bx"] = domain.hi(0);
            j["domain_ay"] = domain.lo(1);
            j["domain_by"] = domain.hi(1);
            break;
        case DomainKind::disk:
            j["domain_kind"] = "disk";
            j["domain_cx"] = domain.disk_cx();
            j["domain_cy"] = domain.disk_cy();
            j["domain_radius"] = domain.disk_radius();
            break;
    }
    return j;
}

struct CheckLine {
    std::string name;
    bool pass;
    double margin;
};

int report_checks(const std::vector<CheckLine>& checks, const fs::path& out_dir) {
    json j;
    bool all = true;
    for (const auto& c : checks) {
        std::printf("%s %s (margin = %.6g)\n", c.pass ? "PASS" : "FAIL", c.name.c_str(),
                    c.margin);
        j[c.name] = {{"pass", c.pass}, {"margin", c.margin}};
        all = all && c.pass;
    }
    dump_json(out_dir / "verify.json", j);
    std::printf("%s\n", all ? "verify: all checks passed" : "verify: FAILURES detected");
    return all ? 0 : 1;
}

struct Cli {
    std::string domain_spec = "interval:-1,1";
    int n = 128;
    double s = 0.5;
    bool normalized = false;
    std::string out_dir = ".";
    double beta = 0.0;
    double alpha = 0.0;
    double tol = 1e-10;
    double gap_tol = 1e-6;
    long max_iterations = 20000;
    bool crosscheck = false;
    bool accelerated = false;
    bool dump_matrix = false;
    std::string run_dir;
    std::vector<double> s_list;
    double s_cap = 0.97;
    int workers = 1;
};

int run_dirichlet(const Cli& cli) {
    const Domain domain = parse_domain(cli.domain_spec);
    const Grid grid = build_grid(domain, cli.n);
    const KernelParams kernel{domain.dim(), cli.s, cli.normalized};
    const NonlocalOperator op = assemble(grid, kernel);
    const Field f = make_field(grid, 1.0);
    const Field u = solve(op, f, cli.tol);

    fs::create_directories(cli.out_dir);
    write_field_csv(fs::path(cli.out_dir) / "state.csv", grid, u);
    if (cli.dump_matrix) write_operator_binary(fs::path(cli.out_dir) / "operator.bin", op);

    json j = common_summary("dirichlet", domain, cli.n, kernel);
    j["tol"] = cli.tol;
    j["rhs"] = "ones";
    if (is_unit_ball(domain)) {
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < grid.interior_count(); ++i) {
            const double ref = getoor_reference(kernel, grid.node(i));
            num += (u.values[i] - ref) * (u.values[i] - ref);
            den += ref * ref;
        }
        j["getoor_rel_l2_error"] = std::sqrt(num / den);
    }
    dump_json(fs::path(cli.out_dir) / "summary.json", j);
    return 0;
}

int run_rearrange(const Cli& cli) {
    const Domain domain = parse_domain(cli.domain_spec);
    const Grid grid = build_grid(domain, cli.n);
    const KernelParams kernel{domain.dim(), cli.s, cli.normalized};
    const NonlocalOperator op = assemble(grid, kernel);

    FrankWolfeOptions opts;
    opts.gap_tol = cli.gap_tol;
    opts.max_iterations = cli.max_iterations;
    const auto sol = solve_frank_wolfe(op, RearrangementClass{cli.beta}, opts);

    RunParameters params{domain, cli.n, kernel, cli.beta};
    save_rearrangement(cli.out_dir, params, sol);

    json j = common_summary("rearrange", domain, cli.n, kernel);
    j["beta"] = cli.beta;
    j["gap_tol"] = cli.gap_tol;
    j["alpha"] = sol.alpha;
    j["objective"] = sol.objective;
    j["initial_objective"] = sol.initial_objective;
    j["gap"] = sol.gap;
    j["iterations"] = sol.iterations;
    if (cli.crosscheck) {
        const auto pg = solve_projected_gradient(op, RearrangementClass{cli.beta}, {});
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < grid.interior_count(); ++i) {
            num += (pg.u_hat.values[i] - sol.u_hat.values[i]) *
                   (pg.u_hat.values[i] - sol.u_hat.values[i]);
            den += sol.u_hat.values[i] * sol.u_hat.values[i];
        }
        j["crosscheck_state_rel_l2"] = std::sqrt(num / den);
        j["crosscheck_iterations"] = pg.iterations;
    }
    dump_json(fs::path(cli.out_dir) / "summary.json", j);
    return 0;
}

int run_obstacle(const Cli& cli) {
    const Domain domain = parse_domain(cli.domain_spec);
    const Grid grid = build_grid(domain, cli.n);
    const KernelParams kernel{domain.dim(), cli.s, cli.normalized};
    const NonlocalOperator op = assemble(grid, kernel);

    ObstacleOptions opts;
    opts.accelerated = cli.accelerated;
    const auto sol = solve_obstacle(op, cli.alpha, opts);

    RunParameters params{domain, cli.n, kernel, 0.0};
    save_obstacle(cli.out_dir, params, sol, grid);

    json j = common_summary("obstacle", domain, cli.n, kernel);
    j["alpha"] = cli.alpha;
    j["objective"] = sol.objective;
    j["iterations"] = sol.iterations;
    j["subharmonic_pass"] = sol.subharmonic.subharmonic;
    j["nonlinear_valid"] = sol.nonlinear_valid;
    double max_lower = 0.0, max_upper = 0.0, max_nonlinear = 0.0;
    for (std::size_t i = 0; i < grid.interior_count(); ++i) {
        max_lower = std::max(max_lower, sol.residual_lower.values[i]);
        max_upper = std::max(max_upper, sol.residual_upper.values[i]);
        max_nonlinear = std::max(max_nonlinear, std::abs(sol.nonlinear_residual.values[i]));
    }
    j["max_residual_lower"] = max_lower;
    j["max_residual_upper"] = max_upper;
    j["max_nonlinear_residual"] = max_nonlinear;
    dump_json(fs::path(cli.out_dir) / "summary.json", j);
    return 0;
}

int run_verify(const Cli& cli) {
    const auto loaded = load_rearrangement(cli.run_dir);
    const Grid& grid = loaded.grid;
    const NonlocalOperator op = assemble(grid, loaded.params.kernel);

    std::vector<CheckLine> checks;
    const StructureReport report = verify_structure(op, loaded.solution);
    checks.push_back({"structure_state_bounds", report.state_bounds.pass,
                      report.state_bounds.margin});
    checks.push_back({"structure_saturation_below_plateau",
                      report.saturation_below_plateau.pass,
                      report.saturation_below_plateau.margin});
    checks.push_back({"structure_plateau_where_unsaturated",
                      report.plateau_where_unsaturated.pass,
                      report.plateau_where_unsaturated.margin});
    checks.push_back({"structure_density_positive", report.density_positive.pass,
                      report.density_positive.margin});
    checks.push_back({"structure_non_characteristic", report.non_characteristic.pass,
                      report.non_characteristic.margin});

    const auto obst = solve_obstacle(op, loaded.solution.alpha);
    const auto collar = free_boundary_collar(grid, obst.u, obst.contact_band);
    double band_max = 0.0, nonlinear_max = 0.0;
    for (std::size_t i = 0; i < grid.interior_count(); ++i) {
        if (collar[i]) continue;
        band_max = std::max({band_max, obst.residual_lower.values[i],
                             obst.residual_upper.values[i]});
        nonlinear_max = std::max(nonlinear_max, std::abs(obst.nonlinear_residual.values[i]));
    }
    checks.push_back({"obstacle_band_residual", band_max <= 1e-3, 1e-3 - band_max});
    checks.push_back(
        {"obstacle_nonlinear_residual", nonlinear_max <= 1e-3, 1e-3 - nonlinear_max});
    checks.push_back({"obstacle_subharmonic", obst.subharmonic.positive_part_subharmonic,
                      obst.subharmonic.tol - obst.subharmonic.max_apply});

    const auto metrics = equivalence_check(op, loaded.solution, obst);
    const double sup_tol = 1e-3 * loaded.solution.alpha;
    checks.push_back({"equivalence_sup_diff", metrics.sup_diff <= sup_tol,
                      sup_tol - metrics.sup_diff});
    const double j_tol = 1e-8 * std::abs(obst.objective);
    checks.push_back({"equivalence_objective_gap", metrics.j_gap <= j_tol,
                      j_tol - metrics.j_gap});

    fs::create_directories(cli.out_dir);
    return report_checks(checks, cli.out_dir);
}

int run_sweep(const Cli& cli) {
    const Domain domain = parse_domain(cli.domain_spec);
    SweepOptions opts;
    opts.fw.gap_tol = cli.gap_tol;
    opts.fw.max_iterations = cli.max_iterations;
    opts.s_cap = cli.s_cap;
    opts.workers = cli.workers;
    const SweepTable table = s_sweep(domain, cli.n, cli.beta, cli.s_list, opts);
    save_sweep(cli.out_dir, table);

    KernelParams kernel{domain.dim(), cli.s_list.back(), true};
    json j = common_summary("sweep", domain, cli.n, kernel);
    j.erase("s");
    j["s_list"] = cli.s_list;
    j["beta"] = cli.beta;
    j["workers"] = cli.workers;
    j["local_objective"] = table.local_objective;
    j["local_alpha"] = table.local_alpha;
    int failures = 0;
    for (const auto& row : table.rows) failures += row.failed ? 1 : 0;
    j["failed_rows"] = failures;
    dump_json(fs::path(cli.out_dir) / "summary.json", j);
    return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fractional rearrangement / normalized obstacle problem solver"};
    app.set_config("--config", "", "key = value config file with one [section] per subcommand");
    app.allow_config_extras(CLI::config_extras_mode::error);
    app.fallthrough();
    app.require_subcommand(1);

    Cli cli;
    const auto add_common = [&](CLI::App* cmd, bool with_kernel = true) {
        cmd->add_option("--domain", cli.domain_spec,
                        "interval:a,b | rect:ax,bx,ay,by | disk:cx,cy,r");
        cmd->add_option("-N,--n", cli.n, "cells per axis");
        cmd->add_option("-o,--out", cli.out_dir, "output directory");
        if (with_kernel) {
            cmd->add_option("-s,--s", cli.s, "fractional order in (0,1)");
            cmd->add_flag("--normalized", cli.normalized,
                          "apply the s->1 normalizing constant");
        }
    };

    auto* dirichlet_cmd = app.add_subcommand("dirichlet", "solve the unit-load problem")->configurable();
    add_common(dirichlet_cmd);
    dirichlet_cmd->add_option("--tol", cli.tol, "relative residual tolerance");
    dirichlet_cmd->add_flag("--dump-matrix", cli.dump_matrix, "write the dense operator");

    auto* rearrange_cmd =
        app.add_subcommand("rearrange", "minimize the state energy over the density class")->configurable();
    add_common(rearrange_cmd);
    rearrange_cmd->add_option("--beta", cli.beta, "volume budget")->required();
    rearrange_cmd->add_option("--gap-tol", cli.gap_tol, "relative duality-gap tolerance");
    rearrange_cmd->add_option("--max-iter", cli.max_iterations, "iteration cap");
    rearrange_cmd->add_flag("--crosscheck", cli.crosscheck,
                            "also run the projected-gradient solver and compare");

    auto* obstacle_cmd =
        app.add_subcommand("obstacle", "minimize the obstacle functional at a given level")->configurable();
    add_common(obstacle_cmd);
    obstacle_cmd->add_option("--alpha", cli.alpha, "exterior level")->required();
    obstacle_cmd->add_flag("--accelerated", cli.accelerated, "use momentum acceleration");

    auto* verify_cmd =
        app.add_subcommand("verify", "re-check a persisted rearrangement run")->configurable();
    verify_cmd->add_option("--run", cli.run_dir, "directory of a rearrange run")->required();
    verify_cmd->add_option("-o,--out", cli.out_dir, "output directory");

    auto* sweep_cmd = app.add_subcommand("sweep", "study the s -> 1 limit")->configurable();
    add_common(sweep_cmd, false);
    sweep_cmd->add_option("--s-list", cli.s_list, "ascending fractional orders")
        ->required()
        ->delimiter(',');
    sweep_cmd->add_option("--beta", cli.beta, "volume budget")->required();
    sweep_cmd->add_option("--gap-tol", cli.gap_tol, "relative duality-gap tolerance");
    sweep_cmd->add_option("--max-iter", cli.max_iterations, "iteration cap");
    sweep_cmd->add_option("--s-cap", cli.s_cap, "largest admissible order");
    sweep_cmd->add_option("--workers", cli.workers, "parallel sweep workers");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (dirichlet_cmd->parsed()) return run_dirichlet(cli);
        if (rearrange_cmd->parsed()) return run_rearrange(cli);
        if (obstacle_cmd->parsed()) return run_obstacle(cli);
        if (verify_cmd->parsed()) return run_verify(cli);
        if (sweep_cmd->parsed()) return run_sweep(cli);
    } catch (const ConvergenceError& e) {
        std::fprintf(stderr, "solver did not converge: %s\n", e.what());
        return 1;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "configuration error: %s\n", e.what());
        return 2;
    } catch (const std::domain_error& e) {
        std::fprintf(stderr, "configuration error: %s\n", e.what());
        return 2;
    } catch (const CLI::Error& e) {
        std::fprintf(stderr, "configuration error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 2;
}

#include "frop/rearrangement.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

namespace frop {

namespace {

void validate_class(const Grid& grid, const RearrangementClass& cls, const char* where) {
    if (!(cls.beta > 0.0) || !(cls.beta < grid.interior_measure())) {
        throw std::invalid_argument(std::string(where) +
                                    ": budget must satisfy 0 < beta < |D|, got beta = " +
                                    std::to_string(cls.beta));
    }
}

// Vertex of the minimal face containing f that maximizes Σ u_i v_i: keep
// saturated coordinates at 1, reverse-bathtub-fill the remaining budget over
// the fractional support (largest state first), zeros stay zero.
std::vector<double> away_vertex(const std::vector<double>& u, const std::vector<double>& f,
                                double budget_cells) {
    constexpr double kFaceEps = 1e-12;
    const std::size_t n = u.size();
    std::vector<double> v(n, 0.0);
    double remaining = budget_cells;
    for (std::size_t i = 0; i < n; ++i) {
        if (f[i] >= 1.0 - kFaceEps) {
            v[i] = 1.0;
            remaining -= 1.0;
        }
    }
    remaining = std::max(remaining, 0.0);

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&u](std::size_t a, std::size_t b) {
        if (u[a] != u[b]) return u[a] > u[b];
        return a < b;
    });
    for (std::size_t idx : order) {
        if (remaining <= 0.0) break;
        if (v[idx] == 1.0 || f[idx] <= kFaceEps) continue;
        if (remaining >= 1.0) {
            v[idx] = 1.0;
            remaining -= 1.0;
        } else {
            v[idx] = remaining;
            remaining = 0.0;
        }
    }
    return v;
}

RearrangementSolution finish_solution(double factor, double hn, std::vector<double> f,
                                      std::vector<double> u, double gap, double phi0,
                                      long iterations, std::vector<IterationRecord> log) {
    RearrangementSolution sol;
    sol.f_hat.values = std::move(f);
    sol.f_hat.exterior_value = 0.0;
    sol.u_hat.values = std::move(u);
    sol.u_hat.exterior_value = 0.0;
    sol.alpha = *std::max_element(sol.u_hat.values.begin(), sol.u_hat.values.end());
    sol.gap = gap;
    sol.objective = factor * hn * dot(sol.f_hat.values, sol.u_hat.values);
    sol.initial_objective = phi0;
    sol.iterations = iterations;
    sol.log = std::move(log);
    return sol;
}

}  // namespace

Field bathtub_lmo(const Field& u, double beta, double cell_volume) {
    const std::size_t n = u.values.size();
    const double total = static_cast<double>(n) * cell_volume;
    if (!(beta > 0.0)) throw std::invalid_argument("bathtub_lmo: budget must be positive");
    if (beta > total * (1.0 + 1e-12)) {
        throw std::invalid_argument("bathtub_lmo: budget " + std::to_string(beta) +
                                    " exceeds the domain volume " + std::to_string(total));
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&u](std::size_t a, std::size_t b) {
        if (u.values[a] != u.values[b]) return u.values[a] < u.values[b];
        return a < b;
    });

    // Work in cell units; snap near-integer budgets so that e.g. beta = |D|
    // yields exactly f ≡ 1.
    const double budget_cells = std::min(beta / cell_volume, static_cast<double>(n));
    std::size_t full = static_cast<std::size_t>(std::floor(budget_cells));
    double frac = budget_cells - static_cast<double>(full);
    if (frac > 1.0 - 1e-10) {
        ++full;
        frac = 0.0;
    }
    full = std::min(full, n);

    Field f;
    f.values.assign(n, 0.0);
    f.exterior_value = 0.0;
    for (std::size_t k = 0; k < full; ++k) f.values[order[k]] = 1.0;
    if (full < n && frac > 0.0) f.values[order[full]] = frac;
    return f;
}

Field project_capped_box(const Field& g, double beta, double cell_volume) {
    const std::size_t n = g.values.size();
    const double total = static_cast<double>(n) * cell_volume;
    if (!(beta > 0.0) || !(beta < total)) {
        throw std::invalid_argument("project_capped_box: budget must satisfy 0 < beta < |D|");
    }

    const auto budget = [&](double lambda) {
        double s = 0.0;
        for (double v : g.values) s += std::clamp(v - lambda, 0.0, 1.0);
        return cell_volume * s;
    };

    auto [mn, mx] = std::minmax_element(g.values.begin(), g.values.end());
    double lo = *mn - 1.0;  // budget(lo) = total >= beta
    double hi = *mx;        // budget(hi) = 0 < beta
    double lambda = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
        lambda = 0.5 * (lo + hi);
        const double b = budget(lambda);
        if (std::abs(b - beta) <= 1e-12 * total) break;
        if (b > beta) lo = lambda;
        else hi = lambda;
    }

    Field f;
    f.values.resize(n);
    f.exterior_value = 0.0;
    for (std::size_t i = 0; i < n; ++i) f.values[i] = std::clamp(g.values[i] - lambda, 0.0, 1.0);
    return f;
}

RearrangementSolution solve_frank_wolfe(const LinearOperator& op,
                                        const RearrangementClass& cls,
                                        const FrankWolfeOptions& options) {
    const Grid& grid = op.grid();
    validate_class(grid, cls, "solve_frank_wolfe");
    const std::size_t n = grid.interior_count();
    const double hn = grid.cell_volume();
    const double factor = op.energy_factor();

    StateSolver solver(op, options.backend, options.solve_tol);

    std::vector<double> f(n, cls.beta / grid.interior_measure());
    std::vector<double> u = solver.solve(f);
    const double phi0 = factor * hn * dot(f, u);
    double phi = phi0;

    std::vector<IterationRecord> log;
    std::vector<double> d(n), ud(n);
    double gamma = 0.0;

    for (long k = 0; k < options.max_iterations; ++k) {
        Field uf;
        uf.values = u;  // bathtub oracle works on the raw state values
        Field flmo = bathtub_lmo(uf, cls.beta, hn);

        double gap = 0.0;
        for (std::size_t i = 0; i < n; ++i) gap += u[i] * (f[i] - flmo.values[i]);
        gap *= 2.0 * hn;

        if (options.keep_log) log.push_back({k, phi, gap, gamma});
        if (gap <= options.gap_tol * phi0) {
            return finish_solution(factor, hn, std::move(f), std::move(u), gap, phi0, k,
                                   std::move(log));
        }

        if (options.pairwise_steps) {
            // Candidate directions toward the vertex, away from the in-face
            // vertex, and the swap between them. Two solves give all three
            // direction states by linearity; take the best exact step.
            double fw_mass = 0.0;
            for (double v : flmo.values) fw_mass += v;
            const std::vector<double> vaw = away_vertex(u, f, fw_mass);
            std::vector<double> u_vfw = solver.solve(flmo.values);
            std::vector<double> u_vaw = solver.solve(vaw);

            double best_drop = 0.0, best_gamma = 0.0;
            int best = -1;
            std::vector<double> dir(n), dir_state(n);
            for (int cand = 0; cand < 3; ++cand) {
                double cap = std::numeric_limits<double>::infinity();
                for (std::size_t i = 0; i < n; ++i) {
                    double di = 0.0;
                    switch (cand) {
                        case 0: di = flmo.values[i] - f[i]; break;        // toward vertex
                        case 1: di = f[i] - vaw[i]; break;                // away
                        case 2: di = flmo.values[i] - vaw[i]; break;      // swap
                    }
                    d[i] = di;
                    if (di < 0.0) cap = std::min(cap, f[i] / -di);
                    else if (di > 0.0) cap = std::min(cap, (1.0 - f[i]) / di);
                }
                if (cand == 0) cap = std::min(cap, 1.0);
                if (!std::isfinite(cap) || cap <= 0.0) continue;
                for (std::size_t i = 0; i < n; ++i) {
                    switch (cand) {
                        case 0: ud[i] = u_vfw[i] - u[i]; break;
                        case 1: ud[i] = u[i] - u_vaw[i]; break;
                        case 2: ud[i] = u_vfw[i] - u_vaw[i]; break;
                    }
                }
                const double du = dot(d, u);
                const double dud = dot(d, ud);
                const double g = dud > 0.0 ? std::clamp(-du / dud, 0.0, cap) : cap;
                const double drop = 2.0 * g * du + g * g * dud;  // objective change / (factor h^n)
                if (drop < best_drop) {
                    best_drop = drop;
                    best_gamma = g;
                    best = cand;
                    dir = d;
                    dir_state = ud;
                }
            }
            if (best < 0) {  // no descent direction; the gap certificate rules
                return finish_solution(factor, hn, std::move(f), std::move(u), gap, phi0,
                                       k, std::move(log));
            }
            gamma = best_gamma;
            for (std::size_t i = 0; i < n; ++i) {
                f[i] = std::clamp(f[i] + gamma * dir[i], 0.0, 1.0);
                u[i] += gamma * dir_state[i];
            }
        } else {
            for (std::size_t i = 0; i < n; ++i) d[i] = flmo.values[i] - f[i];
            solver.solve(d, ud);
            const double du = dot(d, u);
            const double dud = dot(d, ud);
            gamma = dud > 0.0 ? std::clamp(-du / dud, 0.0, 1.0) : 1.0;
            for (std::size_t i = 0; i < n; ++i) {
                f[i] += gamma * d[i];
                u[i] += gamma * ud[i];
            }
        }
        if (options.refresh_every > 0 && (k + 1) % options.refresh_every == 0) {
            solver.solve(f, u);
        }
        phi = factor * hn * dot(f, u);
    }

    double gap = 0.0;
    {
        Field uf;
        uf.values = u;
        Field flmo = bathtub_lmo(uf, cls.beta, hn);
        for (std::size_t i = 0; i < n; ++i) gap += u[i] * (f[i] - flmo.values[i]);
        gap *= 2.0 * hn;
    }
    auto last = finish_solution(factor, hn, std::move(f), std::move(u), gap, phi0,
                                options.max_iterations, std::move(log));
    throw RearrangementConvergenceError(
        "solve_frank_wolfe: iteration cap " + std::to_string(options.max_iterations) +
            " reached with gap " + std::to_string(gap),
        std::move(last));
}

RearrangementSolution solve_projected_gradient(const LinearOperator& op,
                                               const RearrangementClass& cls,
                                               const ProjectedGradientOptions& options) {
    const Grid& grid = op.grid();
    validate_class(grid, cls, "solve_projected_gradient");
    const std::size_t n = grid.interior_count();
    const double hn = grid.cell_volume();
    const double factor = op.energy_factor();

    StateSolver solver(op, options.backend, options.solve_tol);

    double step = options.step;
    if (!(step > 0.0)) {
        // Largest eigenvalue of the solution map f ↦ u_f by power iteration.
        std::mt19937 rng(kPowerIterationSeed);
        std::uniform_real_distribution<double> unit(-1.0, 1.0);
        std::vector<double> v(n);
        for (double& x : v) x = unit(rng);
        double nv = norm2(v);
        for (double& x : v) x /= nv;
        double lambda = 1.0;
        std::vector<double> w(n);
        for (int it = 0; it < 20; ++it) {
            solver.solve(v, w);
            lambda = norm2(w);
            for (std::size_t i = 0; i < n; ++i) v[i] = w[i] / lambda;
        }
        step = 1.0 / lambda;
    }

    std::vector<double> f(n, cls.beta / grid.interior_measure());
    std::vector<double> u(n), g(n);
    long iterations = options.max_iterations;
    bool converged = false;
    for (long k = 0; k < options.max_iterations; ++k) {
        solver.solve(f, u);
        for (std::size_t i = 0; i < n; ++i) g[i] = f[i] - step * u[i];
        Field gf;
        gf.values = std::move(g);
        Field fnew = project_capped_box(gf, cls.beta, hn);
        g = std::move(gf.values);

        double delta = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double d = fnew.values[i] - f[i];
            delta += d * d;
        }
        delta = std::sqrt(delta);
        f = std::move(fnew.values);
        if (delta <= options.tol) {
            iterations = k + 1;
            converged = true;
            break;
        }
    }

    solver.solve(f, u);
    const std::vector<double> f0(n, cls.beta / grid.interior_measure());
    const double phi0 = factor * hn * dot(f0, solver.solve(f0));

    double gap = 0.0;
    {
        Field uf;
        uf.values = u;
        Field flmo = bathtub_lmo(uf, cls.beta, hn);
        for (std::size_t i = 0; i < n; ++i) gap += u[i] * (f[i] - flmo.values[i]);
        gap *= 2.0 * hn;
    }

    auto sol = finish_solution(factor, hn, std::move(f), std::move(u), gap, phi0,
                               iterations, {});
    if (!converged) {
        throw RearrangementConvergenceError(
            "solve_projected_gradient: iteration cap " +
                std::to_string(options.max_iterations) + " reached",
            std::move(sol));
    }
    return sol;
}

double extract_alpha(const RearrangementSolution& sol) {
    if (sol.u_hat.values.empty()) {
        throw std::invalid_argument("extract_alpha: empty solution");
    }
    return *std::max_element(sol.u_hat.values.begin(), sol.u_hat.values.end());
}

StructureReport verify_structure(const LinearOperator& op, const RearrangementSolution& sol,
                                 const StructureTolerances& tols) {
    const Grid& grid = op.grid();
    require_field(grid, sol.f_hat, "verify_structure");
    require_field(grid, sol.u_hat, "verify_structure");

    const auto& f = sol.f_hat.values;
    const auto& u = sol.u_hat.values;
    const double alpha = sol.alpha;
    const double delta = tols.level_delta.value_or(1e-3 * alpha);
    const double eps = tols.density_eps;
    const double eta = tols.positivity_floor;
    const double inf = std::numeric_limits<double>::infinity();

    StructureReport report;
    report.alpha = alpha;
    report.level_delta = delta;

    // a) 0 - δ <= u_i <= α + δ
    double margin_a = inf;
    for (double v : u) margin_a = std::min(margin_a, std::min(v + delta, alpha + delta - v));
    report.state_bounds = {margin_a >= 0.0, margin_a};

    // b) {u < α - δ} ⊆ {f >= 1 - ε}
    double margin_b = inf;
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (u[i] < alpha - delta) margin_b = std::min(margin_b, f[i] - (1.0 - eps));
    }
    report.saturation_below_plateau = {margin_b >= 0.0 || margin_b == inf,
                                       margin_b == inf ? 1.0 : margin_b};

    // c) {f <= 1 - ε} ⊆ {|u - α| <= δ}
    double margin_c = inf;
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (f[i] <= 1.0 - eps) margin_c = std::min(margin_c, delta - std::abs(u[i] - alpha));
    }
    report.plateau_where_unsaturated = {margin_c >= 0.0 || margin_c == inf,
                                        margin_c == inf ? delta : margin_c};

    // d) f_i >= η everywhere
    double margin_d = inf;
    for (double v : f) margin_d = std::min(margin_d, v - eta);
    report.density_positive = {margin_d >= 0.0, margin_d};

    // e) positive measure of intermediate densities
    std::size_t intermediate = 0;
    for (double v : f) {
        if (v > eps && v < 1.0 - eps) ++intermediate;
    }
    report.intermediate_measure = static_cast<double>(intermediate) * grid.cell_volume();
    report.non_characteristic = {report.intermediate_measure > 0.0, report.intermediate_measure};

    return report;
}

}  // namespace frop

#include "frop/obstacle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

#include "frop/dense.hpp"
#include "frop/errors.hpp"

namespace frop {

namespace {



// Largest eigenvalue of A by power iteration, 1e-6 relative.
double largest_eigenvalue(const LinearOperator& op) {
    const std::size_t n = op.grid().interior_count();
    std::mt19937 rng(kPowerIterationSeed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::vector<double> v(n), w(n);
    for (double& x : v) x = unit(rng);
    double nv = norm2(v);
    for (double& x : v) x /= nv;

    double lambda = 0.0, prev = 0.0;
    for (int it = 0; it < 1000; ++it) {
        op.apply(v, w);
        lambda = norm2(w);
        for (std::size_t i = 0; i < n; ++i) v[i] = w[i] / lambda;
        if (it > 2 && std::abs(lambda - prev) <= 1e-6 * lambda) break;
        prev = lambda;
    }
    return lambda;
}

// prox of z ↦ t (z + alpha)⁺, componentwise.
inline double prox_positive_part(double z, double t, double alpha) {
    if (z > -alpha + t) return z - t;
    if (z < -alpha) return z;
    return -alpha;
}

double objective_shifted(const LinearOperator& op, std::span<const double> w, double alpha,
                         std::vector<double>& scratch) {
    op.apply(w, scratch);
    double quad = 0.5 * dot(w, scratch);
    double lin = 0.0;
    for (double wi : w) lin += std::max(wi + alpha, 0.0);
    const double hn = op.grid().cell_volume();
    return hn * (quad + lin);
}

}  // namespace

double obstacle_objective(const LinearOperator& op, const Field& u_state, double alpha) {
    require_field(op.grid(), u_state, "obstacle_objective");
    std::vector<double> w(u_state.values.size());
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = u_state.values[i] - alpha;
    std::vector<double> scratch(w.size());
    return objective_shifted(op, w, alpha, scratch);
}

ObstacleSolution solve_obstacle(const LinearOperator& op, double alpha,
                                const ObstacleOptions& options) {
    if (!(alpha >= 0.0)) {
        throw std::invalid_argument("solve_obstacle: level alpha must be nonnegative");
    }
    const Grid& grid = op.grid();
    const std::size_t n = grid.interior_count();

    const double lambda_max = largest_eigenvalue(op);
    const double t = 1.0 / (lambda_max * (1.0 + 1e-5));

    std::vector<double> w(n, options.initial_shift);
    std::vector<double> w_prev = w;   // FISTA memory
    std::vector<double> y = w;        // extrapolated point
    std::vector<double> grad(n), scratch(n);
    double momentum = 1.0;  // FISTA t_k

    std::vector<double> log;
    long iterations = options.max_iterations;
    bool converged = false;

    for (long k = 0; k < options.max_iterations; ++k) {
        const std::span<const double> point =
            options.accelerated ? std::span<const double>(y) : std::span<const double>(w);
        op.apply(point, grad);

        double delta2 = 0.0, wnorm2 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double wi_new = prox_positive_part(point[i] - t * grad[i], t, alpha);
            const double d = wi_new - w[i];
            delta2 += d * d;
            wnorm2 += w[i] * w[i];
            w_prev[i] = w[i];
            w[i] = wi_new;
        }

        if (options.accelerated) {
            const double momentum_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * momentum * momentum));
            const double gamma = (momentum - 1.0) / momentum_next;
            for (std::size_t i = 0; i < n; ++i) y[i] = w[i] + gamma * (w[i] - w_prev[i]);
            momentum = momentum_next;
        }

        if (options.keep_log) log.push_back(objective_shifted(op, w, alpha, scratch));

        if (std::sqrt(delta2) <= options.tol * std::max(1.0, std::sqrt(wnorm2))) {
            iterations = k + 1;
            converged = true;
            break;
        }
    }

    if (!converged) {
        throw ConvergenceError("solve_obstacle: iteration cap " +
                                   std::to_string(options.max_iterations) + " reached",
                               0.0, options.max_iterations);
    }

    ObstacleSolution sol;
    sol.alpha = alpha;
    sol.iterations = iterations;
    sol.objective_log = std::move(log);
    sol.u.values.resize(n);
    for (std::size_t i = 0; i < n; ++i) sol.u.values[i] = w[i] + alpha;
    sol.u.exterior_value = alpha;
    sol.objective = objective_shifted(op, w, alpha, scratch);
    sol.contact_band = options.contact_band_rel * alpha;

    auto [lower, upper] = residual_band(op, sol.u, alpha, sol.contact_band);
    sol.residual_lower = std::move(lower);
    sol.residual_upper = std::move(upper);
    sol.subharmonic = subharmonic_report(op, sol.u, options.subharmonic_tol);
    if (sol.subharmonic.subharmonic) {
        sol.nonlinear_residual =
            nonlinear_residual(op, sol.u, alpha, sol.contact_band, options.subharmonic_tol);
        sol.nonlinear_valid = true;
    } else {
        sol.nonlinear_residual = make_field(grid);
        sol.nonlinear_valid = false;
    }
    return sol;
}

std::pair<Field, Field> residual_band(const LinearOperator& op, const Field& u_state,
                                      double alpha, double band) {
    const Grid& grid = op.grid();
    require_field(grid, u_state, "residual_band");
    const std::size_t n = grid.interior_count();

    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i) w[i] = u_state.values[i] - alpha;
    std::vector<double> aw(n);
    op.apply(w, aw);

    Field lower = make_field(grid);
    Field upper = make_field(grid);
    for (std::size_t i = 0; i < n; ++i) {
        const double g = -aw[i];  // discrete -(-Δ)^s U
        const double chi_pos = u_state.values[i] > band ? 1.0 : 0.0;
        const double chi_nonneg = u_state.values[i] >= -band ? 1.0 : 0.0;
        lower.values[i] = std::max(0.0, chi_pos - g);
        upper.values[i] = std::max(0.0, g - chi_nonneg);
    }
    return {std::move(lower), std::move(upper)};
}

SubharmonicReport subharmonic_report(const LinearOperator& op, const Field& u_state,
                                     double tol) {
    const Grid& grid = op.grid();
    require_field(grid, u_state, "subharmonic_report");
    const std::size_t n = grid.interior_count();
    const double ext = u_state.exterior_value;

    std::vector<double> w(n), aw(n);
    for (std::size_t i = 0; i < n; ++i) w[i] = u_state.values[i] - ext;
    op.apply(w, aw);
    double max_apply = -std::numeric_limits<double>::infinity();
    for (double v : aw) max_apply = std::max(max_apply, v);

    const Field u_plus = split_signs(u_state).first;
    for (std::size_t i = 0; i < n; ++i) w[i] = u_plus.values[i] - u_plus.exterior_value;
    op.apply(w, aw);
    double max_apply_plus = -std::numeric_limits<double>::infinity();
    for (double v : aw) max_apply_plus = std::max(max_apply_plus, v);

    SubharmonicReport report;
    report.max_apply = max_apply;
    report.max_apply_positive = max_apply_plus;
    report.tol = tol;
    report.subharmonic = max_apply <= tol;
    report.positive_part_subharmonic = report.subharmonic && max_apply_plus <= tol;
    return report;
}

Field nonlinear_residual(const LinearOperator& op, const Field& u_state, double alpha,
                         double band, double subharmonic_tol) {
    const Grid& grid = op.grid();
    require_field(grid, u_state, "nonlinear_residual");
    const SubharmonicReport report = subharmonic_report(op, u_state, subharmonic_tol);
    if (!report.subharmonic) {
        throw std::invalid_argument(
            "nonlinear_residual: state is not s-subharmonic (max A(U-ext) = " +
            std::to_string(report.max_apply) + "), the min term is undefined");
    }
    const std::size_t n = grid.interior_count();

    std::vector<double> w(n), g(n), gp(n);
    for (std::size_t i = 0; i < n; ++i) w[i] = u_state.values[i] - alpha;
    op.apply(w, g);

    const Field u_plus = split_signs(u_state).first;
    for (std::size_t i = 0; i < n; ++i) w[i] = u_plus.values[i] - u_plus.exterior_value;
    op.apply(w, gp);

    Field r = make_field(grid);
    for (std::size_t i = 0; i < n; ++i) {
        const double chi_contact = u_state.values[i] <= band ? 1.0 : 0.0;
        const double chi_pos = u_state.values[i] > band ? 1.0 : 0.0;
        r.values[i] = -g[i] - chi_contact * std::min(-gp[i], 1.0) - chi_pos;
    }
    return r;
}

std::vector<std::size_t> free_boundary_cells(const Grid& grid, const Field& u_state,
                                             double band) {
    require_field(grid, u_state, "free_boundary_cells");
    const std::size_t n = grid.interior_count();
    std::vector<std::size_t> cells;
    const auto contact = [&](std::size_t i) { return u_state.values[i] <= band; };
    for (std::size_t i = 0; i < n; ++i) {
        const auto [ix, iy] = grid.lattice_of(i);
        const bool ci = contact(i);
        bool flip = false;
        const std::array<std::array<int, 2>, 4> nbs = {
            {{ix - 1, iy}, {ix + 1, iy}, {ix, iy - 1}, {ix, iy + 1}}};
        const int count = grid.dim() == 1 ? 2 : 4;
        for (int k = 0; k < count; ++k) {
            const std::ptrdiff_t j = grid.interior_index(nbs[k][0], nbs[k][1]);
            if (j >= 0 && contact(static_cast<std::size_t>(j)) != ci) {
                flip = true;
                break;
            }
        }
        if (flip) cells.push_back(i);
    }
    return cells;
}

std::vector<std::uint8_t> free_boundary_collar(const Grid& grid, const Field& u_state,
                                               double band) {
    const auto cells = free_boundary_cells(grid, u_state, band);
    std::vector<std::uint8_t> collar(grid.interior_count(), 0);
    for (std::size_t i : cells) {
        collar[i] = 1;
        const auto [ix, iy] = grid.lattice_of(i);
        const std::array<std::array<int, 2>, 4> nbs = {
            {{ix - 1, iy}, {ix + 1, iy}, {ix, iy - 1}, {ix, iy + 1}}};
        const int count = grid.dim() == 1 ? 2 : 4;
        for (int k = 0; k < count; ++k) {
            const std::ptrdiff_t j = grid.interior_index(nbs[k][0], nbs[k][1]);
            if (j >= 0) collar[static_cast<std::size_t>(j)] = 1;
        }
    }
    return collar;
}

EquivalenceMetrics equivalence_check(const LinearOperator& op,
                                     const RearrangementSolution& rearr,
                                     const ObstacleSolution& obst) {
    const Grid& grid = op.grid();
    require_field(grid, rearr.u_hat, "equivalence_check");
    require_field(grid, obst.u, "equivalence_check");
    const double alpha = rearr.alpha;
    if (std::abs(obst.alpha - alpha) > 1e-12 * (std::abs(alpha) + 1.0)) {
        throw std::invalid_argument(
            "equivalence_check: obstacle level does not match the rearrangement plateau");
    }

    EquivalenceMetrics m;
    double sum2 = 0.0;
    for (std::size_t i = 0; i < grid.interior_count(); ++i) {
        const double diff = (alpha - rearr.u_hat.values[i]) - obst.u.values[i];
        m.sup_diff = std::max(m.sup_diff, std::abs(diff));
        sum2 += diff * diff;
    }
    m.l2_diff = std::sqrt(grid.cell_volume() * sum2);

    Field rearr_state;
    rearr_state.values.resize(grid.interior_count());
    for (std::size_t i = 0; i < grid.interior_count(); ++i) {
        rearr_state.values[i] = alpha - rearr.u_hat.values[i];
    }
    rearr_state.exterior_value = alpha;
    m.j_gap = obst.objective - obstacle_objective(op, rearr_state, alpha);
    return m;
}

}  // namespace frop

#pragma once

#include <optional>
#include <vector>

#include "frop/dirichlet.hpp"
#include "frop/errors.hpp"
#include "frop/grid.hpp"
#include "frop/operator.hpp"

namespace frop {

/// Admissible densities: 0 <= f <= 1 with ∫ f = beta. The closure of the
/// class of indicator functions of measure beta.
struct RearrangementClass {
    double beta = 0.0;
};

struct IterationRecord {
    long iteration = 0;
    double objective = 0.0;
    double gap = 0.0;
    double step = 0.0;
};

struct RearrangementSolution {
    Field f_hat;
    Field u_hat;
    double alpha = 0.0;       // plateau level, max of the state
    double gap = 0.0;         // duality gap at termination
    double objective = 0.0;   // Φ(f_hat)
    double initial_objective = 0.0;  // Φ(f⁰), the gap reference
    long iterations = 0;
    std::vector<IterationRecord> log;
};

/// Carries the last iterate so callers can inspect how far the solver got.
class RearrangementConvergenceError : public ConvergenceError {
public:
    RearrangementConvergenceError(const std::string& what, RearrangementSolution last)
        : ConvergenceError(what, last.gap, last.iterations), last_(std::move(last)) {}
    const RearrangementSolution& last_iterate() const noexcept { return last_; }

private:
    RearrangementSolution last_;
};

struct FrankWolfeOptions {
    double gap_tol = 1e-6;  // stop when gap <= gap_tol · Φ(f⁰)
    long max_iterations = 20000;
    double solve_tol = 1e-12;
    SolverBackend backend = SolverBackend::automatic;
    bool keep_log = true;
    long refresh_every = 500;  // re-solve the state from f to shed drift
    /// Move mass between the bathtub vertex and the in-face away vertex
    /// (reverse bathtub fill) instead of mixing toward the vertex alone.
    /// Cures the zig-zag of the plain iteration near a face; the gap
    /// certificate and stopping rule are unchanged.
    bool pairwise_steps = true;
};

struct ProjectedGradientOptions {
    double step = 0.0;  // 0: 1/λ_max of f ↦ u_f, estimated by 20 power iterations
    double tol = 1e-10;  // stop when ‖f_{k+1} - f_k‖₂ <= tol
    long max_iterations = 200000;
    double solve_tol = 1e-12;
    SolverBackend backend = SolverBackend::automatic;
};

/// Minimizer of h^n Σ u_i f_i over the class: fill the cells with the
/// smallest state values first (ties broken by ascending node index), give
/// the fractional remainder to the next cell. Throws when beta exceeds the
/// total cell volume.
Field bathtub_lmo(const Field& u, double beta, double cell_volume);

/// Euclidean projection onto the class: clip(g - λ, 0, 1) with λ found by
/// bisection so the budget matches beta to 1e-12 of the total volume.
Field project_capped_box(const Field& g, double beta, double cell_volume);

/// Frank-Wolfe with the bathtub linear oracle and exact line search on the
/// quadratic objective. The returned gap bounds the suboptimality by
/// convexity.
RearrangementSolution solve_frank_wolfe(const LinearOperator& op,
                                        const RearrangementClass& cls,
                                        const FrankWolfeOptions& options = {});

/// Fixed-step projected gradient, used as an independent cross-check of the
/// Frank-Wolfe solver.
RearrangementSolution solve_projected_gradient(const LinearOperator& op,
                                               const RearrangementClass& cls,
                                               const ProjectedGradientOptions& options = {});

/// Plateau level of a converged solution: the maximum of the state.
double extract_alpha(const RearrangementSolution& sol);

struct StructureTolerances {
    /// Level-set agreement threshold in state units; defaults to 1e-3·alpha.
    std::optional<double> level_delta;
    double density_eps = 1e-3;
    double positivity_floor = 1e-8;
};

struct StructureCheck {
    bool pass = false;
    /// Worst slack: nonnegative iff the check holds.
    double margin = 0.0;
};

/// Named checks of the optimal-solution structure: a) the state lies in
/// [0, alpha], b) below the plateau the density is saturated, c) unsaturated
/// density only occurs on the plateau, d) the density is strictly positive,
/// e) the density takes intermediate values on a set of positive measure.
struct StructureReport {
    StructureCheck state_bounds;
    StructureCheck saturation_below_plateau;
    StructureCheck plateau_where_unsaturated;
    StructureCheck density_positive;
    StructureCheck non_characteristic;
    double alpha = 0.0;
    double level_delta = 0.0;
    double intermediate_measure = 0.0;

    bool pass() const {
        return state_bounds.pass && saturation_below_plateau.pass &&
               plateau_where_unsaturated.pass && density_positive.pass &&
               non_characteristic.pass;
    }
};

StructureReport verify_structure(const LinearOperator& op, const RearrangementSolution& sol,
                                 const StructureTolerances& tols = {});

}  // namespace frop

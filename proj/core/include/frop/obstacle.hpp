#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "frop/grid.hpp"
#include "frop/operator.hpp"
#include "frop/rearrangement.hpp"

namespace frop {

struct ObstacleOptions {
    double tol = 1e-12;  // stop when ‖w_{k+1}-w_k‖₂ <= tol·max(1, ‖w_k‖₂)
    long max_iterations = 500000;
    bool accelerated = false;  // FISTA momentum; the plain iteration is monotone
    double contact_band_rel = 1e-8;  // contact band θ = rel·alpha
    double subharmonic_tol = 1e-6;
    double initial_shift = 0.0;  // starting value of w = U - alpha
    bool keep_log = false;
};

struct SubharmonicReport {
    double max_apply = 0.0;            // max_i (A (U - ext))_i
    double max_apply_positive = 0.0;   // max_i (A (U⁺ - ext⁺))_i
    double tol = 0.0;
    bool subharmonic = false;          // state itself
    bool positive_part_subharmonic = false;  // state and its positive part
};

struct EquivalenceMetrics {
    double sup_diff = 0.0;
    double l2_diff = 0.0;
    double j_gap = 0.0;  // J_h(U) - J_h(alpha - u_hat)
};

struct ObstacleSolution {
    Field u;  // state U; exterior value alpha
    double alpha = 0.0;
    double objective = 0.0;  // J_h(U)
    Field residual_lower;
    Field residual_upper;
    Field nonlinear_residual;
    bool nonlinear_valid = false;
    SubharmonicReport subharmonic;
    double contact_band = 0.0;
    long iterations = 0;
    std::vector<double> objective_log;
};

/// J_h(V) = (1/2) h^n wᵀAw + h^n Σ (w + alpha)⁺ with w = V - alpha. The
/// quadratic coefficient is the one whose stationarity condition reproduces
/// the double obstacle inequalities exactly.
double obstacle_objective(const LinearOperator& op, const Field& u_state, double alpha);

/// Minimizes J_h over states equal to alpha outside D by proximal gradient
/// on the shifted variable w = U - alpha (step 1/λ_max(A) from power
/// iteration). Fills in residual bands, the nonlinear-equation residual and
/// the subharmonicity report of the returned state.
ObstacleSolution solve_obstacle(const LinearOperator& op, double alpha,
                                const ObstacleOptions& options = {});

/// Violations of χ_{U>0} <= -(-Δ)^s U <= χ_{U>=0}; both residuals vanish iff
/// the inequalities hold within the contact band.
std::pair<Field, Field> residual_band(const LinearOperator& op, const Field& u_state,
                                      double alpha, double band);

SubharmonicReport subharmonic_report(const LinearOperator& op, const Field& u_state,
                                     double tol);

/// Residual of -(-Δ)^s U - χ_{U<=0} min(-(-Δ)^s U⁺, 1) = χ_{U>0}. Requires a
/// subharmonic state (the min is undefined otherwise) and throws when the
/// report fails.
Field nonlinear_residual(const LinearOperator& op, const Field& u_state, double alpha,
                         double band, double subharmonic_tol);

/// Interior cells where the contact classification U <= θ flips between
/// lattice neighbors.
std::vector<std::size_t> free_boundary_cells(const Grid& grid, const Field& u_state,
                                             double band);

/// Free-boundary cells dilated by one lattice cell; 1 marks collar members.
std::vector<std::uint8_t> free_boundary_collar(const Grid& grid, const Field& u_state,
                                               double band);

/// Compares the obstacle state against alpha - u_hat from a rearrangement
/// solution on the same operator; requires matching alpha.
EquivalenceMetrics equivalence_check(const LinearOperator& op,
                                     const RearrangementSolution& rearr,
                                     const ObstacleSolution& obst);

}  // namespace frop

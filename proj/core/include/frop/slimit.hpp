#pragma once

#include <string>
#include <vector>

#include "frop/grid.hpp"
#include "frop/operator.hpp"
#include "frop/rearrangement.hpp"

namespace frop {

/// Classical finite-difference Laplacian (3-point in 1D, 5-point in 2D) on
/// the cell-centered grid with homogeneous Dirichlet data imposed through
/// mirror ghost cells, scaled 1/h². Reference operator for the s -> 1 study.
class LocalOperator final : public LinearOperator {
public:
    explicit LocalOperator(Grid grid);

    const Grid& grid() const noexcept override { return grid_; }
    void apply(std::span<const double> w, std::span<double> out) const override;
    double diagonal(std::size_t i) const override { return diag_[i] * inv_h2_; }
    double energy_factor() const noexcept override { return 1.0; }
    std::unique_ptr<DirectSolver> make_direct() const override;

    /// Stencil weight of the diagonal in units of 1/h² (2·dim plus one per
    /// missing neighbor).
    double stencil_diagonal(std::size_t i) const { return diag_[i]; }

private:
    Grid grid_;
    double inv_h2_ = 0.0;
    std::vector<double> diag_;
    std::vector<std::array<std::ptrdiff_t, 4>> neighbors_;
};

LocalOperator assemble_local(const Grid& grid);

/// Frank-Wolfe on the local operator; identical solution type and options.
RearrangementSolution solve_local_rearrangement(const Grid& grid, double beta,
                                                const FrankWolfeOptions& options = {});

struct SweepRow {
    double s = 0.0;
    double alpha = 0.0;
    double objective = 0.0;
    double state_dist = 0.0;    // ‖u_s - u_loc‖ in the h-weighted L² norm
    double frac_measure = 0.0;  // measure of {eps < f < 1-eps}
    std::vector<double> density_tests;  // ∫ (f_s - f_loc) φ_k for fixed probes
    bool failed = false;
    std::string error;
};

struct SweepTable {
    std::vector<SweepRow> rows;
    double local_alpha = 0.0;
    double local_objective = 0.0;
    double local_frac_measure = 0.0;
    std::vector<double> probe_centers;
    double probe_width = 0.0;
};

struct SweepOptions {
    FrankWolfeOptions fw{};
    /// Kernel quadrature loses accuracy as 2s -> 2; orders above the cap are
    /// rejected. Configurable.
    double s_cap = 0.97;
    double intermediate_eps = 1e-3;
    int probes = 5;
    int workers = 1;
};

/// Runs the fractional rearrangement solver per order in s_list (normalized
/// operator, mandatory) plus the local solver once, and tabulates the
/// convergence metrics. Weak* density convergence is probed through fixed
/// mollified test profiles; rows that fail are marked and the sweep
/// continues.
SweepTable s_sweep(const Domain& domain, int n_per_axis, double beta,
                   const std::vector<double>& s_list, const SweepOptions& options = {});

}  // namespace frop

#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "frop/dense.hpp"
#include "frop/grid.hpp"
#include "frop/kernel.hpp"

namespace frop {

/// Direct factorization handle attached to an operator (dense Cholesky for
/// the nonlocal matrix, Thomas for the 1D local stencil).
class DirectSolver {
public:
    virtual ~DirectSolver() = default;
    virtual void solve(std::span<const double> rhs, std::span<double> x) const = 0;
};

/// Discrete elliptic operator acting on interior node values of fields with
/// zero exterior value. The energy seminorm is energy_factor() · h^n wᵀAw;
/// the factor is 2 for the nonlocal operator (the bilinear bracket is half
/// the double integral) and 1 for the local reference operator.
class LinearOperator {
public:
    virtual ~LinearOperator() = default;

    virtual const Grid& grid() const noexcept = 0;
    virtual void apply(std::span<const double> w, std::span<double> out) const = 0;
    virtual double diagonal(std::size_t i) const = 0;
    virtual double energy_factor() const noexcept = 0;

    /// Dense matrix when the operator stores one, nullptr otherwise.
    virtual const DenseMatrix* dense() const noexcept { return nullptr; }
    /// Direct factorization when one is available, nullptr otherwise.
    virtual std::unique_ptr<DirectSolver> make_direct() const { return nullptr; }
};

struct AssembleOptions {
    /// Dense storage grows as interior_count²; refuse beyond this cap.
    std::size_t max_interior = 4096;
    /// Worker threads for row assembly (1 = serial). Output is identical
    /// for any worker count.
    int threads = 1;
};

/// Dense symmetric realization of the fractional operator with
/// zero-extension exterior handling. Row sums equal the per-node exterior
/// tail weights, giving the M-matrix structure (nonpositive off-diagonals,
/// inverse positivity, discrete maximum principle).
///
/// The seminorm convention follows the kernel constant: with the bare
/// kernel the seminorm squared is the full double integral, twice the
/// bilinear bracket; with the normalizing constant it is the bracket
/// itself, which is what converges to the Dirichlet energy as s -> 1.
class NonlocalOperator final : public LinearOperator {
public:
    NonlocalOperator(Grid grid, KernelParams params, DenseMatrix a, std::vector<double> tail,
                     double self_cell_weight);

    const Grid& grid() const noexcept override { return grid_; }
    const KernelParams& params() const noexcept { return params_; }
    const DenseMatrix& matrix() const noexcept { return a_; }
    const std::vector<double>& tail() const noexcept { return tail_; }
    /// Stencil weight κ/h² of the self-cell second-moment correction.
    double self_cell_weight() const noexcept { return self_cell_weight_; }

    void apply(std::span<const double> w, std::span<double> out) const override;
    double diagonal(std::size_t i) const override { return a_(i, i); }
    double energy_factor() const noexcept override { return params_.normalized ? 1.0 : 2.0; }
    const DenseMatrix* dense() const noexcept override { return &a_; }
    std::unique_ptr<DirectSolver> make_direct() const override;

private:
    Grid grid_;
    KernelParams params_;
    DenseMatrix a_;
    std::vector<double> tail_;
    double self_cell_weight_ = 0.0;
};

NonlocalOperator assemble(const Grid& grid, const KernelParams& params,
                          const AssembleOptions& options = {});

/// A·w for a field with zero exterior value; throws for nonzero exterior
/// (shift to the zero-exterior variable first).
Field apply(const LinearOperator& op, const Field& w);

/// Discrete seminorm squared |w|_s² = energy_factor · h^n wᵀAw (≥ 0).
double energy(const LinearOperator& op, const Field& w);

}  // namespace frop

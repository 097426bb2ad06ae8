#pragma once

#include <memory>
#include <span>
#include <vector>

#include "frop/operator.hpp"

namespace frop {

enum class SolverBackend {
    automatic,  // direct factorization when the operator provides one, else cg
    cg,
    cholesky,
};

/// Start-vector seed of every power iteration in the library. A fixed
/// constant: identical inputs give bit-identical runs; recorded in the CLI
/// run summaries.
inline constexpr unsigned kPowerIterationSeed = 20240117u;

struct CgResult {
    long iterations = 0;
    double relative_residual = 0.0;
};

/// Jacobi-preconditioned conjugate gradient on the SPD operator.
/// x holds the initial guess on entry and the solution on exit.
/// Throws ConvergenceError after 10·n iterations.
CgResult cg_solve(const LinearOperator& op, std::span<const double> rhs, std::span<double> x,
                  double tol);

/// Solves A u = f for a zero-exterior load f. Default tolerance 1e-10 on the
/// relative residual.
Field solve(const LinearOperator& op, const Field& f, double tol = 1e-10);

/// Objective Φ(f) = energy of the state u_f, evaluated through the discrete
/// weak form as energy_factor · h^n Σ f·u_f.
double compliance(const LinearOperator& op, const Field& f, double tol = 1e-10);

/// Repeated solves against one immutable operator. Uses the operator's
/// direct factorization when available (built once), otherwise CG warm
/// started from the previous solution.
class StateSolver {
public:
    StateSolver(const LinearOperator& op, SolverBackend backend = SolverBackend::automatic,
                double tol = 1e-12);

    std::vector<double> solve(std::span<const double> rhs);
    void solve(std::span<const double> rhs, std::span<double> x);

    const LinearOperator& op() const noexcept { return op_; }

private:
    const LinearOperator& op_;
    double tol_;
    std::unique_ptr<DirectSolver> direct_;
    std::vector<double> warm_;
};

}  // namespace frop

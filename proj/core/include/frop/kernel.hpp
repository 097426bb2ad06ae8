#pragma once

#include "frop/grid.hpp"

namespace frop {

/// Parameters of the kernel |z|^{-n-2s}. With normalized = false the
/// operator constant is 1; with normalized = true it is C(n,s), the scaling
/// that keeps energies finite in the s -> 1 limit.
struct KernelParams {
    int dim = 1;          // 1 or 2
    double s = 0.5;       // fractional order, in (0,1)
    bool normalized = false;

    void validate() const;
    /// Multiplicative operator constant: C(dim, s) if normalized, else 1.
    double constant() const;
};

/// C(n,s) = (∫ (1-cos ζ₁)/|ζ|^{n+2s} dζ)^{-1}, computed by quadrature of the
/// defining integral: a power series below |ζ| = 1, adaptive quadrature up to
/// a cutoff radius, and an asymptotic power-law tail beyond it. Relative
/// accuracy better than 1e-8. Throws std::domain_error for s outside (0,1)
/// or n outside {1,2}.
double normalization_constant(int dim, double s);

/// Closed-form solution of the unit-ball problem with unit right-hand side
/// and zero exterior data: u*(x) = κ (1-|x|²)₊^s with
/// κ = Γ(n/2) / (2^{2s} Γ(n/2+s) Γ(1+s)) for the normalized operator.
/// For the unnormalized operator the value is scaled by C(n,s).
/// Serves as an external discretization oracle.
double getoor_reference(const KernelParams& params, Point x);

}  // namespace frop

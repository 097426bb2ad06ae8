#include "frop/dirichlet.hpp"

#include <cmath>
#include <stdexcept>

#include "frop/errors.hpp"

namespace frop {

CgResult cg_solve(const LinearOperator& op, std::span<const double> rhs, std::span<double> x,
                  double tol) {
    const std::size_t n = rhs.size();
    if (x.size() != n) throw std::invalid_argument("cg_solve: size mismatch");
    if (!(tol > 0.0)) throw std::invalid_argument("cg_solve: tolerance must be positive");

    const double rhs_norm = norm2(rhs);
    if (rhs_norm == 0.0) {
        std::fill(x.begin(), x.end(), 0.0);
        return {0, 0.0};
    }

    std::vector<double> r(n), z(n), p(n), q(n);
    op.apply(x, q);
    for (std::size_t i = 0; i < n; ++i) r[i] = rhs[i] - q[i];

    auto precondition = [&](const std::vector<double>& in, std::vector<double>& out) {
        for (std::size_t i = 0; i < n; ++i) out[i] = in[i] / op.diagonal(i);
    };

    precondition(r, z);
    p = z;
    double rz = dot(r, z);
    double res = norm2(r);

    const long max_iter = 10 * static_cast<long>(n);
    for (long it = 1; it <= max_iter; ++it) {
        if (res <= tol * rhs_norm) return {it - 1, res / rhs_norm};
        op.apply(p, q);
        const double pq = dot(p, q);
        if (!(pq > 0.0)) {
            throw ConvergenceError("cg_solve: operator lost positive definiteness", res, it);
        }
        const double alpha = rz / pq;
        for (std::size_t i = 0; i < n; ++i) {
            x[i] += alpha * p[i];
            r[i] -= alpha * q[i];
        }
        res = norm2(r);
        precondition(r, z);
        const double rz_new = dot(r, z);
        const double beta = rz_new / rz;
        rz = rz_new;
        for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
    }
    if (res <= tol * rhs_norm) return {max_iter, res / rhs_norm};
    throw ConvergenceError("cg_solve: iteration cap reached, relative residual " +
                               std::to_string(res / rhs_norm),
                           res / rhs_norm, max_iter);
}

Field solve(const LinearOperator& op, const Field& f, double tol) {
    require_field(op.grid(), f, "solve");
    if (f.exterior_value != 0.0) {
        throw std::invalid_argument("solve: load must have zero exterior value");
    }
    Field u = make_field(op.grid());
    cg_solve(op, f.values, u.values, tol);
    return u;
}

double compliance(const LinearOperator& op, const Field& f, double tol) {
    const Field u = solve(op, f, tol);
    const double hn = std::pow(op.grid().h(), op.grid().dim());
    return op.energy_factor() * hn * dot(f.values, u.values);
}

StateSolver::StateSolver(const LinearOperator& op, SolverBackend backend, double tol)
    : op_(op), tol_(tol) {
    if (backend == SolverBackend::cholesky || backend == SolverBackend::automatic) {
        direct_ = op.make_direct();
        if (!direct_ && backend == SolverBackend::cholesky) {
            throw std::invalid_argument("StateSolver: operator has no direct factorization");
        }
    }
    if (!direct_) warm_.assign(op.grid().interior_count(), 0.0);
}

void StateSolver::solve(std::span<const double> rhs, std::span<double> x) {
    if (direct_) {
        direct_->solve(rhs, x);
        return;
    }
    std::copy(warm_.begin(), warm_.end(), x.begin());
    cg_solve(op_, rhs, x, tol_);
    warm_.assign(x.begin(), x.end());
}

std::vector<double> StateSolver::solve(std::span<const double> rhs) {
    std::vector<double> x(rhs.size());
    solve(rhs, x);
    return x;
}

}  // namespace frop

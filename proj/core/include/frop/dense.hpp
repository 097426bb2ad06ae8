#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace frop {

/// Dense row-major square matrix. The nonlocal kernel has global support,
/// so the discrete operator is dense by nature; at desk scale (a few
/// thousand unknowns) this is both the simplest and the fastest option.
class DenseMatrix {
public:
    DenseMatrix() = default;
    explicit DenseMatrix(std::size_t n) : n_(n), data_(n * n, 0.0) {}

    std::size_t size() const noexcept { return n_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }

    std::span<const double> row(std::size_t i) const {
        return std::span<const double>(data_.data() + i * n_, n_);
    }
    std::span<double> row(std::size_t i) {
        return std::span<double>(data_.data() + i * n_, n_);
    }

    const std::vector<double>& data() const noexcept { return data_; }

    /// y = A x
    void multiply(std::span<const double> x, std::span<double> y) const;

private:
    std::size_t n_ = 0;
    std::vector<double> data_;
};

/// Cholesky factorization A = L Lᵀ of a symmetric positive definite matrix.
/// Throws std::runtime_error on a nonpositive pivot.
class DenseCholesky {
public:
    explicit DenseCholesky(const DenseMatrix& a);

    void solve(std::span<const double> b, std::span<double> x) const;
    std::vector<double> solve(std::span<const double> b) const;

    std::size_t size() const noexcept { return n_; }

private:
    std::size_t n_;
    std::vector<double> l_;  // lower triangle, row-major over full storage
};

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);

}  // namespace frop

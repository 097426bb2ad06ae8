#include "frop/dense.hpp"

#include <cmath>
#include <stdexcept>

namespace frop {

void DenseMatrix::multiply(std::span<const double> x, std::span<double> y) const {
    if (x.size() != n_ || y.size() != n_) {
        throw std::invalid_argument("DenseMatrix::multiply: size mismatch");
    }
    const double* a = data_.data();
    for (std::size_t i = 0; i < n_; ++i) {
        const double* row = a + i * n_;
        double acc = 0.0;
        for (std::size_t j = 0; j < n_; ++j) acc += row[j] * x[j];
        y[i] = acc;
    }
}

DenseCholesky::DenseCholesky(const DenseMatrix& a) : n_(a.size()), l_(a.data()) {
    // In-place lower Cholesky; the strict upper triangle of l_ is ignored.
    for (std::size_t j = 0; j < n_; ++j) {
        double d = l_[j * n_ + j];
        for (std::size_t k = 0; k < j; ++k) {
            const double ljk = l_[j * n_ + k];
            d -= ljk * ljk;
        }
        if (!(d > 0.0)) {
            throw std::runtime_error("DenseCholesky: matrix is not positive definite");
        }
        const double ljj = std::sqrt(d);
        l_[j * n_ + j] = ljj;
        for (std::size_t i = j + 1; i < n_; ++i) {
            double s = l_[i * n_ + j];
            const double* li = l_.data() + i * n_;
            const double* lj = l_.data() + j * n_;
            for (std::size_t k = 0; k < j; ++k) s -= li[k] * lj[k];
            l_[i * n_ + j] = s / ljj;
        }
    }
}

void DenseCholesky::solve(std::span<const double> b, std::span<double> x) const {
    if (b.size() != n_ || x.size() != n_) {
        throw std::invalid_argument("DenseCholesky::solve: size mismatch");
    }
    // forward: L y = b
    for (std::size_t i = 0; i < n_; ++i) {
        double s = b[i];
        const double* li = l_.data() + i * n_;
        for (std::size_t k = 0; k < i; ++k) s -= li[k] * x[k];
        x[i] = s / li[i];
    }
    // backward: Lᵀ x = y
    for (std::size_t ii = n_; ii-- > 0;) {
        double s = x[ii];
        for (std::size_t k = ii + 1; k < n_; ++k) s -= l_[k * n_ + ii] * x[k];
        x[ii] = s / l_[ii * n_ + ii];
    }
}

std::vector<double> DenseCholesky::solve(std::span<const double> b) const {
    std::vector<double> x(n_);
    solve(b, x);
    return x;
}

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

}  // namespace frop

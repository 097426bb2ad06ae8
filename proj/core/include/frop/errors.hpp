#pragma once

#include <stdexcept>
#include <string>

namespace frop {

/// Thrown when an iterative solver hits its iteration cap before reaching
/// the requested tolerance. Carries the last residual so callers can decide
/// whether the partial result is usable.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, double residual, long iterations)
        : std::runtime_error(what), residual_(residual), iterations_(iterations) {}

    double residual() const noexcept { return residual_; }
    long iterations() const noexcept { return iterations_; }

private:
    double residual_;
    long iterations_;
};

}  // namespace frop

#include "frop/kernel.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>

namespace frop {

namespace {

constexpr double kPi = 3.14159265358979323846;

double simpson_rule(double a, double b, double fa, double fm, double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_simpson_rec(const std::function<double(double)>& f, double a, double b,
                            double fa, double fm, double fb, double whole, double tol,
                            int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = simpson_rule(a, m, fa, flm, fm);
    const double right = simpson_rule(m, b, fm, frm, fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
        return left + right + delta / 15.0;
    }
    return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol, int depth = 40) {
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double whole = simpson_rule(a, b, fa, fm, fb);
    return adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, tol, depth);
}

// ∫_R^∞ cos(t+phase) t^{-a} dt and the sin companion, by repeated
// integration by parts. Truncation error after `depth` levels is
// O(a (a+1) ... R^{-a-depth}), negligible for R >= 40.
double osc_sin_tail(double b, double phase, double r, int depth);

double osc_cos_tail(double a, double phase, double r, int depth) {
    if (depth <= 0) return 0.0;
    return -std::sin(r + phase) * std::pow(r, -a) +
           a * osc_sin_tail(a + 1.0, phase, r, depth - 1);
}

double osc_sin_tail(double b, double phase, double r, int depth) {
    if (depth <= 0) return 0.0;
    return std::cos(r + phase) * std::pow(r, -b) -
           b * osc_cos_tail(b + 1.0, phase, r, depth - 1);
}

// ∫_0^1 (1 - cos t)/t^{1+2s} dt via the cosine power series; the factorial
// denominators make a dozen terms plenty.
double near_origin_series_1d(double s) {
    double sum = 0.0;
    double fact = 1.0;  // (2k)!
    double sign = 1.0;
    for (int k = 1; k <= 20; ++k) {
        fact *= (2.0 * k - 1.0) * (2.0 * k);
        const double term = sign / (fact * (2.0 * k - 2.0 * s));
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum)) break;
        sign = -sign;
    }
    return sum;
}

// ∫_0^1 (1 - J₀(r))/r^{1+2s} dr via 1 - J₀(r) = Σ (-1)^{k+1} (r/2)^{2k}/(k!)².
double near_origin_series_2d(double s) {
    double sum = 0.0;
    double kfact = 1.0;
    double sign = 1.0;
    for (int k = 1; k <= 25; ++k) {
        kfact *= k;
        const double term = sign * std::pow(0.25, k) / (kfact * kfact * (2.0 * k - 2.0 * s));
        sum += term;
        if (std::abs(term) < 1e-18 * std::abs(sum)) break;
        sign = -sign;
    }
    return sum;
}

// ∫_R^∞ J₀(r) r^{-1-2s} dr from the large-argument expansion
// J₀(r) = sqrt(2/(π r)) [P(r) cos(r - π/4) - Q(r) sin(r - π/4)].
double bessel_tail_2d(double s, double r) {
    const int depth = 12;
    const double c = std::sqrt(2.0 / kPi);
    const double cphase = -kPi / 4.0;       // cos(r - π/4)
    const double sphase = -3.0 * kPi / 4.0;  // sin(r - π/4) = cos(r - 3π/4)
    double v = osc_cos_tail(1.5 + 2.0 * s, cphase, r, depth);
    v -= (9.0 / 128.0) * osc_cos_tail(3.5 + 2.0 * s, cphase, r, depth);
    v += (1.0 / 8.0) * osc_cos_tail(2.5 + 2.0 * s, sphase, r, depth);
    v -= (75.0 / 1024.0) * osc_cos_tail(4.5 + 2.0 * s, sphase, r, depth);
    return c * v;
}

}  // namespace

void KernelParams::validate() const {
    if (dim != 1 && dim != 2) {
        throw std::domain_error("KernelParams: dimension must be 1 or 2, got " +
                                std::to_string(dim));
    }
    if (!(s > 0.0) || !(s < 1.0)) {
        throw std::domain_error("KernelParams: fractional order s must lie in (0,1), got " +
                                std::to_string(s));
    }
}

double KernelParams::constant() const {
    validate();
    return normalized ? normalization_constant(dim, s) : 1.0;
}

double normalization_constant(int dim, double s) {
    KernelParams probe{dim, s, false};
    probe.validate();

    const double cutoff = 50.0;
    const double tail_power = std::pow(cutoff, -2.0 * s) / (2.0 * s);
    double integral = 0.0;
    if (dim == 1) {
        const auto f = [s](double t) { return (1.0 - std::cos(t)) * std::pow(t, -1.0 - 2.0 * s); };
        const double mid = adaptive_simpson(f, 1.0, cutoff, 1e-12);
        const double osc = osc_cos_tail(1.0 + 2.0 * s, 0.0, cutoff, 12);
        integral = 2.0 * (near_origin_series_1d(s) + mid + tail_power - osc);
    } else {
        const auto f = [s](double r) {
            return (1.0 - std::cyl_bessel_j(0.0, r)) * std::pow(r, -1.0 - 2.0 * s);
        };
        const double mid = adaptive_simpson(f, 1.0, cutoff, 1e-12);
        const double bessel = bessel_tail_2d(s, cutoff);
        integral = 2.0 * kPi * (near_origin_series_2d(s) + mid + tail_power - bessel);
    }
    return 1.0 / integral;
}

double getoor_reference(const KernelParams& params, Point x) {
    params.validate();
    const double n = params.dim;
    const double s = params.s;
    const double r2 = params.dim == 1 ? x.x * x.x : x.x * x.x + x.y * x.y;
    if (r2 >= 1.0) return 0.0;
    const double kappa =
        std::tgamma(0.5 * n) /
        (std::pow(2.0, 2.0 * s) * std::tgamma(0.5 * n + s) * std::tgamma(1.0 + s));
    double value = kappa * std::pow(1.0 - r2, s);
    if (!params.normalized) value *= normalization_constant(params.dim, s);
    return value;
}

}  // namespace frop

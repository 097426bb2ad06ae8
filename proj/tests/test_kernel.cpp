#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "frop/kernel.hpp"

using namespace frop;

namespace {

constexpr double kPi = 3.14159265358979323846;

// Independent oracle: the known closed form of the normalizing constant,
// C(n,s) = s 2^{2s} Γ(n/2 + s) / (π^{n/2} Γ(1-s)).
double closed_form_constant(int dim, double s) {
    return s * std::pow(2.0, 2.0 * s) * std::tgamma(0.5 * dim + s) /
           (std::pow(kPi, 0.5 * dim) * std::tgamma(1.0 - s));
}

}  // namespace

TEST_CASE("platform gamma function is accurate on (0.1, 5)") {
    // Spot values with known closed forms.
    CHECK(std::abs(std::tgamma(0.5) - std::sqrt(kPi)) < 1e-12);
    CHECK(std::abs(std::tgamma(1.5) - 0.5 * std::sqrt(kPi)) < 1e-12);
    CHECK(std::abs(std::tgamma(4.0) - 6.0) < 1e-12);
    CHECK(std::abs(std::tgamma(0.1) - 9.5135076986687318) < 1e-10 * 9.5135);
    CHECK(std::abs(std::tgamma(2.5) - 1.3293403881791370) < 1e-10);
    // Functional identity Γ(x+1) = x Γ(x) across the range.
    for (double x = 0.1; x < 4.0; x += 0.17) {
        CHECK(std::tgamma(x + 1.0) == doctest::Approx(x * std::tgamma(x)).epsilon(1e-12));
    }
}

TEST_CASE("normalization constant matches the closed form") {
    CHECK(normalization_constant(1, 0.5) == doctest::Approx(1.0 / kPi).epsilon(1e-8));
    for (double s = 0.1; s < 0.95; s += 0.1) {
        const double expected = closed_form_constant(1, s);
        CHECK(normalization_constant(1, s) == doctest::Approx(expected).epsilon(1e-6));
    }
    for (double s : {0.1, 0.3, 0.5, 0.7, 0.9, 0.95}) {
        const double expected = closed_form_constant(2, s);
        CHECK(normalization_constant(2, s) == doctest::Approx(expected).epsilon(1e-6));
    }
    // C(2, 1/2) = 1/(2π) in closed form.
    CHECK(normalization_constant(2, 0.5) == doctest::Approx(1.0 / (2.0 * kPi)).epsilon(1e-8));
}

TEST_CASE("normalization constant behaves like 2(1-s) near s = 1") {
    double prev_err = 1e9;
    for (double s : {0.9, 0.99, 0.999}) {
        const double ratio = normalization_constant(1, s) / (1.0 - s);
        const double err = std::abs(ratio - 2.0);
        CHECK(err < prev_err);
        prev_err = err;
    }
    CHECK(prev_err < 0.01 * 2.0);
}

TEST_CASE("normalization constant rejects out-of-range parameters") {
    CHECK_THROWS_AS(normalization_constant(1, 0.0), std::domain_error);
    CHECK_THROWS_AS(normalization_constant(1, 1.0), std::domain_error);
    CHECK_THROWS_AS(normalization_constant(3, 0.5), std::domain_error);
    CHECK_THROWS_AS(normalization_constant(0, 0.5), std::domain_error);
}

TEST_CASE("unit-ball reference solution") {
    KernelParams normalized{1, 0.5, true};
    // κ = Γ(1/2) / (2 Γ(1) Γ(3/2)) = 1 at n = 1, s = 1/2.
    CHECK(getoor_reference(normalized, Point{0.0, 0.0}) == doctest::Approx(1.0).epsilon(1e-12));

    SUBCASE("vanishes outside the ball") {
        CHECK(getoor_reference(normalized, Point{1.0, 0.0}) == 0.0);
        CHECK(getoor_reference(normalized, Point{-1.3, 0.0}) == 0.0);
    }

    SUBCASE("radially symmetric and nonincreasing") {
        double prev = getoor_reference(normalized, Point{0.0, 0.0});
        for (double r = 0.1; r < 1.05; r += 0.1) {
            const double v = getoor_reference(normalized, Point{r, 0.0});
            CHECK(v == getoor_reference(normalized, Point{-r, 0.0}));
            CHECK(v <= prev);
            CHECK(v >= 0.0);
            prev = v;
        }
    }

    SUBCASE("unnormalized value scales by the constant") {
        KernelParams unnormalized{1, 0.5, false};
        const double scale = normalization_constant(1, 0.5);
        for (double r : {0.0, 0.25, 0.6}) {
            CHECK(getoor_reference(unnormalized, Point{r, 0.0}) ==
                  doctest::Approx(scale * getoor_reference(normalized, Point{r, 0.0}))
                      .epsilon(1e-12));
        }
    }

    SUBCASE("2D value at the center") {
        KernelParams two_d{2, 0.5, true};
        // κ = Γ(1)/(2 Γ(3/2) Γ(3/2)) = 2/π at n = 2, s = 1/2.
        CHECK(getoor_reference(two_d, Point{0.0, 0.0}) ==
              doctest::Approx(2.0 / kPi).epsilon(1e-12));
    }
}

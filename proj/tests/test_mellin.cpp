#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "primelab/arith.hpp"
#include "primelab/mellin.hpp"

using namespace primelab;

namespace {

// Closed forms: power  1 / (s + a - 1),  uniform  (1 - X^{1-s}) / (s - 1).
double closed_mellin(const ModelDensity& d, double s) {
    if (d.family() == ModelDensity::Family::power) return 1.0 / (s + d.parameter() - 1.0);
    if (s == 1.0) return std::log(d.parameter());
    return -std::expm1((1.0 - s) * std::log(d.parameter())) / (s - 1.0);
}

double factorial(unsigned r) { return r <= 1 ? 1.0 : r * factorial(r - 1); }

}  // namespace

TEST_CASE("density descriptors") {
    const ModelDensity p = ModelDensity::parse("power:alpha=2");
    CHECK(p.family() == ModelDensity::Family::power);
    CHECK(p(1.0) == 1.0);
    CHECK(p(2.0) == 0.25);
    CHECK(p(0.5) == 0.0);
    CHECK(p.abscissa() == -1.0);
    CHECK(p.to_string() == "power:alpha=2");
    const ModelDensity u = ModelDensity::parse("uniform:X=10");
    CHECK(u(10.0) == 1.0);
    CHECK(u(10.5) == 0.0);
    CHECK(std::isinf(u.abscissa()));
    for (const char* bad : {"power", "power:alpha=-1", "power:alpha=", "uniform:X=1", "uniform:X=abc", "gauss:s=1"})
        CHECK_THROWS_AS(ModelDensity::parse(bad), std::invalid_argument);
}

TEST_CASE("Mellin transforms against closed forms") {
    CHECK(mellin(ModelDensity::power(2), 1.5) == doctest::Approx(0.4).epsilon(1e-10));
    CHECK(mellin(ModelDensity::power(0), 2.0) == doctest::Approx(1.0).epsilon(1e-10));
    for (const char* text : {"power:alpha=2", "power:alpha=0.5", "power:alpha=0", "uniform:X=10", "uniform:X=1000"}) {
        const ModelDensity d = ModelDensity::parse(text);
        for (double s : {1.2, 1.5, 2.0, 3.0, 7.0}) {
            CHECK(mellin(d, s) == doctest::Approx(closed_mellin(d, s)).epsilon(1e-8));
            // -d/ds of the closed form
            const double h = 1e-6;
            const double deriv = (closed_mellin(d, s - h) - closed_mellin(d, s + h)) / (2 * h);
            CHECK(mellin_log_weighted(d, s) == doctest::Approx(deriv).epsilon(1e-6));
        }
    }
    CHECK(mellin(ModelDensity::uniform(10), -1.0) == doctest::Approx(49.5).epsilon(1e-9));
    CHECK_THROWS_AS(mellin(ModelDensity::power(0), 1.0), std::invalid_argument);
    CHECK_THROWS_AS(mellin(ModelDensity::power(2), -1.0), std::invalid_argument);
    CHECK_THROWS_AS(mellin_log_weighted(ModelDensity::power(0.5), 0.4), std::invalid_argument);
}

TEST_CASE("factorization identity for r <= 3") {
    for (const char* text : {"power:alpha=2", "uniform:X=10"}) {
        const ModelDensity d = ModelDensity::parse(text);
        for (double s : {1.5, 2.0, 3.0}) {
            const double m = mellin(d, s);
            CHECK(rho_r_mellin(d, 1, s) == m);
            for (unsigned r = 2; r <= 3; ++r) {
                const double lhs = factorial(r) * rho_r_mellin(d, r, s);
                CHECK(std::abs(lhs - std::pow(m, r)) <= 10 * 10 * kNestedRelTol * std::pow(m, r));
            }
        }
    }
    CHECK(std::abs(rho_r_mellin(ModelDensity::power(2), 2, 1.5) - 0.08) < 1e-6);
    CHECK_THROWS_AS(rho_r_mellin(ModelDensity::power(2), 0, 1.5), std::invalid_argument);
    CHECK_THROWS_AS(rho_r_mellin(ModelDensity::power(2), 4, 1.5), std::invalid_argument);
    CHECK_THROWS_AS(rho_r_mellin(ModelDensity::power(0), 2, 0.5), std::invalid_argument);
}

TEST_CASE("exponential sum and its inversion") {
    const ModelDensity d = ModelDensity::power(2);
    CHECK(rho_all_mellin(d, 1.5, 0) == 1.0);
    CHECK(rho_all_mellin(d, 1.5, 1) == doctest::Approx(1.4));
    CHECK(std::abs(rho_all_mellin(d, 1.5, 20) - std::exp(mellin(d, 1.5))) < 1e-10);
    for (double s : {1.01, 1.5, 2.0, 5.0})
        CHECK(single_factor_mellin(1.0 / (s - 1.0)) == doctest::Approx(std::log(1.0 / (s - 1.0))));
    CHECK_THROWS_AS(single_factor_mellin(0.0), std::invalid_argument);
}

TEST_CASE("bounded densities decay geometrically in s") {
    for (const char* text : {"power:alpha=2", "power:alpha=0", "uniform:X=10", "uniform:X=3"}) {
        const ModelDensity d = ModelDensity::parse(text);
        const double a = mellin(d, 10), b = mellin(d, 20), c = mellin(d, 40);
        CHECK(a > b);
        CHECK(b > c);
        CHECK(c > 0.0);
        CHECK(b / a <= 0.6);
        CHECK(c / b <= 0.6);
    }
}

TEST_CASE("derivative relation by finite differences") {
    for (const char* text : {"power:alpha=2", "power:alpha=0.5", "uniform:X=10"}) {
        const ModelDensity d = ModelDensity::parse(text);
        for (double s : {1.5, 2.0, 3.0}) {
            const double h = 1e-4;
            const double fd = (mellin(d, s - h) - mellin(d, s + h)) / (2 * h);
            CHECK(std::abs(fd - mellin_log_weighted(d, s)) <= 1e-4 * std::abs(fd));
        }
    }
}

TEST_CASE("zeta near the pole") {
    CHECK(zeta_near_one(2.0) == doctest::Approx(std::numbers::pi * std::numbers::pi / 6 - 1).epsilon(1e-12));
    // zeta(3/2) = 2.6123753486854883
    CHECK(zeta_near_one(1.5) == doctest::Approx(2.6123753486854883 - 2.0).epsilon(1e-12));
    CHECK(std::abs(zeta_near_one(1.001) - kEulerGamma) < 1e-2);
    // zeta(s) - 1/(s-1) = gamma - gamma_1 (s - 1) + ..., gamma_1 = -0.0728158454836767
    CHECK(zeta_near_one(1.000001) == doctest::Approx(kEulerGamma + 0.0728158454836767e-6).epsilon(1e-12));
    double previous = 1.0;
    for (double h : {0.1, 0.01, 0.001}) {
        const double gap = std::abs(zeta_near_one(1 + h) - kEulerGamma);
        CHECK(gap < previous);
        previous = gap;
    }
    CHECK_THROWS_AS(zeta_near_one(1.0), std::invalid_argument);
    CHECK_THROWS_AS(zeta_near_one(2.5), std::invalid_argument);
}

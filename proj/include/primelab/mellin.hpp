// mellin.hpp
// Mellin transforms M(s) = int_1^inf x^{-s} rho(x) dx of model densities on
// [1, inf), the r-factor ordered-region integrals, their exponential sum and
// zeta(s) - 1/(s - 1) near the pole.

#pragma once

#include <string>
#include <string_view>

namespace primelab {

// A closed-form density on [1, inf):
//   power:alpha=a    rho(x) = x^{-a}, a >= 0  (abscissa of convergence 1 - a)
//   uniform:X=b      rho(x) = 1 on [1, b], 0 beyond, b > 1  (entire)
class ModelDensity {
public:
    enum class Family { power, uniform };

    static ModelDensity power(double alpha);
    static ModelDensity uniform(double upper);
    // Throws std::invalid_argument on malformed text or parameters.
    static ModelDensity parse(std::string_view text);

    Family family() const { return family_; }
    double parameter() const { return parameter_; }
    double operator()(double x) const;
    // Transforms converge for s > abscissa(); -inf for uniform.
    double abscissa() const;
    std::string to_string() const;

private:
    ModelDensity(Family family, double parameter) : family_(family), parameter_(parameter) {}

    Family family_;
    double parameter_;
};

// Relative quadrature tolerances: mellin() and the r = 1 case, and the
// outermost level of the r >= 2 nested integrals.
inline constexpr double kMellinRelTol = 1e-11;
inline constexpr double kNestedRelTol = 1e-9;

// int_1^inf x^{-s} rho(x) dx. Throws std::invalid_argument if s <= abscissa.
double mellin(const ModelDensity& density, double s);

// int_1^inf x^{-s} rho(x) ln(x) dx, which equals -d/ds mellin(density, s).
double mellin_log_weighted(const ModelDensity& density, double s);

// Nested quadrature of the ordered-region integral
//   int_{1 <= x_1 <= ... <= x_r} prod_i x_i^{-s} rho(x_i) dx_i,   r in {1, 2, 3}.
double rho_r_mellin(const ModelDensity& density, unsigned r, double s);

// sum_{r=0}^{r_max} mellin(density, s)^r / r!.
double rho_all_mellin(const ModelDensity& density, double s, unsigned r_max);

// The single-factor transform implied by a given all-factor transform: the
// logarithm, inverting rho_all = exp(rho_1).
double single_factor_mellin(double rho_all_value);

// zeta(s) - 1/(s - 1) for 1 < s <= 2 via Euler-Maclaurin summation with two
// Bernoulli correction terms.
double zeta_near_one(double s);

}  // namespace primelab

// arith.hpp
// Prime-counting statistics, classical constants, residue classes,
// Dirichlet characters and L-series partial sums.

#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "primelab/sieve.hpp"

namespace primelab {

inline constexpr double kEulerGamma = 0.5772156649015329;

// A truncated infinite product or series. |value - limit| <= tail_bound
// whenever the estimate that produced tail_bound applies; tail_bound = 0
// means the quantity is a finite product computed exactly.
struct SeriesEstimate {
    double value = 0.0;
    std::uint64_t truncation_point = 0;
    double tail_bound = 0.0;
};

// counts[a] = number of primes p <= x with p = a (mod modulus).
struct ResidueProfile {
    std::uint64_t modulus = 1;
    std::uint64_t limit = 0;
    std::vector<std::uint64_t> counts;

    std::uint64_t total() const;
    // phi(b) * counts[a] / pi(x) - 1.
    double deviation(std::uint64_t a, std::uint64_t phi_b) const;
};

struct DeviationRow {
    std::uint64_t modulus;
    double max_dev;
    double running_avg;
};

struct MertensResult {
    SeriesEstimate product;  // prod_{p <= sqrt(x)} (1 - 1/p)
    double target;           // 2 e^{-gamma} / ln x
    double ratio() const { return product.value / target; }
};

struct Residue {
    std::uint64_t value;
    std::uint64_t modulus;

    friend bool operator==(const Residue&, const Residue&) = default;
};

std::uint64_t pi_count(std::uint64_t x, const PrimeSieve& sieve);

// Logarithmic integral from 2: Li(x) = int_2^x dy / ln y.
double li(double x);

// integral_2^x dy / (ln y)^power, power >= 1.
double log_power_integral(double x, unsigned power);

ResidueProfile pi_residue(std::uint64_t x, std::uint64_t modulus, const PrimeSieve& sieve);

// Rows for b = 2..b_max: max over a coprime to b of |pi(x,b,a) - pi(x)/phi(b)|
// and the running average (1/(b-1)) * sum_{b' <= b} max_dev(b').
std::vector<DeviationRow> bv_statistic(std::uint64_t x, std::uint64_t b_max,
                                       const PrimeSieve& sieve);

MertensResult mertens_product(std::uint64_t x, const PrimeSieve& sieve);

// sum_{n<=N} 1/n - ln N. Tends to +gamma (decreasing).
double euler_gamma_partial(std::uint64_t n);

double zeta_partial(double s, std::uint64_t n_terms);
double euler_product_zeta(double s, std::uint64_t p_max, const PrimeSieve& sieve);

// Number of n <= N with n coprime to every prime in primes, via the Moebius
// sum over squarefree products of those primes.
std::uint64_t coprime_count_mobius(std::uint64_t n, std::span<const std::uint64_t> primes,
                                   const PrimeSieve& sieve);

// Squarefree integers in [1, N], by crossing out multiples of p^2.
std::uint64_t count_squarefree(std::uint64_t n, const PrimeSieve& sieve);

Residue crt_combine(std::uint64_t a1, std::uint64_t b1, std::uint64_t a2, std::uint64_t b2);
std::pair<std::uint64_t, std::uint64_t> crt_split(std::uint64_t a, std::uint64_t b1,
                                                  std::uint64_t b2);

class DirichletCharacter {
public:
    // Takes the table of values chi(0), ..., chi(N-1). Throws
    // std::invalid_argument unless the table is a character: zero exactly on
    // classes sharing a factor with N, chi(1) = 1, completely multiplicative.
    DirichletCharacter(std::uint64_t modulus, std::vector<std::complex<double>> values);

    static DirichletCharacter principal(std::uint64_t modulus);
    // Character of a prime modulus p sending the least primitive root g to
    // exp(2 pi i index / (p - 1)). index 0 is the principal character.
    static DirichletCharacter from_primitive_root(std::uint64_t p, std::uint64_t index);

    std::uint64_t modulus() const { return modulus_; }
    std::complex<double> operator()(std::uint64_t n) const { return values_[n % modulus_]; }
    std::span<const std::complex<double>> values() const { return values_; }
    // True if every value is 0 or 1.
    bool is_trivial() const;

private:
    struct Trusted {};
    DirichletCharacter(Trusted, std::uint64_t modulus, std::vector<std::complex<double>> values)
        : modulus_(modulus), values_(std::move(values)) {}

    std::uint64_t modulus_;
    std::vector<std::complex<double>> values_;
};

// chi_3 and chi_5 as tabulated in the classical examples (chi_5(2) = i).
DirichletCharacter chi3();
DirichletCharacter chi5();

// sum_{n <= N_terms} chi(n) / n^s. At s = 1 the sum is cut at the last
// complete period (character sums over a period vanish, so these partial
// sums converge). Throws std::invalid_argument for s < 1, or s = 1 with a
// trivial character.
std::complex<double> dirichlet_l(const DirichletCharacter& chi, double s, std::uint64_t n_terms);

std::uint64_t primitive_root(std::uint64_t p);

}  // namespace primelab

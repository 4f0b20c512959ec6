#include <doctest.h>

#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "primelab/arith.hpp"

using namespace primelab;
using namespace std::complex_literals;

namespace {

const PrimeSieve& sieve() {
    static const PrimeSieve s(2000000);
    return s;
}

// Trapezoid on a fine grid; only used for the loose Li oracle.
double trapezoid_li(double x) {
    const int n = 2000000;
    const double h = (x - 2.0) / n;
    double sum = 0.5 * (1.0 / std::log(2.0) + 1.0 / std::log(x));
    for (int i = 1; i < n; ++i) sum += 1.0 / std::log(2.0 + i * h);
    return sum * h;
}

}  // namespace

TEST_CASE("pi and Li") {
    CHECK(pi_count(1000000, sieve()) == 78498);
    CHECK(li(2.0) == 0.0);
    CHECK(li(1000.0) == doctest::Approx(trapezoid_li(1000.0)).epsilon(1e-9));
    CHECK(li(1e6) == doctest::Approx(78626.503995682).epsilon(1e-11));
    CHECK(log_power_integral(1e6, 1) == doctest::Approx(li(1e6)).epsilon(1e-12));
    CHECK_THROWS_AS(li(1.5), std::invalid_argument);
    CHECK_THROWS_AS(log_power_integral(1.0, 2), std::invalid_argument);
    CHECK_THROWS_AS(pi_count(2000001, sieve()), std::out_of_range);
}

TEST_CASE("residue profile") {
    const ResidueProfile r = pi_residue(1000, 10, sieve());
    CHECK(r.counts[1] == 40);
    CHECK(r.counts[3] == 42);
    CHECK(r.counts[7] == 46);
    CHECK(r.counts[9] == 38);
    CHECK(r.counts[2] == 1);
    CHECK(r.counts[5] == 1);
    CHECK(r.total() == 168);
    CHECK_THROWS_AS(pi_residue(1000, 0, sieve()), std::invalid_argument);
    CHECK_THROWS_AS(pi_residue(1000, 1000001, sieve()), std::invalid_argument);
}

TEST_CASE("BV statistic matches a direct scan") {
    const std::uint64_t x = 48611;
    const auto rows = bv_statistic(x, 100, sieve());
    REQUIRE(rows.size() == 99);
    const auto primes = sieve().primes(2, x);
    double running = 0.0;
    for (const DeviationRow& row : rows) {
        const std::uint64_t b = row.modulus;
        std::uint64_t phi = 0;
        for (std::uint64_t a = 1; a <= b; ++a) phi += std::gcd(a, b) == 1;
        double worst = 0.0;
        for (std::uint64_t a = 1; a < b; ++a) {
            if (std::gcd(a, b) != 1) continue;
            double c = 0;
            for (std::uint64_t p : primes) c += (p % b == a);
            worst = std::max(worst, std::abs(c - double(primes.size()) / double(phi)));
        }
        running += worst;
        REQUIRE(row.max_dev == doctest::Approx(worst).epsilon(1e-12));
        REQUIRE(row.running_avg == doctest::Approx(running / double(b - 1)).epsilon(1e-12));
    }
    CHECK_THROWS_AS(bv_statistic(x, 1, sieve()), std::invalid_argument);
    CHECK_THROWS_AS(bv_statistic(x, 221, sieve()), std::invalid_argument);
}

TEST_CASE("Mertens, gamma and zeta") {
    const MertensResult m = mertens_product(100, sieve());
    CHECK(m.product.value == doctest::Approx(8.0 / 35.0).epsilon(1e-14));  // primes 2,3,5,7
    CHECK(m.target == doctest::Approx(2 * std::exp(-kEulerGamma) / std::log(100.0)));
    CHECK(euler_gamma_partial(1) == 1.0);
    CHECK(euler_gamma_partial(1000000) - kEulerGamma == doctest::Approx(0.5e-6).epsilon(1e-4));
    CHECK(zeta_partial(2, 1) == 1.0);
    CHECK(zeta_partial(2, 100000) == doctest::Approx(std::numbers::pi * std::numbers::pi / 6 - 1e-5).epsilon(1e-9));
    CHECK(euler_product_zeta(2, 1000000, sieve()) ==
          doctest::Approx(std::numbers::pi * std::numbers::pi / 6).epsilon(1e-6));
    CHECK_THROWS_AS(zeta_partial(1.0, 10), std::invalid_argument);
    CHECK_THROWS_AS(mertens_product(1, sieve()), std::invalid_argument);
}

TEST_CASE("coprime counts") {
    const std::vector<std::uint64_t> ps{2, 3, 5, 7};
    for (std::uint64_t n = 1; n <= 2000; ++n) {
        std::uint64_t brute = 0;
        for (std::uint64_t k = 1; k <= n; ++k) brute += (k % 2 && k % 3 && k % 5 && k % 7);
        REQUIRE(coprime_count_mobius(n, ps, sieve()) == brute);
    }
    CHECK(coprime_count_mobius(10, {}, sieve()) == 10);
    const std::vector<std::uint64_t> dup{3, 3};
    const std::vector<std::uint64_t> composite{4};
    CHECK_THROWS_AS(coprime_count_mobius(10, dup, sieve()), std::invalid_argument);
    CHECK_THROWS_AS(coprime_count_mobius(10, composite, sieve()), std::invalid_argument);
}

TEST_CASE("squarefree count against the Moebius identity") {
    // Q(N) = sum_{d <= sqrt N} mu(d) floor(N / d^2)
    for (std::uint64_t n : {1ull, 2ull, 3ull, 4ull, 100ull, 9999ull, 123456ull, 1000000ull, 4000000ull}) {
        std::int64_t q = 0;
        for (std::uint64_t d = 1; d * d <= n; ++d) q += sieve().mobius(d) * static_cast<std::int64_t>(n / (d * d));
        REQUIRE(count_squarefree(n, sieve()) == static_cast<std::uint64_t>(q));
    }
    CHECK(count_squarefree(10, sieve()) == 7);
}

TEST_CASE("CRT round trip") {
    const Residue r = crt_combine(2, 3, 3, 5);
    CHECK(r == Residue{8, 15});
    CHECK((crt_split(8, 3, 5) == std::pair<std::uint64_t, std::uint64_t>{2, 3}));
    CHECK_THROWS_AS(crt_combine(1, 4, 1, 6), std::invalid_argument);
    CHECK_THROWS_AS(crt_combine(1, 0, 1, 6), std::invalid_argument);
    const std::uint64_t big1 = 4294967291ULL, big2 = 4294967279ULL;  // primes near 2^32
    const Residue rb = crt_combine(big1 - 1, big1, 5, big2);
    CHECK(rb.value % big1 == big1 - 1);
    CHECK(rb.value % big2 == 5);
}

TEST_CASE("Dirichlet characters") {
    const DirichletCharacter c3 = chi3();
    CHECK(c3(1) == std::complex<double>(1, 0));
    CHECK(c3(2) == std::complex<double>(-1, 0));
    CHECK(c3(3) == std::complex<double>(0, 0));
    const DirichletCharacter c5 = chi5();
    CHECK(c5(2) == std::complex<double>(0, 1));
    CHECK(c5(4) == std::complex<double>(-1, 0));
    CHECK(c5(3) == std::complex<double>(0, -1));
    CHECK(c5(5) == std::complex<double>(0, 0));
    CHECK(primitive_root(7) == 3);
    CHECK(primitive_root(2) == 1);
    CHECK_THROWS_AS(primitive_root(9), std::invalid_argument);

    // L(1, chi_3) = pi / (3 sqrt 3)
    const auto l3 = dirichlet_l(c3, 1.0, 3000000);
    CHECK(l3.real() == doctest::Approx(std::numbers::pi / (3 * std::sqrt(3.0))).epsilon(1e-6));
    CHECK(l3.imag() == 0.0);
    // L(2, chi_3): Clausen-type constant 0.78130241289648...
    CHECK(dirichlet_l(c3, 2.0, 1000000).real() == doctest::Approx(0.7813024128964862).epsilon(1e-8));

    CHECK_THROWS_AS(dirichlet_l(DirichletCharacter::principal(5), 1.0, 100), std::invalid_argument);
    CHECK_THROWS_AS(dirichlet_l(c3, 0.5, 100), std::invalid_argument);
    CHECK_THROWS_AS(dirichlet_l(c5, 1.0, 4), std::invalid_argument);
    CHECK_THROWS_AS((DirichletCharacter(3, {0, 1, 1, 1})), std::invalid_argument);
    CHECK_THROWS_AS((DirichletCharacter(4, {0, 1, 0, 1.0i})), std::invalid_argument);
    CHECK_NOTHROW((DirichletCharacter(4, {0, 1, 0, -1})));
}

TEST_CASE("every character of a prime modulus is multiplicative and orthogonal") {
    const std::uint64_t p = 13;
    for (std::uint64_t index = 0; index < p - 1; ++index) {
        const DirichletCharacter chi = DirichletCharacter::from_primitive_root(p, index);
        CHECK_NOTHROW(DirichletCharacter(p, std::vector<std::complex<double>>(chi.values().begin(), chi.values().end())));
        std::complex<double> sum = 0;
        for (std::uint64_t a = 0; a < p; ++a) sum += chi(a);
        CHECK(std::abs(sum) < (index == 0 ? 13.0 : 1e-12));
        CHECK(chi.is_trivial() == (index == 0));
    }
}

#include "primelab/arith.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>
#include <tuple>

#include "primelab/parallel.hpp"
#include "primelab/quadrature.hpp"

namespace primelab {

namespace {

constexpr std::uint64_t kMaxResidueModulus = 1'000'000;

void require_within(std::uint64_t x, const PrimeSieve& sieve, const char* what) {
    if (x > sieve.limit())
        throw std::out_of_range(std::string(what) + " = " + std::to_string(x) +
                                " exceeds sieve limit " + std::to_string(sieve.limit()));
}

std::uint64_t mod_pow(std::uint64_t base, std::uint64_t exp, std::uint64_t mod) {
    unsigned __int128 result = 1 % mod;
    unsigned __int128 b = base % mod;
    while (exp > 0) {
        if (exp & 1) result = result * b % mod;
        b = b * b % mod;
        exp >>= 1;
    }
    return static_cast<std::uint64_t>(result);
}

// Inverse of a modulo m, for gcd(a, m) = 1.
std::uint64_t mod_inverse(std::uint64_t a, std::uint64_t m) {
    __int128 old_r = static_cast<__int128>(a % m), r = static_cast<__int128>(m);
    __int128 old_s = 1, s = 0;
    while (r != 0) {
        __int128 q = old_r / r;
        std::tie(old_r, r) = std::make_pair(r, old_r - q * r);
        std::tie(old_s, s) = std::make_pair(s, old_s - q * s);
    }
    __int128 inv = old_s % static_cast<__int128>(m);
    if (inv < 0) inv += m;
    return static_cast<std::uint64_t>(inv);
}

}  // namespace

std::uint64_t ResidueProfile::total() const {
    return std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
}

double ResidueProfile::deviation(std::uint64_t a, std::uint64_t phi_b) const {
    const std::uint64_t pi = total();
    if (pi == 0) return -1.0;
    return static_cast<double>(phi_b) * static_cast<double>(counts.at(a)) /
               static_cast<double>(pi) -
           1.0;
}

std::uint64_t pi_count(std::uint64_t x, const PrimeSieve& sieve) {
    require_within(x, sieve, "x");
    return sieve.count_upto(x);
}

double log_power_integral(double x, unsigned power) {
    if (!(x >= 2.0)) throw std::invalid_argument("integral from 2 requires x >= 2");
    if (power == 0) return x - 2.0;
    if (x == 2.0) return 0.0;
    // y = e^t turns dy / (ln y)^k into e^t / t^k dt.
    auto f = [power](double t) { return std::exp(t) / std::pow(t, static_cast<double>(power)); };
    quad::Options opt;
    opt.rel_tol = 1e-11;
    opt.abs_tol = 1e-13;
    return quad::simpson(f, std::log(2.0), std::log(x), opt);
}

double li(double x) {
    if (!(x >= 2.0)) throw std::invalid_argument("Li(x) requires x >= 2");
    return log_power_integral(x, 1);
}

ResidueProfile pi_residue(std::uint64_t x, std::uint64_t modulus, const PrimeSieve& sieve) {
    if (modulus < 1 || modulus > kMaxResidueModulus)
        throw std::invalid_argument("modulus must lie in [1, 10^6], got " + std::to_string(modulus));
    require_within(x, sieve, "x");
    ResidueProfile out{modulus, x, std::vector<std::uint64_t>(modulus, 0)};
    sieve.for_each_prime(2, x, [&](std::uint64_t p) { ++out.counts[p % modulus]; });
    return out;
}

std::vector<DeviationRow> bv_statistic(std::uint64_t x, std::uint64_t b_max,
                                       const PrimeSieve& sieve) {
    if (b_max < 2) throw std::invalid_argument("b_max must be at least 2");
    if (b_max > isqrt(x))
        throw std::invalid_argument("b_max = " + std::to_string(b_max) + " exceeds sqrt(x) for x = " +
                                    std::to_string(x));
    require_within(x, sieve, "x");
    const std::vector<std::uint64_t> primes = sieve.primes(2, x);
    const double pi = static_cast<double>(primes.size());

    std::vector<double> max_dev(b_max - 1, 0.0);
    parallel_for_chunks(max_dev.size(), worker_count(), [&](std::size_t begin, std::size_t end) {
        std::vector<std::uint64_t> counts;
        for (std::size_t i = begin; i < end; ++i) {
            const std::uint64_t b = i + 2;
            counts.assign(b, 0);
            for (std::uint64_t p : primes) ++counts[p % b];
            const double expected = pi / static_cast<double>(sieve.euler_phi(b));
            double worst = 0.0;
            for (std::uint64_t a = 1; a < b; ++a)
                if (std::gcd(a, b) == 1)
                    worst = std::max(worst, std::abs(static_cast<double>(counts[a]) - expected));
            max_dev[i] = worst;
        }
    });

    std::vector<DeviationRow> rows;
    rows.reserve(max_dev.size());
    double running = 0.0;
    for (std::size_t i = 0; i < max_dev.size(); ++i) {
        running += max_dev[i];
        rows.push_back({i + 2, max_dev[i], running / static_cast<double>(i + 1)});
    }
    return rows;
}

MertensResult mertens_product(std::uint64_t x, const PrimeSieve& sieve) {
    if (x < 2) throw std::invalid_argument("Mertens product requires x >= 2");
    const std::uint64_t root = isqrt(x);
    require_within(root, sieve, "sqrt(x)");
    double product = 1.0;
    sieve.for_each_prime(2, root, [&](std::uint64_t p) { product *= 1.0 - 1.0 / static_cast<double>(p); });
    const double target = 2.0 * std::exp(-kEulerGamma) / std::log(static_cast<double>(x));
    return {{product, root, 0.0}, target};
}

double euler_gamma_partial(std::uint64_t n) {
    if (n < 1) throw std::invalid_argument("N must be at least 1");
    double harmonic = 0.0;
    for (std::uint64_t k = n; k >= 1; --k) harmonic += 1.0 / static_cast<double>(k);
    return harmonic - std::log(static_cast<double>(n));
}

double zeta_partial(double s, std::uint64_t n_terms) {
    if (!(s > 1.0)) throw std::invalid_argument("zeta partial sums require s > 1");
    double sum = 0.0;
    for (std::uint64_t k = n_terms; k >= 1; --k) sum += std::pow(static_cast<double>(k), -s);
    return sum;
}

double euler_product_zeta(double s, std::uint64_t p_max, const PrimeSieve& sieve) {
    if (!(s > 1.0)) throw std::invalid_argument("Euler product requires s > 1");
    require_within(p_max, sieve, "P_max");
    double product = 1.0;
    sieve.for_each_prime(2, p_max, [&](std::uint64_t p) {
        product /= 1.0 - std::pow(static_cast<double>(p), -s);
    });
    return product;
}

std::uint64_t coprime_count_mobius(std::uint64_t n, std::span<const std::uint64_t> primes,
                                   const PrimeSieve& sieve) {
    if (n < 1) throw std::invalid_argument("N must be at least 1");
    std::vector<std::uint64_t> ps(primes.begin(), primes.end());
    std::sort(ps.begin(), ps.end());
    if (std::adjacent_find(ps.begin(), ps.end()) != ps.end())
        throw std::invalid_argument("prime set contains a repeated element");
    for (std::uint64_t p : ps)
        if (!sieve.is_prime(p))
            throw std::invalid_argument(std::to_string(p) + " in the prime set is not prime");

    // sum over squarefree d built from ps: mu(d) * floor(N / d); d > N adds 0.
    std::int64_t total = 0;
    auto walk = [&](auto&& self, std::size_t i, std::uint64_t d, int sign) -> void {
        total += sign * static_cast<std::int64_t>(n / d);
        for (std::size_t j = i; j < ps.size(); ++j) {
            if (d > n / ps[j]) break;
            self(self, j + 1, d * ps[j], -sign);
        }
    };
    walk(walk, 0, 1, 1);
    return static_cast<std::uint64_t>(total);
}

std::uint64_t count_squarefree(std::uint64_t n, const PrimeSieve& sieve) {
    const std::uint64_t root = isqrt(n);
    require_within(root, sieve, "sqrt(N)");
    const std::vector<std::uint64_t> primes = sieve.primes(2, root);
    constexpr std::uint64_t kBlock = std::uint64_t{1} << 20;
    std::vector<char> hit(kBlock);
    std::uint64_t count = 0;
    for (std::uint64_t lo = 1; lo <= n; lo += kBlock) {
        const std::uint64_t hi = std::min(n, lo + kBlock - 1);
        std::fill(hit.begin(), hit.end(), 0);
        for (std::uint64_t p : primes) {
            const std::uint64_t sq = p * p;
            for (std::uint64_t m = (lo + sq - 1) / sq * sq; m <= hi; m += sq) hit[m - lo] = 1;
        }
        for (std::uint64_t k = 0; k <= hi - lo; ++k) count += hit[k] ? 0 : 1;
    }
    return count;
}

Residue crt_combine(std::uint64_t a1, std::uint64_t b1, std::uint64_t a2, std::uint64_t b2) {
    if (b1 == 0 || b2 == 0) throw std::invalid_argument("moduli must be positive");
    if (std::gcd(b1, b2) != 1)
        throw std::invalid_argument("moduli " + std::to_string(b1) + " and " + std::to_string(b2) +
                                    " are not coprime");
    const unsigned __int128 modulus = static_cast<unsigned __int128>(b1) * b2;
    if (modulus > UINT64_MAX) throw std::invalid_argument("b1 * b2 does not fit in 64 bits");
    a1 %= b1;
    a2 %= b2;
    // x = a1 + b1 * t with b1 * t = a2 - a1 (mod b2).
    const std::uint64_t diff = (a2 + b2 - a1 % b2) % b2;
    const std::uint64_t t = static_cast<std::uint64_t>(
        static_cast<unsigned __int128>(diff) * mod_inverse(b1 % b2, b2) % b2);
    const auto x = static_cast<std::uint64_t>(a1 + static_cast<unsigned __int128>(b1) * t);
    return {x, static_cast<std::uint64_t>(modulus)};
}

std::pair<std::uint64_t, std::uint64_t> crt_split(std::uint64_t a, std::uint64_t b1,
                                                  std::uint64_t b2) {
    if (b1 == 0 || b2 == 0) throw std::invalid_argument("moduli must be positive");
    if (std::gcd(b1, b2) != 1)
        throw std::invalid_argument("moduli " + std::to_string(b1) + " and " + std::to_string(b2) +
                                    " are not coprime");
    return {a % b1, a % b2};
}

std::uint64_t primitive_root(std::uint64_t p) {
    if (!is_prime_trial(p)) throw std::invalid_argument(std::to_string(p) + " is not prime");
    if (p == 2) return 1;
    std::vector<std::uint64_t> factors;
    std::uint64_t m = p - 1;
    for (std::uint64_t q = 2; q * q <= m; ++q) {
        if (m % q != 0) continue;
        factors.push_back(q);
        while (m % q == 0) m /= q;
    }
    if (m > 1) factors.push_back(m);
    for (std::uint64_t g = 2; g < p; ++g) {
        bool generator = std::all_of(factors.begin(), factors.end(),
                                     [&](std::uint64_t q) { return mod_pow(g, (p - 1) / q, p) != 1; });
        if (generator) return g;
    }
    throw std::logic_error("no primitive root found");
}

DirichletCharacter::DirichletCharacter(std::uint64_t modulus, std::vector<std::complex<double>> values)
    : modulus_(modulus), values_(std::move(values)) {
    if (modulus_ == 0) throw std::invalid_argument("character modulus must be positive");
    if (values_.size() != modulus_)
        throw std::invalid_argument("character table must have exactly N entries");
    constexpr double kTol = 1e-9;
    for (std::uint64_t a = 0; a < modulus_; ++a) {
        const bool unit = std::gcd(a, modulus_) == 1;
        if (!unit && std::abs(values_[a]) > kTol)
            throw std::invalid_argument("character must vanish on classes sharing a factor with N");
        if (unit && std::abs(std::abs(values_[a]) - 1.0) > kTol)
            throw std::invalid_argument("character values on units must have modulus 1");
    }
    if (std::abs(values_[1 % modulus_] - 1.0) > kTol && modulus_ > 1)
        throw std::invalid_argument("character must satisfy chi(1) = 1");
    for (std::uint64_t a = 1; a < modulus_; ++a) {
        if (std::gcd(a, modulus_) != 1) continue;
        for (std::uint64_t b = a; b < modulus_; ++b) {
            if (std::gcd(b, modulus_) != 1) continue;
            if (std::abs(values_[a * b % modulus_] - values_[a] * values_[b]) > kTol)
                throw std::invalid_argument("character table is not multiplicative");
        }
    }
}

DirichletCharacter DirichletCharacter::principal(std::uint64_t modulus) {
    if (modulus == 0) throw std::invalid_argument("character modulus must be positive");
    std::vector<std::complex<double>> values(modulus, 0.0);
    for (std::uint64_t a = 0; a < modulus; ++a)
        if (std::gcd(a, modulus) == 1) values[a] = 1.0;
    return DirichletCharacter(Trusted{}, modulus, std::move(values));
}

DirichletCharacter DirichletCharacter::from_primitive_root(std::uint64_t p, std::uint64_t index) {
    const std::uint64_t g = primitive_root(p);
    const std::uint64_t order = p - 1;
    std::vector<std::complex<double>> values(p, 0.0);
    std::uint64_t power = 1 % p;
    for (std::uint64_t m = 0; m < std::max<std::uint64_t>(order, 1); ++m) {
        const std::uint64_t turn = (index % order) * m % order;  // angle = 2 pi turn / order
        std::complex<double> v;
        if ((4 * turn) % order == 0) {
            // Quarter turns are exact: 1, i, -1, -i.
            static constexpr std::complex<double> kQuarter[] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
            v = kQuarter[4 * turn / order];
        } else {
            v = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(turn) /
                                    static_cast<double>(order));
        }
        values[power] = v;
        power = power * g % p;
    }
    return DirichletCharacter(Trusted{}, p, std::move(values));
}

bool DirichletCharacter::is_trivial() const {
    return std::all_of(values_.begin(), values_.end(), [](const std::complex<double>& v) {
        return v == std::complex<double>(0.0) || v == std::complex<double>(1.0);
    });
}

DirichletCharacter chi3() { return DirichletCharacter::from_primitive_root(3, 1); }
DirichletCharacter chi5() { return DirichletCharacter::from_primitive_root(5, 1); }

std::complex<double> dirichlet_l(const DirichletCharacter& chi, double s, std::uint64_t n_terms) {
    if (!(s >= 1.0)) throw std::invalid_argument("L-series partial sums require s >= 1");
    std::uint64_t last = n_terms;
    if (s == 1.0) {
        if (chi.is_trivial())
            throw std::invalid_argument("L-series of a trivial character diverges at s = 1");
        last = n_terms - n_terms % chi.modulus();
        if (last == 0)
            throw std::invalid_argument("s = 1 needs at least one complete period of terms");
    }
    std::complex<double> sum = 0.0;
    for (std::uint64_t n = last; n >= 1; --n) {
        const std::complex<double> v = chi(n);
        if (v != std::complex<double>(0.0)) sum += v * std::pow(static_cast<double>(n), -s);
    }
    return sum;
}

}  // namespace primelab

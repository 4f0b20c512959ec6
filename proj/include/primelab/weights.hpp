// weights.hpp
// Truncated divisor-sum sieve weights and the weighted average of the number
// of primes in n + J over n in [N, 2N].
//
//   hard        rho(n) = prod_i (sum_{d | n+j_i, d <= D} mu(d))^2
//   smooth(k)   rho(n) = prod_i (ln D)^{-2k} (sum_{d | n+j_i, d <= D} mu(d) ln(D/d)^k)^2
//   multidim(k) rho(n) = (sum_{d_i | n+j_i, d_1...d_l <= D} mu(d_1...d_l) F(ln d_i / ln D))^2
//                with F(t) = (1 - sum t_i)^k on the simplex, 0 outside
//   uniform     rho(n) = 1

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "primelab/patterns.hpp"
#include "primelab/sieve.hpp"

namespace primelab {

class ResourceLimitError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DegenerateWeightError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Divisor-tuple search nodes per n above which maynard_weight gives up.
inline constexpr std::uint64_t kMaxTuplesPerN = 100'000'000;

// F(t_1, ..., t_l) = (1 - sum t_i)^k for sum t_i < 1, else 0.
struct SimplexPower {
    unsigned k = 1;
    double operator()(std::span<const double> t) const;
};

enum class WeightKind { uniform, hard, smooth, multidim };

struct WeightSpec {
    WeightKind kind = WeightKind::multidim;
    std::uint64_t D = 100;
    // Smoothing exponent. Unset means 1 for smooth and |J| for multidim.
    std::optional<unsigned> k;

    // "uniform", "hard:D=100", "smooth:D=100,k=1", "multidim:D=1000,k=3".
    // Throws std::invalid_argument on malformed text or D < 2.
    static WeightSpec parse(std::string_view text);
    std::string to_string() const;
    unsigned exponent_for(const Pattern& pattern) const;
};

struct WeightReport {
    Pattern pattern;
    std::uint64_t N = 0;
    std::vector<double> ratios;  // one per offset j_k
    double average = 0.0;        // sum of ratios
};

// 1 iff n has no prime factor <= D.
int delta_rough(std::uint64_t n, std::uint64_t D, const PrimeSieve& sieve);

// (sum_{d | n, d <= D} mu(d))^2.
std::uint64_t delta0(std::uint64_t n, std::uint64_t D, const PrimeSieve& sieve);

// (ln D)^{-2k} (sum_{d | n, d <= D} mu(d) (ln D/d)^k)^2; k = 0 gives delta0.
double delta_k(std::uint64_t n, std::uint64_t D, unsigned k, const PrimeSieve& sieve);

// The multidimensional weight with F = SimplexPower{k}, without the
// [N, 2N] indicator. Tuples whose product is not squarefree have mu = 0 and
// are skipped. Throws ResourceLimitError when the depth-first search over
// divisor tuples for this n visits more than max_nodes nodes.
double maynard_weight(std::uint64_t n, const Pattern& pattern, std::uint64_t D, unsigned k,
                      const PrimeSieve& sieve, std::uint64_t max_nodes = kMaxTuplesPerN);

// rho(n) for any spec (see the table at the top of this header).
double weight_value(std::uint64_t n, const Pattern& pattern, const WeightSpec& spec,
                    const PrimeSieve& sieve);

// ratio_k = sum_{n in [N,2N], n + j_k prime} rho(n) / sum_{n in [N,2N]} rho(n).
// Throws std::out_of_range if 2N + diameter exceeds the sieve limit, and
// DegenerateWeightError if rho vanishes on the whole range. rho may be called
// concurrently.
WeightReport average_report(const Pattern& pattern, const WeightSpec& spec, std::uint64_t N,
                            const PrimeSieve& sieve);
WeightReport average_report(const Pattern& pattern,
                            const std::function<double(std::uint64_t)>& rho, std::uint64_t N,
                            const PrimeSieve& sieve);

}  // namespace primelab

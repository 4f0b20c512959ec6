// sieve.hpp
// Segmented, odd-only sieve of Eratosthenes and the multiplicative helpers
// built on top of it (factorization, Moebius, Euler phi, bounded divisors).
//
// Encoding:
//   bit i  ->  odd number 2*i + 1   (bit 0 is the number 1, always clear)
//   2 is handled separately.
//
// Memory: about limit/16 bytes of flags plus a 1/8 overhead of block counts
// for O(1) prime counting. 10^9 needs roughly 70 MB.

#pragma once

#include <bit>
#include <cstdint>
#include <span>
#include <vector>

namespace primelab {

struct PrimePower {
    std::uint64_t prime;
    unsigned exponent;

    friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

// Prime factors in strictly increasing order; empty for n = 1.
struct Factorization {
    std::vector<PrimePower> factors;

    bool empty() const { return factors.empty(); }
    std::size_t distinct() const { return factors.size(); }
    // Product of prime^exponent; equals the factored number.
    std::uint64_t value() const;

    friend bool operator==(const Factorization&, const Factorization&) = default;
};

class PrimeSieve {
public:
    // Largest supported limit. Keeps limit^2 (the factorization range)
    // inside 64 bits.
    static constexpr std::uint64_t kMaxLimit = 4'000'000'000ULL;
    static constexpr std::uint64_t kDefaultSegmentSize = std::uint64_t{1} << 20;

    // Sieves [2, limit]. segment_size is the count of integers per segment
    // (>= 64). workers = 0 means worker_count(). Output is bit-identical for
    // every segment_size and worker count.
    // Throws std::invalid_argument for limit outside [2, kMaxLimit] or
    // segment_size < 64.
    explicit PrimeSieve(std::uint64_t limit,
                        std::uint64_t segment_size = kDefaultSegmentSize,
                        unsigned workers = 0);

    std::uint64_t limit() const { return limit_; }
    std::uint64_t segment_size() const { return segment_size_; }
    // limit^2: the range covered by is_prime/factorize.
    std::uint64_t factor_range() const { return limit_ * limit_; }

    // pi(limit).
    std::uint64_t count() const { return total_; }
    // pi(x); throws std::out_of_range if x > limit.
    std::uint64_t count_upto(std::uint64_t x) const;

    // Sieve lookup for n <= limit, trial division by sieved primes above.
    // Throws std::out_of_range for n > limit^2.
    bool is_prime(std::uint64_t n) const;

    // Unchecked flag lookup; requires n <= limit.
    bool test(std::uint64_t n) const {
        if ((n & 1) == 0) return n == 2;
        std::uint64_t i = n >> 1;
        return (bits_[i >> 6] >> (i & 63)) & 1;
    }

    // Calls fn(p) for every prime lo <= p <= min(hi, limit), ascending.
    template <class Fn>
    void for_each_prime(std::uint64_t lo, std::uint64_t hi, Fn&& fn) const {
        if (hi > limit_) hi = limit_;
        if (lo <= 2 && hi >= 2) fn(std::uint64_t{2});
        if (lo < 3) lo = 3;
        if (lo > hi) return;
        std::uint64_t first = lo >> 1;
        std::uint64_t last = (hi - 1) >> 1;  // last odd <= hi
        for (std::uint64_t w = first >> 6; w <= (last >> 6); ++w) {
            std::uint64_t word = bits_[w];
            if (w == (first >> 6)) word &= ~std::uint64_t{0} << (first & 63);
            if (w == (last >> 6) && (last & 63) != 63)
                word &= (std::uint64_t{1} << ((last & 63) + 1)) - 1;
            while (word != 0) {
                unsigned b = static_cast<unsigned>(std::countr_zero(word));
                fn(2 * ((w << 6) + b) + 1);
                word &= word - 1;
            }
        }
    }

    // The k-th prime (1-based, nth_prime(1) = 2); throws std::out_of_range
    // if k > count().
    std::uint64_t nth_prime(std::uint64_t k) const;

    // All primes in [lo, hi], ascending.
    std::vector<std::uint64_t> primes(std::uint64_t lo, std::uint64_t hi) const;

    // Throws std::invalid_argument for n = 0, std::out_of_range for n > limit^2.
    Factorization factorize(std::uint64_t n) const;
    int mobius(std::uint64_t n) const;
    bool is_squarefree(std::uint64_t n) const;
    std::uint64_t euler_phi(std::uint64_t n) const;
    // Every divisor d of n with d <= bound, ascending.
    std::vector<std::uint64_t> divisors_up_to(std::uint64_t n, std::uint64_t bound) const;

private:
    void check_factor_range(std::uint64_t n) const;

    std::uint64_t limit_;
    std::uint64_t segment_size_;
    std::uint64_t total_ = 0;
    std::vector<std::uint64_t> bits_;
    // block_counts_[k] = odd primes in words [0, 8k).
    std::vector<std::uint64_t> block_counts_;
    // Primes up to min(limit, 2^20), cached for trial division.
    std::vector<std::uint32_t> small_primes_;
};

inline PrimeSieve build_sieve(std::uint64_t limit) { return PrimeSieve(limit); }

// Deterministic trial division, independent of any sieve. For small arguments
// such as moduli and residue-class primes.
bool is_prime_trial(std::uint64_t n);

std::uint64_t isqrt(std::uint64_t n);

}  // namespace primelab

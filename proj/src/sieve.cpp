// sieve.cpp
// Parallel segmented sieve. The output range (odd indices) is cut into
// word-aligned segments; each worker owns whole segments exclusively, so no
// atomics are needed and the flags are independent of the partition.

#include "primelab/sieve.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "primelab/parallel.hpp"

namespace primelab {

namespace {

constexpr std::uint64_t kSmallPrimeCap = std::uint64_t{1} << 20;
constexpr std::uint64_t kWordsPerBlock = 8;

std::vector<std::uint32_t> simple_sieve(std::uint64_t limit) {
    std::vector<char> mark(limit + 1, 1);
    std::vector<std::uint32_t> out;
    for (std::uint64_t i = 2; i <= limit; ++i) {
        if (!mark[i]) continue;
        out.push_back(static_cast<std::uint32_t>(i));
        for (std::uint64_t j = i * i; j <= limit; j += i) mark[j] = 0;
    }
    return out;
}

}  // namespace

std::uint64_t isqrt(std::uint64_t n) {
    auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
    r = std::min<std::uint64_t>(r, 0xFFFFFFFFULL);  // r * r must not wrap
    while (r > 0 && r * r > n) --r;
    while ((r + 1) * (r + 1) <= n && (r + 1) <= 0xFFFFFFFFULL) ++r;
    return r;
}

bool is_prime_trial(std::uint64_t n) {
    if (n < 2) return false;
    if (n % 2 == 0) return n == 2;
    if (n % 3 == 0) return n == 3;
    for (std::uint64_t d = 5; d <= n / d; d += 6)
        if (n % d == 0 || n % (d + 2) == 0) return false;
    return true;
}

std::uint64_t Factorization::value() const {
    std::uint64_t v = 1;
    for (const auto& f : factors)
        for (unsigned e = 0; e < f.exponent; ++e) v *= f.prime;
    return v;
}

PrimeSieve::PrimeSieve(std::uint64_t limit, std::uint64_t segment_size, unsigned workers)
    : limit_(limit), segment_size_(segment_size) {
    if (limit < 2 || limit > kMaxLimit)
        throw std::invalid_argument("sieve limit must lie in [2, " + std::to_string(kMaxLimit) +
                                    "], got " + std::to_string(limit));
    if (segment_size < 64)
        throw std::invalid_argument("segment_size must be at least 64, got " +
                                    std::to_string(segment_size));
    if (workers == 0) workers = worker_count();

    const std::uint64_t nbits = ((limit - 1) >> 1) + 1;
    const std::uint64_t nwords = (nbits + 63) / 64;
    bits_.assign(nwords, 0);

    const std::uint64_t root = isqrt(limit);
    std::vector<std::uint32_t> base = simple_sieve(root);

    const std::uint64_t seg_bits = std::max<std::uint64_t>(64, (segment_size / 2) / 64 * 64);
    const std::uint64_t nsegments = (nbits + seg_bits - 1) / seg_bits;

    auto sieve_segment = [&](std::uint64_t s) {
        const std::uint64_t lo_bit = s * seg_bits;
        const std::uint64_t hi_bit = std::min(nbits, lo_bit + seg_bits);  // exclusive
        std::uint64_t* words = bits_.data() + lo_bit / 64;
        const std::uint64_t seg_words = (hi_bit - lo_bit + 63) / 64;
        std::fill(words, words + seg_words, ~std::uint64_t{0});

        const std::uint64_t high = 2 * (hi_bit - 1) + 1;  // largest odd in segment
        const std::uint64_t low = 2 * lo_bit + 1;
        for (std::uint32_t p32 : base) {
            const std::uint64_t p = p32;
            if (p == 2) continue;
            if (p * p > high) break;
            std::uint64_t m = std::max(p * p, (low + p - 1) / p * p);
            if ((m & 1) == 0) m += p;
            for (std::uint64_t j = (m >> 1) - lo_bit; j < hi_bit - lo_bit; j += p)
                words[j >> 6] &= ~(std::uint64_t{1} << (j & 63));
        }
    };

    parallel_for_chunks(nsegments, workers, [&](std::size_t begin, std::size_t end) {
        for (std::size_t s = begin; s < end; ++s) sieve_segment(s);
    });

    bits_[0] &= ~std::uint64_t{1};  // 1 is not prime
    if (nbits % 64 != 0) bits_.back() &= (std::uint64_t{1} << (nbits % 64)) - 1;

    block_counts_.assign(nwords / kWordsPerBlock + 1, 0);
    std::uint64_t running = 0;
    for (std::uint64_t w = 0; w < nwords; ++w) {
        if (w % kWordsPerBlock == 0) block_counts_[w / kWordsPerBlock] = running;
        running += static_cast<std::uint64_t>(std::popcount(bits_[w]));
    }
    if (nwords % kWordsPerBlock == 0) block_counts_[nwords / kWordsPerBlock] = running;
    total_ = running + 1;  // plus the prime 2

    const std::uint64_t cache_end = std::min(limit, kSmallPrimeCap);
    for_each_prime(2, cache_end,
                   [&](std::uint64_t p) { small_primes_.push_back(static_cast<std::uint32_t>(p)); });
}

std::uint64_t PrimeSieve::count_upto(std::uint64_t x) const {
    if (x > limit_)
        throw std::out_of_range("pi(x) requested for x = " + std::to_string(x) +
                                " above sieve limit " + std::to_string(limit_));
    if (x < 2) return 0;
    if (x < 3) return 1;
    const std::uint64_t last = (x - 1) >> 1;  // index of the largest odd <= x
    const std::uint64_t w = last >> 6;
    std::uint64_t c = block_counts_[w / kWordsPerBlock];
    for (std::uint64_t k = w / kWordsPerBlock * kWordsPerBlock; k < w; ++k)
        c += static_cast<std::uint64_t>(std::popcount(bits_[k]));
    std::uint64_t tail = bits_[w];
    if ((last & 63) != 63) tail &= (std::uint64_t{1} << ((last & 63) + 1)) - 1;
    c += static_cast<std::uint64_t>(std::popcount(tail));
    return c + 1;
}

std::uint64_t PrimeSieve::nth_prime(std::uint64_t k) const {
    if (k == 0 || k > total_)
        throw std::out_of_range("prime index " + std::to_string(k) + " outside [1, " +
                                std::to_string(total_) + "]");
    std::uint64_t lo = 2, hi = limit_;
    while (lo < hi) {
        const std::uint64_t mid = lo + (hi - lo) / 2;
        if (count_upto(mid) >= k)
            hi = mid;
        else
            lo = mid + 1;
    }
    return lo;
}

std::vector<std::uint64_t> PrimeSieve::primes(std::uint64_t lo, std::uint64_t hi) const {
    std::vector<std::uint64_t> out;
    for_each_prime(lo, hi, [&](std::uint64_t p) { out.push_back(p); });
    return out;
}

void PrimeSieve::check_factor_range(std::uint64_t n) const {
    if (n > factor_range())
        throw std::out_of_range(std::to_string(n) + " exceeds the factorization range limit^2 = " +
                                std::to_string(factor_range()));
}

bool PrimeSieve::is_prime(std::uint64_t n) const {
    if (n <= limit_) return n >= 2 && test(n);
    check_factor_range(n);
    if ((n & 1) == 0) return false;
    for (std::uint32_t p : small_primes_) {
        if (std::uint64_t{p} * p > n) return true;
        if (n % p == 0) return false;
    }
    for (std::uint64_t q = kSmallPrimeCap + 1; q * q <= n; q += 2)
        if (test(q) && n % q == 0) return false;
    return true;
}

Factorization PrimeSieve::factorize(std::uint64_t n) const {
    if (n == 0) throw std::invalid_argument("cannot factorize 0");
    check_factor_range(n);
    Factorization out;
    auto strip = [&](std::uint64_t p) {
        if (n % p != 0) return;
        unsigned e = 0;
        do {
            n /= p;
            ++e;
        } while (n % p == 0);
        out.factors.push_back({p, e});
    };
    bool done = false;
    for (std::uint32_t p : small_primes_) {
        if (std::uint64_t{p} * p > n) {
            done = true;
            break;
        }
        strip(p);
    }
    if (!done)
        for (std::uint64_t q = kSmallPrimeCap + 1; q * q <= n; q += 2)
            if (test(q)) strip(q);
    if (n > 1) out.factors.push_back({n, 1});
    return out;
}

int PrimeSieve::mobius(std::uint64_t n) const {
    Factorization f = factorize(n);
    for (const auto& pe : f.factors)
        if (pe.exponent > 1) return 0;
    return (f.distinct() % 2 == 0) ? 1 : -1;
}

bool PrimeSieve::is_squarefree(std::uint64_t n) const {
    Factorization f = factorize(n);
    return std::all_of(f.factors.begin(), f.factors.end(),
                       [](const PrimePower& pe) { return pe.exponent == 1; });
}

std::uint64_t PrimeSieve::euler_phi(std::uint64_t n) const {
    Factorization f = factorize(n);
    std::uint64_t phi = n;
    for (const auto& pe : f.factors) phi = phi / pe.prime * (pe.prime - 1);
    return phi;
}

std::vector<std::uint64_t> PrimeSieve::divisors_up_to(std::uint64_t n, std::uint64_t bound) const {
    Factorization f = factorize(n);
    std::vector<std::uint64_t> out;
    auto walk = [&](auto&& self, std::size_t i, std::uint64_t d) -> void {
        if (i == f.factors.size()) {
            out.push_back(d);
            return;
        }
        const auto& pe = f.factors[i];
        for (unsigned e = 0; e <= pe.exponent; ++e) {
            self(self, i + 1, d);
            if (e == pe.exponent || d > bound / pe.prime) break;
            d *= pe.prime;
        }
    };
    if (bound >= 1) walk(walk, 0, 1);
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace primelab

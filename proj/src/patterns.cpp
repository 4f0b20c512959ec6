#include "primelab/patterns.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace primelab {

namespace {

// Primes up to n by trial division; only used for the tiny range p <= |J|.
std::vector<std::uint64_t> primes_upto(std::uint64_t n) {
    std::vector<char> mark(n + 1, 1);
    std::vector<std::uint64_t> out;
    for (std::uint64_t i = 2; i <= n; ++i) {
        if (!mark[i]) continue;
        out.push_back(i);
        for (std::uint64_t j = i * i; j <= n; j += i) mark[j] = 0;
    }
    return out;
}

std::uint64_t covered_unchecked(std::span<const std::uint64_t> offsets, std::uint64_t p,
                                std::vector<std::uint64_t>& scratch) {
    if (offsets.back() < p) return offsets.size();
    scratch.clear();
    for (std::uint64_t j : offsets) scratch.push_back(j % p);
    std::sort(scratch.begin(), scratch.end());
    return static_cast<std::uint64_t>(std::unique(scratch.begin(), scratch.end()) - scratch.begin());
}

}  // namespace

Pattern::Pattern(std::vector<std::uint64_t> offsets) : original_(std::move(offsets)) {
    if (original_.empty()) throw std::invalid_argument("pattern must contain at least one offset");
    for (std::size_t i = 1; i < original_.size(); ++i)
        if (original_[i] <= original_[i - 1])
            throw std::invalid_argument("pattern offsets must be strictly increasing");
    offsets_.reserve(original_.size());
    for (std::uint64_t j : original_) offsets_.push_back(j - original_.front());
}

Pattern Pattern::parse(std::string_view text) {
    std::vector<std::uint64_t> values;
    std::string token;
    auto flush = [&] {
        if (token.empty()) throw std::invalid_argument("empty entry in pattern text");
        std::uint64_t v = 0;
        auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
        if (ec != std::errc() || ptr != token.data() + token.size())
            throw std::invalid_argument("invalid pattern entry '" + token + "'");
        values.push_back(v);
        token.clear();
    };
    bool any = false;
    for (char c : text) {
        if (std::isspace(static_cast<unsigned char>(c))) continue;
        any = true;
        if (c == ',')
            flush();
        else
            token.push_back(c);
    }
    if (!any) throw std::invalid_argument("pattern text is empty");
    flush();
    return Pattern(std::move(values));
}

Pattern Pattern::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open pattern file " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

std::string Pattern::to_string() const {
    std::string out;
    for (std::size_t i = 0; i < original_.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(original_[i]);
    }
    return out;
}

std::uint64_t diameter(const Pattern& pattern) { return pattern.diameter(); }

std::uint64_t residues_covered(const Pattern& pattern, std::uint64_t p) {
    if (!is_prime_trial(p)) throw std::invalid_argument(std::to_string(p) + " is not prime");
    std::vector<std::uint64_t> scratch;
    return covered_unchecked(pattern.offsets(), p, scratch);
}

bool is_admissible(const Pattern& pattern) {
    std::vector<std::uint64_t> scratch;
    for (std::uint64_t p : primes_upto(pattern.size()))
        if (covered_unchecked(pattern.offsets(), p, scratch) == p) return false;
    return true;
}

SingularSeries singular_series(const Pattern& pattern, std::uint64_t p_max, const PrimeSieve& sieve) {
    const std::uint64_t l = pattern.size();
    if (p_max < l)
        throw std::invalid_argument("P_max = " + std::to_string(p_max) + " is below the pattern size " +
                                    std::to_string(l));
    const std::uint64_t cut = std::max({p_max, pattern.diameter(), 2 * l, std::uint64_t{2}});
    if (cut > sieve.limit())
        throw std::out_of_range("singular series truncation point " + std::to_string(cut) +
                                " exceeds sieve limit " + std::to_string(sieve.limit()));
    SingularSeries out;
    out.estimate.truncation_point = cut;
    if (!is_admissible(pattern)) return out;  // exact zero

    const double ld = static_cast<double>(l);
    double log_sum = 0.0;
    std::vector<std::uint64_t> scratch;
    sieve.for_each_prime(2, cut, [&](std::uint64_t p) {
        const double nu = static_cast<double>(covered_unchecked(pattern.offsets(), p, scratch));
        const double inv = 1.0 / static_cast<double>(p);
        log_sum += std::log1p(-nu * inv) - ld * std::log1p(-inv);
    });
    out.admissible = true;
    out.estimate.value = std::exp(log_sum);
    // For p > 2l every factor satisfies |log f_p| <= (l^2 + l) / p^2, and
    // sum_{p > T} 1/p^2 <= sum_{odd n > T} 1/n^2 <= 1 / (2 (T - 1)).
    const double log_tail = (ld * ld + ld) / (2.0 * static_cast<double>(cut - 1));
    out.estimate.tail_bound = out.estimate.value * std::expm1(log_tail);
    return out;
}

double c2m_ratio(std::uint64_t m, const PrimeSieve& sieve) {
    if (m == 0) throw std::invalid_argument("m must be positive");
    double ratio = 1.0;
    for (const auto& pe : sieve.factorize(m).factors)
        if (pe.prime != 2)
            ratio *= static_cast<double>(pe.prime - 1) / static_cast<double>(pe.prime - 2);
    return ratio;
}

std::uint64_t count_pattern(const Pattern& pattern, std::uint64_t x, const PrimeSieve& sieve) {
    if (x > sieve.limit() || pattern.diameter() > sieve.limit() - x)
        throw std::out_of_range("x + diameter = " + std::to_string(x) + " + " +
                                std::to_string(pattern.diameter()) + " exceeds sieve limit " +
                                std::to_string(sieve.limit()));
    const auto rest = pattern.offsets().subspan(1);
    std::uint64_t count = 0;
    sieve.for_each_prime(1, x, [&](std::uint64_t p) {
        for (std::uint64_t j : rest)
            if (!sieve.test(p + j)) return;
        ++count;
    });
    return count;
}

double hl_prediction(const Pattern& pattern, std::uint64_t x, std::uint64_t p_max,
                     const PrimeSieve& sieve) {
    if (x < 2) throw std::invalid_argument("prediction requires x >= 2");
    SingularSeries c = singular_series(pattern, p_max, sieve);
    if (!c.admissible) return 0.0;
    return c.estimate.value *
           log_power_integral(static_cast<double>(x), static_cast<unsigned>(pattern.size()));
}

std::vector<DistanceRow> distance_histogram(std::uint64_t prime_count, std::uint64_t m_max,
                                            const PrimeSieve& sieve, DistanceMode mode) {
    if (prime_count < 2) throw std::invalid_argument("need at least two odd primes");
    if (m_max < 1) throw std::invalid_argument("m_max must be at least 1");
    if (sieve.count() - 1 < prime_count)
        throw std::out_of_range("sieve holds only " + std::to_string(sieve.count() - 1) +
                                " odd primes, " + std::to_string(prime_count) + " requested");
    const std::uint64_t largest = sieve.nth_prime(prime_count + 1);
    const std::vector<std::uint64_t> primes = sieve.primes(3, largest);

    std::vector<std::uint64_t> counts(m_max + 1, 0);
    if (mode == DistanceMode::consecutive) {
        for (std::size_t i = 1; i < primes.size(); ++i) {
            const std::uint64_t m = (primes[i] - primes[i - 1]) / 2;
            if (m <= m_max) ++counts[m];
        }
    } else {
        for (std::uint64_t p : primes)
            for (std::uint64_t m = 1; m <= m_max && p + 2 * m <= largest; ++m)
                if (sieve.test(p + 2 * m)) ++counts[m];
    }
    std::vector<DistanceRow> rows;
    rows.reserve(m_max);
    const double base = static_cast<double>(counts[1]);
    for (std::uint64_t m = 1; m <= m_max; ++m)
        rows.push_back({m, counts[m], static_cast<double>(counts[m]) / base});
    return rows;
}

Pattern first_primes_tuple(std::uint64_t l, const PrimeSieve& sieve) {
    if (l < 1) throw std::invalid_argument("tuple length must be positive");
    const std::uint64_t below = l < sieve.limit() ? sieve.count_upto(l) : sieve.count();
    if (sieve.count() - below < l)
        throw std::out_of_range("sieve limit " + std::to_string(sieve.limit()) + " supplies only " +
                                std::to_string(sieve.count() - below) + " primes above " +
                                std::to_string(l));
    return Pattern(sieve.primes(l + 1, sieve.nth_prime(below + l)));
}

}  // namespace primelab

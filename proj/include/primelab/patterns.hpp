// patterns.hpp
// Prime patterns n + J: admissibility, Hardy-Littlewood singular series,
// empirical pattern counts and prime-distance histograms.

#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "primelab/arith.hpp"
#include "primelab/sieve.hpp"

namespace primelab {

// A finite set of offsets J = {j_1 < ... < j_l}. Offsets are normalized so
// that j_1 = 0; the offsets as given are kept for display.
class Pattern {
public:
    // Throws std::invalid_argument if offsets is empty or not strictly increasing.
    explicit Pattern(std::vector<std::uint64_t> offsets);

    // Comma-separated ascending integers, e.g. "0,2,6". Whitespace is ignored.
    static Pattern parse(std::string_view text);
    static Pattern load(const std::filesystem::path& path);

    std::span<const std::uint64_t> offsets() const { return offsets_; }
    std::span<const std::uint64_t> original() const { return original_; }
    std::size_t size() const { return offsets_.size(); }
    std::uint64_t diameter() const { return offsets_.back(); }
    // The offsets as given, comma-separated.
    std::string to_string() const;

    friend bool operator==(const Pattern& a, const Pattern& b) { return a.offsets_ == b.offsets_; }

private:
    std::vector<std::uint64_t> original_;
    std::vector<std::uint64_t> offsets_;
};

struct SingularSeries {
    bool admissible = false;
    // value = 0 exactly for inadmissible patterns. The product runs over
    // p <= truncation_point = max(P_max, diameter, 2 l), beyond which every
    // factor is 1 + O(l^2 / p^2).
    SeriesEstimate estimate;
};

enum class DistanceMode {
    all_pairs,    // every pair (p, p + 2m) of primes in the sample
    consecutive,  // only neighbouring primes, i.e. gaps
};

struct DistanceRow {
    std::uint64_t m;
    std::uint64_t count;
    double relative_frequency;  // count(m) / count(1)
};

std::uint64_t diameter(const Pattern& pattern);

// |{ j mod p : j in J }|. Throws std::invalid_argument if p is not prime.
std::uint64_t residues_covered(const Pattern& pattern, std::uint64_t p);

// True iff J misses a residue class modulo every prime p <= |J|.
bool is_admissible(const Pattern& pattern);

// Truncated product C_J = prod_p (1 - |J mod p| / p) / (1 - 1/p)^|J|.
// Throws std::invalid_argument if p_max < |J|, std::out_of_range if the
// truncation point exceeds the sieve.
SingularSeries singular_series(const Pattern& pattern, std::uint64_t p_max, const PrimeSieve& sieve);

// C_{2m} / C_2 = prod over odd primes p | m of (p - 1) / (p - 2).
double c2m_ratio(std::uint64_t m, const PrimeSieve& sieve);

// Number of 1 <= n <= x with n + j prime for every j in J.
// Throws std::out_of_range if x + diameter exceeds the sieve.
std::uint64_t count_pattern(const Pattern& pattern, std::uint64_t x, const PrimeSieve& sieve);

// C_J * int_2^x dy / (ln y)^|J|; 0 for inadmissible J.
double hl_prediction(const Pattern& pattern, std::uint64_t x, std::uint64_t p_max,
                     const PrimeSieve& sieve);

// Frequencies of the distance 2m, m = 1..m_max, among the first prime_count
// odd primes, normalized by the frequency at m = 1.
std::vector<DistanceRow> distance_histogram(std::uint64_t prime_count, std::uint64_t m_max,
                                            const PrimeSieve& sieve,
                                            DistanceMode mode = DistanceMode::all_pairs);

// The first l primes larger than l, as a pattern (original offsets are the primes).
Pattern first_primes_tuple(std::uint64_t l, const PrimeSieve& sieve);

}  // namespace primelab

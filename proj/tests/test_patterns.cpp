#include <doctest.h>

#include <cmath>
#include <fstream>
#include <random>
#include <set>
#include <stdexcept>

#include "primelab/patterns.hpp"

using namespace primelab;

namespace {

const PrimeSieve& sieve() {
    static const PrimeSieve s(3000000);
    return s;
}

bool slow_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

// Admissible iff for every prime p some residue r has r + j != 0 mod p for all j.
// Checked for every prime p <= |J| + 1 by explicit residue enumeration.
bool slow_admissible(const std::vector<std::uint64_t>& j) {
    for (std::uint64_t p = 2; p <= j.size() + 1; ++p) {
        if (!slow_prime(p)) continue;
        std::set<std::uint64_t> hit;
        for (std::uint64_t x : j) hit.insert(x % p);
        if (hit.size() == p) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("pattern parsing and normalization") {
    const Pattern p = Pattern::parse(" 4, 6 ,10 ");
    CHECK(p.size() == 3);
    CHECK(p.diameter() == 6);
    CHECK(std::vector<std::uint64_t>(p.offsets().begin(), p.offsets().end()) ==
          std::vector<std::uint64_t>{0, 2, 6});
    CHECK(p.to_string() == "4,6,10");
    CHECK(p == Pattern::parse("0,2,6"));
    CHECK(Pattern::parse("7").diameter() == 0);
    CHECK_THROWS_AS(Pattern::parse(""), std::invalid_argument);
    CHECK_THROWS_AS(Pattern::parse("0,,2"), std::invalid_argument);
    CHECK_THROWS_AS(Pattern::parse("0,2,2"), std::invalid_argument);
    CHECK_THROWS_AS(Pattern::parse("2,0"), std::invalid_argument);
    CHECK_THROWS_AS(Pattern::parse("0,x"), std::invalid_argument);
    CHECK_THROWS_AS(Pattern::parse("-1,2"), std::invalid_argument);
    CHECK_THROWS_AS(Pattern::load("/nonexistent/pattern.txt"), std::invalid_argument);
}

TEST_CASE("fixture files") {
    const Pattern twin = Pattern::load(PRIMELAB_DATA_DIR "/twin.txt");
    CHECK(twin == Pattern::parse("0,2"));
    const Pattern big = Pattern::load(PRIMELAB_DATA_DIR "/fifty_tuple.txt");
    CHECK(big.size() == 50);
    CHECK(big.diameter() == 246);
    CHECK(is_admissible(big));
}

TEST_CASE("residues and admissibility") {
    CHECK(residues_covered(Pattern::parse("0,2,4"), 3) == 3);
    CHECK(residues_covered(Pattern::parse("0,2,6"), 3) == 2);
    CHECK(residues_covered(Pattern::parse("0,2,6"), 7) == 3);
    CHECK_THROWS_AS(residues_covered(Pattern::parse("0,2"), 4), std::invalid_argument);
    CHECK(is_admissible(Pattern::parse("0")));
    CHECK(is_admissible(Pattern::parse("0,2")));
    CHECK_FALSE(is_admissible(Pattern::parse("0,1")));
    CHECK_FALSE(is_admissible(Pattern::parse("0,2,4")));
    CHECK(is_admissible(Pattern::parse("0,2,6,8")));
    CHECK(is_admissible(Pattern::parse("0,4,6,10,12,16")));
}

TEST_CASE("admissibility agrees with residue enumeration on random patterns") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 3000; ++trial) {
        const std::size_t l = 1 + rng() % 8;
        std::set<std::uint64_t> s;
        while (s.size() < l) s.insert(rng() % 60);
        const std::vector<std::uint64_t> j(s.begin(), s.end());
        REQUIRE(is_admissible(Pattern(j)) == slow_admissible(j));
    }
}

TEST_CASE("singular series") {
    const SingularSeries twin = singular_series(Pattern::parse("0,2"), 100000, sieve());
    CHECK(twin.admissible);
    CHECK(twin.estimate.value == doctest::Approx(1.3203236316937).epsilon(2e-5));
    CHECK(twin.estimate.tail_bound > 0);
    const SingularSeries bad = singular_series(Pattern::parse("0,2,4"), 1000, sieve());
    CHECK_FALSE(bad.admissible);
    CHECK(bad.estimate.value == 0.0);
    // one offset: every factor is exactly 1
    CHECK(singular_series(Pattern::parse("0"), 1000, sieve()).estimate.value == doctest::Approx(1.0).epsilon(1e-14));
    // the truncation point rises to cover 2|J| and the diameter
    CHECK(singular_series(Pattern::parse("0,2,6"), 3, sieve()).estimate.truncation_point == 6);
    CHECK(singular_series(Pattern::parse("0,100"), 2, sieve()).estimate.truncation_point == 100);
    CHECK_THROWS_AS(singular_series(Pattern::parse("0,2,6"), 2, sieve()), std::invalid_argument);
    CHECK_THROWS_AS(singular_series(Pattern::parse("0,2"), 3000001, sieve()), std::out_of_range);
}

TEST_CASE("tail bound covers the change from doubling the cutoff") {
    for (const char* text : {"0,2", "0,2,6", "0,4,6,10,12,16", "0,2,6,8,12"}) {
        const Pattern j = Pattern::parse(text);
        for (std::uint64_t p : {1000, 50000}) {
            const SingularSeries a = singular_series(j, p, sieve());
            const SingularSeries b = singular_series(j, 2 * p, sieve());
            CHECK(std::abs(b.estimate.value - a.estimate.value) <= a.estimate.tail_bound);
        }
    }
}

TEST_CASE("C_2m ratio") {
    CHECK(c2m_ratio(1, sieve()) == 1.0);
    CHECK(c2m_ratio(3, sieve()) == 2.0);
    CHECK(c2m_ratio(15, sieve()) == doctest::Approx(2.0 * 4.0 / 3.0));
    CHECK(c2m_ratio(9, sieve()) == 2.0);
    CHECK_THROWS_AS(c2m_ratio(0, sieve()), std::invalid_argument);
    // against the full singular series of {0, 2m}
    const double c2 = singular_series(Pattern::parse("0,2"), 200000, sieve()).estimate.value;
    for (std::uint64_t m : {3, 5, 15, 21}) {
        const double c = singular_series(Pattern({0, 2 * m}), 200000, sieve()).estimate.value;
        CHECK(c / c2 == doctest::Approx(c2m_ratio(m, sieve())).epsilon(1e-4));
    }
}

TEST_CASE("pattern counts against a direct scan") {
    for (const char* text : {"0,2", "0,4", "0,2,6", "0,4,6", "0,2,6,8"}) {
        const Pattern j = Pattern::parse(text);
        std::uint64_t brute = 0;
        for (std::uint64_t n = 1; n <= 100000; ++n) {
            bool all = true;
            for (std::uint64_t off : j.offsets()) all = all && slow_prime(n + off);
            brute += all;
        }
        REQUIRE(count_pattern(j, 100000, sieve()) == brute);
    }
    CHECK(count_pattern(Pattern::parse("0,2"), 10, sieve()) == 2);  // (3,5), (5,7)
    CHECK(count_pattern(Pattern::parse("0,2,4"), 1000, sieve()) == 1);  // (3,5,7)
    CHECK_THROWS_AS(count_pattern(Pattern::parse("0,2"), 2999999, sieve()), std::out_of_range);
}

TEST_CASE("Hardy-Littlewood prediction") {
    const double h = hl_prediction(Pattern::parse("0,2"), 1000000, 100000, sieve());
    CHECK(h / count_pattern(Pattern::parse("0,2"), 1000000, sieve()) == doctest::Approx(1.0).epsilon(0.02));
    CHECK(hl_prediction(Pattern::parse("0,1"), 1000000, 1000, sieve()) == 0.0);
}

TEST_CASE("distance histogram against direct counting") {
    const std::uint64_t count = 2000;
    const auto all = distance_histogram(count, 10, sieve(), DistanceMode::all_pairs);
    const auto gaps = distance_histogram(count, 10, sieve(), DistanceMode::consecutive);
    std::vector<std::uint64_t> ps;
    for (std::uint64_t n = 3; ps.size() < count; n += 2)
        if (slow_prime(n)) ps.push_back(n);
    for (std::uint64_t m = 1; m <= 10; ++m) {
        std::uint64_t pairs = 0, consecutive = 0;
        for (std::size_t a = 0; a < ps.size(); ++a) {
            for (std::size_t b = a + 1; b < ps.size(); ++b)
                pairs += (ps[b] - ps[a] == 2 * m);
            if (a + 1 < ps.size()) consecutive += (ps[a + 1] - ps[a] == 2 * m);
        }
        REQUIRE(all[m - 1].m == m);
        REQUIRE(all[m - 1].count == pairs);
        REQUIRE(gaps[m - 1].count == consecutive);
    }
    CHECK(all[0].relative_frequency == 1.0);
    CHECK_THROWS_AS(distance_histogram(1, 10, sieve()), std::invalid_argument);
    CHECK_THROWS_AS(distance_histogram(100, 0, sieve()), std::invalid_argument);
    CHECK_THROWS_AS(distance_histogram(1000000, 10, sieve()), std::out_of_range);
}

TEST_CASE("first primes tuple") {
    const Pattern t = first_primes_tuple(5, sieve());
    CHECK(t.to_string() == "7,11,13,17,19");
    CHECK(t.diameter() == 12);
    CHECK(first_primes_tuple(1, sieve()).to_string() == "2");
    CHECK(first_primes_tuple(2, sieve()).to_string() == "3,5");
    const PrimeSieve tiny(30);
    CHECK_THROWS_AS(first_primes_tuple(10, tiny), std::out_of_range);
}

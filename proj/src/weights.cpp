#include "primelab/weights.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>

#include "primelab/parallel.hpp"

namespace primelab {

namespace {

struct SignedDivisor {
    std::uint64_t d;
    int mu;
    double t;  // ln d / ln D
};

void require_cutoff(std::uint64_t D) {
    if (D < 2) throw std::invalid_argument("divisor cutoff D must be at least 2, got " + std::to_string(D));
}

// Squarefree divisors d <= D of n with mu(d), ascending.
std::vector<SignedDivisor> squarefree_divisors(std::uint64_t n, std::uint64_t D, double log_D,
                                               const PrimeSieve& sieve) {
    const Factorization f = sieve.factorize(n);
    std::vector<SignedDivisor> out{{1, 1, 0.0}};
    for (const auto& pe : f.factors) {
        if (pe.prime > D) break;
        const std::size_t existing = out.size();
        for (std::size_t i = 0; i < existing; ++i) {
            if (out[i].d > D / pe.prime) continue;
            const std::uint64_t d = out[i].d * pe.prime;
            out.push_back({d, -out[i].mu, 0.0});
        }
    }
    std::sort(out.begin(), out.end(),
              [](const SignedDivisor& a, const SignedDivisor& b) { return a.d < b.d; });
    for (auto& sd : out) sd.t = std::log(static_cast<double>(sd.d)) / log_D;
    return out;
}

std::uint64_t parse_uint(std::string_view text, std::string_view what) {
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (text.empty() || ec != std::errc() || ptr != text.data() + text.size())
        throw std::invalid_argument("invalid " + std::string(what) + " '" + std::string(text) + "'");
    return v;
}

}  // namespace

double SimplexPower::operator()(std::span<const double> t) const {
    const double sum = std::accumulate(t.begin(), t.end(), 0.0);
    if (sum >= 1.0) return 0.0;
    return std::pow(1.0 - sum, static_cast<double>(k));
}

WeightSpec WeightSpec::parse(std::string_view text) {
    WeightSpec spec;
    const auto colon = text.find(':');
    const std::string_view name = text.substr(0, colon);
    if (name == "uniform") {
        if (colon != std::string_view::npos) throw std::invalid_argument("uniform weight takes no parameters");
        spec.kind = WeightKind::uniform;
        return spec;
    }
    if (name == "hard")
        spec.kind = WeightKind::hard;
    else if (name == "smooth")
        spec.kind = WeightKind::smooth;
    else if (name == "multidim")
        spec.kind = WeightKind::multidim;
    else
        throw std::invalid_argument("unknown weight kind '" + std::string(name) + "'");
    if (colon == std::string_view::npos) throw std::invalid_argument("weight spec needs D=<cutoff>");

    bool have_D = false;
    std::string_view rest = text.substr(colon + 1);
    while (!rest.empty()) {
        const auto comma = rest.find(',');
        const std::string_view item = rest.substr(0, comma);
        rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
        const auto eq = item.find('=');
        if (eq == std::string_view::npos)
            throw std::invalid_argument("expected key=value in weight spec, got '" + std::string(item) + "'");
        const std::string_view key = item.substr(0, eq);
        const std::string_view value = item.substr(eq + 1);
        if (key == "D") {
            spec.D = parse_uint(value, "D");
            have_D = true;
        } else if (key == "k" && spec.kind != WeightKind::hard) {
            const std::uint64_t k = parse_uint(value, "k");
            if (k > 64) throw std::invalid_argument("k must be at most 64");
            spec.k = static_cast<unsigned>(k);
        } else {
            throw std::invalid_argument("unexpected key '" + std::string(key) + "' in weight spec");
        }
    }
    if (!have_D) throw std::invalid_argument("weight spec needs D=<cutoff>");
    require_cutoff(spec.D);
    return spec;
}

std::string WeightSpec::to_string() const {
    switch (kind) {
        case WeightKind::uniform: return "uniform";
        case WeightKind::hard: return "hard:D=" + std::to_string(D);
        case WeightKind::smooth:
        case WeightKind::multidim: {
            std::string out = (kind == WeightKind::smooth ? "smooth:D=" : "multidim:D=") + std::to_string(D);
            if (k) out += ",k=" + std::to_string(*k);
            return out;
        }
    }
    return {};
}

unsigned WeightSpec::exponent_for(const Pattern& pattern) const {
    if (k) return *k;
    switch (kind) {
        case WeightKind::smooth: return 1;
        case WeightKind::multidim: return static_cast<unsigned>(pattern.size());
        default: return 0;
    }
}

int delta_rough(std::uint64_t n, std::uint64_t D, const PrimeSieve& sieve) {
    require_cutoff(D);
    const Factorization f = sieve.factorize(n);
    return (f.empty() || f.factors.front().prime > D) ? 1 : 0;
}

std::uint64_t delta0(std::uint64_t n, std::uint64_t D, const PrimeSieve& sieve) {
    require_cutoff(D);
    std::int64_t sum = 0;
    for (const auto& sd : squarefree_divisors(n, D, std::log(static_cast<double>(D)), sieve)) sum += sd.mu;
    return static_cast<std::uint64_t>(sum * sum);
}

double delta_k(std::uint64_t n, std::uint64_t D, unsigned k, const PrimeSieve& sieve) {
    require_cutoff(D);
    const double log_D = std::log(static_cast<double>(D));
    // (ln(D/d) / ln D)^k written as (1 - t)^k, the same expression the
    // multidimensional weight evaluates, so that |J| = 1 reproduces it exactly.
    double sum = 0.0;
    for (const auto& sd : squarefree_divisors(n, D, log_D, sieve))
        sum += sd.mu * std::pow(1.0 - sd.t, static_cast<double>(k));
    return sum * sum;
}

double maynard_weight(std::uint64_t n, const Pattern& pattern, std::uint64_t D, unsigned k,
                      const PrimeSieve& sieve, std::uint64_t max_nodes) {
    require_cutoff(D);
    const double log_D = std::log(static_cast<double>(D));
    const auto offsets = pattern.offsets();
    const std::size_t l = offsets.size();
    std::vector<std::vector<SignedDivisor>> lists;
    lists.reserve(l);
    for (std::uint64_t j : offsets) lists.push_back(squarefree_divisors(n + j, D, log_D, sieve));

    const SimplexPower F{k};
    std::vector<double> t(l, 0.0);
    std::uint64_t visited = 0;
    double sum = 0.0;
    auto walk = [&](auto&& self, std::size_t i, std::uint64_t product, int mu) -> void {
        if (++visited > max_nodes)
            throw ResourceLimitError("divisor-tuple search for n = " + std::to_string(n) + " exceeds " +
                                     std::to_string(max_nodes) + " nodes; lower D or |J|");
        if (i == l) {
            // Every leaf has d_1...d_l <= D; for k = 0 that alone decides F = 1.
            sum += mu * (k == 0 ? 1.0 : F(t));
            return;
        }
        for (const SignedDivisor& sd : lists[i]) {
            if (sd.d > D / product) break;
            if (std::gcd(product, sd.d) != 1) continue;  // mu(d_1...d_l) = 0
            t[i] = sd.t;
            self(self, i + 1, product * sd.d, mu * sd.mu);
        }
        t[i] = 0.0;
    };
    walk(walk, 0, 1, 1);
    return sum * sum;
}

double weight_value(std::uint64_t n, const Pattern& pattern, const WeightSpec& spec,
                    const PrimeSieve& sieve) {
    switch (spec.kind) {
        case WeightKind::uniform: return 1.0;
        case WeightKind::hard: {
            double rho = 1.0;
            for (std::uint64_t j : pattern.offsets()) rho *= static_cast<double>(delta0(n + j, spec.D, sieve));
            return rho;
        }
        case WeightKind::smooth: {
            const unsigned k = spec.exponent_for(pattern);
            double rho = 1.0;
            for (std::uint64_t j : pattern.offsets()) rho *= delta_k(n + j, spec.D, k, sieve);
            return rho;
        }
        case WeightKind::multidim:
            return maynard_weight(n, pattern, spec.D, spec.exponent_for(pattern), sieve);
    }
    throw std::logic_error("unhandled weight kind");
}

WeightReport average_report(const Pattern& pattern, const WeightSpec& spec, std::uint64_t N,
                            const PrimeSieve& sieve) {
    if (spec.kind != WeightKind::uniform) require_cutoff(spec.D);
    return average_report(
        pattern, [&](std::uint64_t n) { return weight_value(n, pattern, spec, sieve); }, N, sieve);
}

WeightReport average_report(const Pattern& pattern,
                            const std::function<double(std::uint64_t)>& rho, std::uint64_t N,
                            const PrimeSieve& sieve) {
    if (N < 1) throw std::invalid_argument("N must be at least 1");
    if (N > sieve.limit() / 2 || pattern.diameter() > sieve.limit() - 2 * N)
        throw std::out_of_range("2N + diameter exceeds sieve limit " + std::to_string(sieve.limit()));

    const std::size_t count = N + 1;  // n = N..2N
    std::vector<double> values(count, 0.0);
    parallel_for_chunks(count, worker_count(), [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) values[i] = rho(N + i);
    });

    const auto offsets = pattern.offsets();
    double denominator = 0.0;
    std::vector<double> numerators(offsets.size(), 0.0);
    for (std::size_t i = 0; i < count; ++i) {
        const double v = values[i];
        if (v < 0.0) throw std::invalid_argument("weight must be non-negative");
        denominator += v;
        for (std::size_t k = 0; k < offsets.size(); ++k)
            if (sieve.test(N + i + offsets[k])) numerators[k] += v;
    }
    if (denominator == 0.0)
        throw DegenerateWeightError("weight vanishes on every n in [" + std::to_string(N) + ", " +
                                    std::to_string(2 * N) + "]");

    WeightReport report{pattern, N, {}, 0.0};
    for (double num : numerators) {
        report.ratios.push_back(num / denominator);
        report.average += num / denominator;
    }
    return report;
}

}  // namespace primelab

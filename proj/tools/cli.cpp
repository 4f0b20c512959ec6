#include "primelab/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cinttypes>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <new>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "primelab/arith.hpp"
#include "primelab/mellin.hpp"
#include "primelab/patterns.hpp"
#include "primelab/sieve.hpp"
#include "primelab/weights.hpp"

#ifndef PRIMELAB_VERSION
#define PRIMELAB_VERSION "0.0.0"
#endif
#ifndef PRIMELAB_DATA_DIR
#define PRIMELAB_DATA_DIR "data"
#endif

namespace primelab::cli {

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}
std::string fmt(std::uint64_t v) { return std::to_string(v); }
std::string fmt(unsigned v) { return std::to_string(v); }
std::string fmt(bool v) { return v ? "true" : "false"; }
std::string fmt(const std::string& v) { return v; }
template <class T>
std::string fmt(const std::vector<T>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + fmt(v[i]);
    return out;
}

std::uint64_t pow10(unsigned e) {
    std::uint64_t v = 1;
    for (unsigned i = 0; i < e; ++i) v *= 10;
    return v;
}

// Upper bound for the n-th prime (Rosser), padded for small n.
std::uint64_t nth_prime_bound(std::uint64_t n) {
    if (n < 6) return 15;
    const double x = static_cast<double>(n);
    return static_cast<std::uint64_t>(x * (std::log(x) + std::log(std::log(x)))) + 16;
}

void require(bool ok, const std::string& message) {
    if (!ok) throw std::invalid_argument(message);
}

std::unique_ptr<PrimeSieve> make_sieve(std::uint64_t limit) {
    if (limit > PrimeSieve::kMaxLimit)
        throw std::out_of_range("experiment needs a sieve up to " + std::to_string(limit) +
                                ", above the supported " + std::to_string(PrimeSieve::kMaxLimit));
    return std::make_unique<PrimeSieve>(std::max<std::uint64_t>(limit, 2));
}

class Csv {
public:
    explicit Csv(std::vector<std::string> header) : header_(std::move(header)) {}

    template <class... T>
    void row(const T&... cells) {
        rows_.push_back({fmt(cells)...});
    }
    void comment(std::string text) { comments_.push_back(std::move(text)); }

    void write(std::ostream& out, const std::string& source, const std::string& flags) const {
        out << join(header_) << '\n';
        for (const auto& r : rows_) out << join(r) << '\n';
        for (const auto& c : comments_) out << "# " << c << '\n';
        out << "# source=" << source << " version=" << PRIMELAB_VERSION << " flags=" << flags << '\n';
    }

private:
    static std::string join(const std::vector<std::string>& cells) {
        std::string s;
        for (std::size_t i = 0; i < cells.size(); ++i) s += (i ? "," : "") + cells[i];
        return s;
    }

    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
    std::vector<std::string> comments_;
};

// One subcommand: its options, their canonical echo, and the experiment body.
struct Command {
    std::string source;
    CLI::App* app = nullptr;
    std::map<std::string, std::function<std::string()>> flags;
    std::function<Csv()> body;

    template <class T>
    CLI::Option* option(const std::string& name, T& var, const std::string& help) {
        flags[name] = [&var] { return fmt(var); };
        return app->add_option("--" + name, var, help)->capture_default_str();
    }

    std::string canonical_flags() const {
        std::string out;
        for (const auto& [key, value] : flags) out += (out.empty() ? "" : ";") + key + "=" + value();
        return out;
    }
};

// Inline "0,2,6" or "@path". Relative paths that do not exist are also looked
// up in $PRIMELAB_DATA_DIR and in the data directory of the source tree.
Pattern resolve_pattern(const std::string& arg) {
    if (arg.empty() || arg[0] != '@') return Pattern::parse(arg);
    const std::filesystem::path path = arg.substr(1);
    if (std::filesystem::exists(path) || path.is_absolute()) return Pattern::load(path);
    if (const char* dir = std::getenv("PRIMELAB_DATA_DIR")) {
        const auto candidate = std::filesystem::path(dir) / path;
        if (std::filesystem::exists(candidate)) return Pattern::load(candidate);
    }
    return Pattern::load(std::filesystem::path(PRIMELAB_DATA_DIR) / path);
}

DirichletCharacter resolve_character(const std::string& text) {
    if (text == "chi3") return chi3();
    if (text == "chi5") return chi5();
    std::uint64_t a = 0, b = 0;
    char tail = 0;
    if (std::sscanf(text.c_str(), "principal:%" SCNu64 "%c", &a, &tail) == 1) return DirichletCharacter::principal(a);
    if (std::sscanf(text.c_str(), "root:%" SCNu64 ",%" SCNu64 "%c", &a, &b, &tail) == 2)
        return DirichletCharacter::from_primitive_root(a, b);
    throw std::invalid_argument("unknown character '" + text +
                                "'; expected chi3, chi5, principal:<N> or root:<p>,<index>");
}

DistanceMode resolve_mode(const std::string& text) {
    if (text == "all-pairs") return DistanceMode::all_pairs;
    if (text == "consecutive") return DistanceMode::consecutive;
    throw std::invalid_argument("mode must be all-pairs or consecutive, got '" + text + "'");
}

std::vector<double> sorted_unique(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

// ---------------------------------------------------------------- sieve & counts

void add_pi_table(Command& c) {
    auto min_exp = std::make_shared<unsigned>(1);
    auto max_exp = std::make_shared<unsigned>(8);
    c.option("min-exp", *min_exp, "smallest x = 10^min-exp")->check(CLI::Range(1u, 9u));
    c.option("max-exp", *max_exp, "largest x = 10^max-exp")->check(CLI::Range(1u, 9u));
    c.body = [=] {
        require(*min_exp <= *max_exp, "min-exp must not exceed max-exp");
        const auto sieve = make_sieve(pow10(*max_exp));
        Csv csv({"x", "pi", "li", "li_over_pi_minus_1"});
        for (unsigned e = *min_exp; e <= *max_exp; ++e) {
            const std::uint64_t x = pow10(e);
            const std::uint64_t pi = pi_count(x, *sieve);
            const double l = li(static_cast<double>(x));
            csv.row(x, pi, l, l / static_cast<double>(pi) - 1.0);
        }
        return csv;
    };
}

void add_residue_profile(Command& c) {
    auto x = std::make_shared<std::uint64_t>(1000000);
    auto modulus = std::make_shared<std::uint64_t>(10);
    c.option("x", *x, "count primes p <= x")->check(CLI::Range(std::uint64_t{2}, PrimeSieve::kMaxLimit));
    c.option("modulus", *modulus, "modulus b")->check(CLI::Range(std::uint64_t{1}, std::uint64_t{1000000}));
    c.body = [=] {
        const auto sieve = make_sieve(std::max(*x, isqrt(*modulus) + 1));
        const ResidueProfile profile = pi_residue(*x, *modulus, *sieve);
        const std::uint64_t phi = sieve->euler_phi(*modulus);
        Csv csv({"residue", "count", "deviation"});
        for (std::uint64_t a = 0; a < *modulus; ++a)
            if (std::gcd(a, *modulus) == 1) csv.row(a, profile.counts[a], profile.deviation(a, phi));
        return csv;
    };
}

void add_bv_average(Command& c) {
    auto x = std::make_shared<std::uint64_t>(48611);
    auto b_max = std::make_shared<std::uint64_t>(100);
    c.option("x", *x, "count primes p <= x")->check(CLI::Range(std::uint64_t{4}, PrimeSieve::kMaxLimit));
    c.option("b-max", *b_max, "largest modulus, at most sqrt(x)");
    c.body = [=] {
        require(*b_max >= 2 && *b_max <= isqrt(*x), "b-max must lie in [2, sqrt(x)]");
        const auto sieve = make_sieve(*x);
        Csv csv({"modulus", "max_dev", "running_avg"});
        for (const DeviationRow& r : bv_statistic(*x, *b_max, *sieve)) csv.row(r.modulus, r.max_dev, r.running_avg);
        return csv;
    };
}

void add_mertens(Command& c) {
    auto min_exp = std::make_shared<unsigned>(2);
    auto max_exp = std::make_shared<unsigned>(8);
    c.option("min-exp", *min_exp, "smallest x = 10^min-exp")->check(CLI::Range(1u, 18u));
    c.option("max-exp", *max_exp, "largest x = 10^max-exp")->check(CLI::Range(1u, 18u));
    c.body = [=] {
        require(*min_exp <= *max_exp, "min-exp must not exceed max-exp");
        const auto sieve = make_sieve(isqrt(pow10(*max_exp)));
        Csv csv({"x", "product", "target", "ratio"});
        for (unsigned e = *min_exp; e <= *max_exp; ++e) {
            const MertensResult m = mertens_product(pow10(e), *sieve);
            csv.row(pow10(e), m.product.value, m.target, m.ratio());
        }
        return csv;
    };
}

void add_gamma(Command& c) {
    auto max_exp = std::make_shared<unsigned>(7);
    c.option("max-exp", *max_exp, "largest N = 10^max-exp")->check(CLI::Range(0u, 9u));
    c.body = [=] {
        Csv csv({"n", "partial", "error"});
        for (unsigned e = 0; e <= *max_exp; ++e) {
            const double g = euler_gamma_partial(pow10(e));
            csv.row(pow10(e), g, g - kEulerGamma);
        }
        return csv;
    };
}

void add_zeta(Command& c) {
    auto s = std::make_shared<double>(2.0);
    auto max_exp = std::make_shared<unsigned>(6);
    c.option("s", *s, "real s > 1");
    c.option("max-exp", *max_exp, "largest cutoff 10^max-exp")->check(CLI::Range(1u, 8u));
    c.body = [=] {
        require(*s > 1.0, "s must exceed 1");
        const auto sieve = make_sieve(pow10(*max_exp));
        Csv csv({"cutoff", "partial_sum", "euler_product"});
        for (unsigned e = 1; e <= *max_exp; ++e)
            csv.row(pow10(e), zeta_partial(*s, pow10(e)), euler_product_zeta(*s, pow10(e), *sieve));
        return csv;
    };
}

void add_coprime_count(Command& c) {
    auto n = std::make_shared<std::uint64_t>(1000);
    auto primes = std::make_shared<std::vector<std::uint64_t>>(std::vector<std::uint64_t>{2, 3, 5});
    c.option("n", *n, "count 1 <= m <= n")->check(CLI::PositiveNumber);
    c.option("primes", *primes, "comma-separated distinct primes")->delimiter(',');
    c.body = [=] {
        std::uint64_t largest = 2;
        for (std::uint64_t p : *primes) largest = std::max(largest, p);
        require(largest <= std::uint64_t{1} << 62, "primes must be below 2^62");
        const auto sieve = make_sieve(isqrt(largest) + 1);
        Csv csv({"n", "count"});
        csv.row(*n, coprime_count_mobius(*n, *primes, *sieve));
        return csv;
    };
}

void add_crt(Command& c) {
    auto a1 = std::make_shared<std::uint64_t>(0);
    auto b1 = std::make_shared<std::uint64_t>(0);
    auto a2 = std::make_shared<std::uint64_t>(0);
    auto b2 = std::make_shared<std::uint64_t>(0);
    c.option("a1", *a1, "first residue")->required();
    c.option("b1", *b1, "first modulus")->required();
    c.option("a2", *a2, "second residue")->required();
    c.option("b2", *b2, "second modulus")->required();
    c.body = [=] {
        const Residue r = crt_combine(*a1, *b1, *a2, *b2);
        Csv csv({"residue", "modulus"});
        csv.row(r.value, r.modulus);
        return csv;
    };
}

void add_dirichlet_l(Command& c) {
    auto character = std::make_shared<std::string>("chi3");
    auto s = std::make_shared<double>(1.0);
    auto terms = std::make_shared<std::uint64_t>(1000000);
    c.option("character", *character, "chi3, chi5, principal:<N> or root:<p>,<index>");
    c.option("s", *s, "real s >= 1");
    c.option("terms", *terms, "number of terms")->check(CLI::PositiveNumber);
    c.body = [=] {
        const DirichletCharacter chi = resolve_character(*character);
        const auto v = dirichlet_l(chi, *s, *terms);
        Csv csv({"s", "terms", "re", "im"});
        csv.row(*s, *terms, v.real(), v.imag());
        return csv;
    };
}

// ---------------------------------------------------------------- patterns

void add_tuple_check(Command& c) {
    auto text = std::make_shared<std::string>();
    c.option("pattern", *text, "offsets \"0,2,6\" or @file")->required();
    c.body = [=] {
        const Pattern j = resolve_pattern(*text);
        *text = j.to_string();
        const bool ok = is_admissible(j);
        Csv csv({"size", "diameter", "admissible"});
        csv.row(static_cast<std::uint64_t>(j.size()), j.diameter(), ok);
        csv.comment("admissible=" + fmt(ok) + ",size=" + std::to_string(j.size()) +
                    ",diameter=" + std::to_string(j.diameter()));
        return csv;
    };
}

void add_tuple_first_primes(Command& c) {
    auto l = std::make_shared<std::uint64_t>(50);
    c.option("l", *l, "tuple length")->check(CLI::Range(std::uint64_t{1}, std::uint64_t{50000000}));
    c.body = [=] {
        const auto sieve = make_sieve(nth_prime_bound(2 * *l));
        const Pattern j = first_primes_tuple(*l, *sieve);
        Csv csv({"l", "first", "last", "diameter", "admissible"});
        csv.row(*l, j.original().front(), j.original().back(), j.diameter(), is_admissible(j));
        return csv;
    };
}

void add_singular_series(Command& c) {
    auto text = std::make_shared<std::string>("0,2");
    auto p_max = std::make_shared<std::uint64_t>(1000000);
    c.option("pattern", *text, "offsets \"0,2,6\" or @file");
    c.option("p-max", *p_max, "truncate the product at p <= p-max");
    c.body = [=] {
        const Pattern j = resolve_pattern(*text);
        *text = j.to_string();
        require(*p_max >= j.size(), "p-max must be at least the pattern size");
        const auto sieve = make_sieve(std::max({*p_max, j.diameter(), 2 * j.size()}));
        const SingularSeries c_j = singular_series(j, *p_max, *sieve);
        Csv csv({"p_max", "truncation_point", "admissible", "value", "tail_bound"});
        csv.row(*p_max, c_j.estimate.truncation_point, c_j.admissible, c_j.estimate.value, c_j.estimate.tail_bound);
        return csv;
    };
}

void add_c2m(Command& c) {
    auto m_max = std::make_shared<std::uint64_t>(50);
    c.option("m-max", *m_max, "largest m")->check(CLI::Range(std::uint64_t{1}, std::uint64_t{100000000}));
    c.body = [=] {
        const auto sieve = make_sieve(isqrt(*m_max) + 1);
        Csv csv({"m", "c2m_over_c2"});
        for (std::uint64_t m = 1; m <= *m_max; ++m) csv.row(m, c2m_ratio(m, *sieve));
        return csv;
    };
}

void add_pattern_count(Command& c) {
    auto text = std::make_shared<std::string>("0,2");
    auto x = std::make_shared<std::uint64_t>(10000000);
    c.option("pattern", *text, "offsets \"0,2,6\" or @file");
    c.option("x", *x, "count n <= x")->check(CLI::PositiveNumber);
    c.body = [=] {
        const Pattern j = resolve_pattern(*text);
        *text = j.to_string();
        const auto sieve = make_sieve(*x + j.diameter());
        Csv csv({"x", "count"});
        csv.row(*x, count_pattern(j, *x, *sieve));
        return csv;
    };
}

void add_hl_compare(Command& c) {
    auto text = std::make_shared<std::string>("0,2");
    auto min_exp = std::make_shared<unsigned>(2);
    auto max_exp = std::make_shared<unsigned>(7);
    auto p_max = std::make_shared<std::uint64_t>(1000000);
    c.option("pattern", *text, "offsets \"0,2,6\" or @file");
    c.option("min-exp", *min_exp, "smallest x = 10^min-exp")->check(CLI::Range(1u, 9u));
    c.option("max-exp", *max_exp, "largest x = 10^max-exp")->check(CLI::Range(1u, 9u));
    c.option("p-max", *p_max, "singular series truncation");
    c.body = [=] {
        require(*min_exp <= *max_exp, "min-exp must not exceed max-exp");
        const Pattern j = resolve_pattern(*text);
        *text = j.to_string();
        require(*p_max >= j.size(), "p-max must be at least the pattern size");
        const auto sieve =
            make_sieve(std::max({pow10(*max_exp) + j.diameter(), *p_max, 2 * j.size()}));
        Csv csv({"x", "count", "prediction", "ratio"});
        for (unsigned e = *min_exp; e <= *max_exp; ++e) {
            const std::uint64_t x = pow10(e);
            const std::uint64_t count = count_pattern(j, x, *sieve);
            const double predicted = hl_prediction(j, x, *p_max, *sieve);
            csv.row(x, count, predicted, static_cast<double>(count) / predicted);
        }
        return csv;
    };
}

void add_gap_histogram(Command& c) {
    auto primes = std::make_shared<std::uint64_t>(1000000);
    auto m_max = std::make_shared<std::uint64_t>(50);
    auto mode = std::make_shared<std::string>("all-pairs");
    c.option("primes", *primes, "sample size: the first N odd primes")
        ->check(CLI::Range(std::uint64_t{2}, std::uint64_t{150000000}));
    c.option("m-max", *m_max, "largest half-distance m")->check(CLI::Range(std::uint64_t{1}, std::uint64_t{100000}));
    c.option("mode", *mode, "all-pairs or consecutive");
    c.body = [=] {
        const DistanceMode m = resolve_mode(*mode);
        const auto sieve = make_sieve(std::max(nth_prime_bound(*primes + 1), isqrt(*m_max) + 1));
        Csv csv({"m", "count", "relative_frequency", "c2m_over_c2", "excess"});
        for (const DistanceRow& r : distance_histogram(*primes, *m_max, *sieve, m)) {
            const double predicted = c2m_ratio(r.m, *sieve);
            csv.row(r.m, r.count, r.relative_frequency, predicted, predicted / r.relative_frequency - 1.0);
        }
        return csv;
    };
}

// ---------------------------------------------------------------- weights

void add_weights_eval(Command& c) {
    auto text = std::make_shared<std::string>("0,2,6");
    auto weight = std::make_shared<std::string>("multidim:D=100");
    auto n_min = std::make_shared<std::uint64_t>(1000000);
    auto n_max = std::make_shared<std::uint64_t>(1000100);
    c.option("pattern", *text, "offsets \"0,2,6\" or @file");
    c.option("weight", *weight, "uniform, hard:D=, smooth:D=,k= or multidim:D=,k=");
    c.option("n-min", *n_min, "first n")->check(CLI::PositiveNumber);
    c.option("n-max", *n_max, "last n");
    c.body = [=] {
        const Pattern j = resolve_pattern(*text);
        *text = j.to_string();
        const WeightSpec spec = WeightSpec::parse(*weight);
        *weight = spec.to_string();
        require(*n_min <= *n_max, "n-min must not exceed n-max");
        require(*n_max - *n_min < 10000000, "at most 10^7 values of n per run");
        const auto sieve = make_sieve(isqrt(*n_max + j.diameter()) + 1);
        Csv csv({"n", "rho"});
        for (std::uint64_t n = *n_min; n <= *n_max; ++n) csv.row(n, weight_value(n, j, spec, *sieve));
        return csv;
    };
}

void add_weights_average(Command& c) {
    auto text = std::make_shared<std::string>("0,2,6");
    auto weight = std::make_shared<std::string>("multidim:D=1000,k=3");
    auto n = std::make_shared<std::uint64_t>(100000);
    c.option("pattern", *text, "offsets \"0,2,6\" or @file");
    c.option("weight", *weight, "uniform, hard:D=, smooth:D=,k= or multidim:D=,k=");
    c.option("N", *n, "average over n in [N, 2N]")->check(CLI::PositiveNumber);
    c.body = [=] {
        const Pattern j = resolve_pattern(*text);
        *text = j.to_string();
        const WeightSpec spec = WeightSpec::parse(*weight);
        *weight = spec.to_string();
        const auto sieve = make_sieve(2 * *n + j.diameter());
        const WeightReport report = average_report(j, spec, *n, *sieve);
        Csv csv({"offset", "ratio"});
        for (std::size_t i = 0; i < j.size(); ++i) csv.row(j.offsets()[i], report.ratios[i]);
        csv.comment("sum=" + fmt(report.average));
        return csv;
    };
}

void add_weights_plot_data(Command& c) {
    auto n_min = std::make_shared<std::uint64_t>(1000001);
    auto n_max = std::make_shared<std::uint64_t>(1000599);
    auto d = std::make_shared<std::uint64_t>(100);
    auto k = std::make_shared<unsigned>(1);
    c.option("n-min", *n_min, "first n (only odd n are listed)")->check(CLI::PositiveNumber);
    c.option("n-max", *n_max, "last n");
    c.option("D", *d, "divisor cutoff")->check(CLI::Range(std::uint64_t{2}, std::uint64_t{1} << 40));
    c.option("k", *k, "smoothing exponent")->check(CLI::Range(0u, 64u));
    c.body = [=] {
        require(*n_min <= *n_max, "n-min must not exceed n-max");
        require(*n_max - *n_min < 10000000, "at most 10^7 values of n per run");
        const auto sieve = make_sieve(isqrt(*n_max) + 1);
        Csv csv({"n", "delta_rough", "delta0", "delta_k"});
        for (std::uint64_t n = *n_min | 1; n <= *n_max; n += 2)
            csv.row(n, static_cast<std::uint64_t>(delta_rough(n, *d, *sieve)), delta0(n, *d, *sieve),
                    delta_k(n, *d, *k, *sieve));
        return csv;
    };
}

// ---------------------------------------------------------------- Mellin

void add_mellin_transform(Command& c) {
    auto family = std::make_shared<std::string>("power:alpha=2");
    auto s = std::make_shared<std::vector<double>>(std::vector<double>{1.5, 2, 3});
    c.option("family", *family, "power:alpha=<a> or uniform:X=<b>");
    c.option("s", *s, "comma-separated values of s")->delimiter(',');
    c.body = [=] {
        const ModelDensity density = ModelDensity::parse(*family);
        *family = density.to_string();
        *s = sorted_unique(*s);
        for (double v : *s) require(v > density.abscissa(), "s = " + fmt(v) + " is at or below the abscissa");
        Csv csv({"s", "mellin", "mellin_log_weighted"});
        for (double v : *s) csv.row(v, mellin(density, v), mellin_log_weighted(density, v));
        return csv;
    };
}

void add_mellin_factor_check(Command& c) {
    auto family = std::make_shared<std::string>("power:alpha=2");
    auto r = std::make_shared<unsigned>(2);
    auto s = std::make_shared<double>(1.5);
    c.option("family", *family, "power:alpha=<a> or uniform:X=<b>");
    c.option("r", *r, "number of factors")->check(CLI::Range(1u, 3u));
    c.option("s", *s, "real s above the abscissa");
    c.body = [=] {
        const ModelDensity density = ModelDensity::parse(*family);
        *family = density.to_string();
        const double m = mellin(density, *s);
        const double nested = rho_r_mellin(density, *r, *s);
        double factorial = 1.0, power = 1.0;
        for (unsigned i = 1; i <= *r; ++i) {
            factorial *= i;
            power *= m;
        }
        Csv csv({"r", "s", "rho_r_mellin", "mellin_power_over_factorial", "residual"});
        csv.row(*r, *s, nested, power / factorial, std::abs(factorial * nested - power));
        return csv;
    };
}

void add_zeta_near_one(Command& c) {
    auto s = std::make_shared<std::vector<double>>(std::vector<double>{1.001, 1.01, 1.1, 2});
    c.option("s", *s, "comma-separated values in (1, 2]")->delimiter(',');
    c.body = [=] {
        *s = sorted_unique(*s);
        for (double v : *s) require(v > 1.0 && v <= 2.0, "s must lie in (1, 2], got " + fmt(v));
        Csv csv({"s", "zeta_minus_pole", "minus_gamma"});
        for (double v : *s) {
            const double z = zeta_near_one(v);
            csv.row(v, z, z - kEulerGamma);
        }
        return csv;
    };
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"primelab: sieve experiments emitting CSV", "primelab"};
    app.require_subcommand(1);
    app.set_version_flag("--version", PRIMELAB_VERSION);
    std::string out_path;
    app.add_option("--out", out_path, "write CSV to this file instead of standard output");

    std::vector<std::unique_ptr<Command>> commands;
    auto add = [&](CLI::App* parent, const std::string& name, const std::string& help,
                   void (*setup)(Command&)) {
        auto cmd = std::make_unique<Command>();
        cmd->app = parent->add_subcommand(name, help);
        cmd->source = parent == &app ? name : parent->get_name() + " " + name;
        cmd->app->add_option("--out", out_path, "write CSV to this file instead of standard output");
        setup(*cmd);
        commands.push_back(std::move(cmd));
    };
    auto group = [&](const std::string& name, const std::string& help) {
        CLI::App* g = app.add_subcommand(name, help);
        g->require_subcommand(1);
        return g;
    };

    add(&app, "pi-table", "pi(x) and Li(x) at powers of ten", add_pi_table);
    add(&app, "residue-profile", "prime counts per residue class", add_residue_profile);
    add(&app, "bv-average", "max deviation over residues and its running average", add_bv_average);
    add(&app, "mertens", "prod_{p <= sqrt x}(1 - 1/p) against 2e^-gamma / ln x", add_mertens);
    add(&app, "gamma", "harmonic sum minus ln N", add_gamma);
    add(&app, "zeta", "zeta partial sums and Euler products", add_zeta);
    add(&app, "coprime-count", "integers coprime to a prime set, by Moebius inversion", add_coprime_count);
    add(&app, "crt", "combine two congruences", add_crt);
    add(&app, "dirichlet-l", "partial sums of a Dirichlet L-series", add_dirichlet_l);
    CLI::App* tuple = group("tuple", "admissible tuples");
    add(tuple, "check", "admissibility, size and diameter of a pattern", add_tuple_check);
    add(tuple, "first-primes", "the first l primes above l", add_tuple_first_primes);
    add(&app, "singular-series", "truncated singular series with tail bound", add_singular_series);
    add(&app, "c2m", "C_2m / C_2 for m = 1..m-max", add_c2m);
    add(&app, "pattern-count", "number of n <= x with n + J all prime", add_pattern_count);
    add(&app, "hl-compare", "pattern counts against the Hardy-Littlewood prediction", add_hl_compare);
    add(&app, "gap-histogram", "prime distance frequencies against C_2m / C_2", add_gap_histogram);
    CLI::App* weights = group("weights", "sieve weights");
    add(weights, "eval", "rho(n) over a range of n", add_weights_eval);
    add(weights, "average", "weighted share of primes at each offset", add_weights_average);
    add(weights, "plot-data", "rough indicator against truncated divisor sums", add_weights_plot_data);
    CLI::App* mellin_group = group("mellin", "Mellin transforms of model densities");
    add(mellin_group, "transform", "Mellin transform and its log-weighted variant", add_mellin_transform);
    add(mellin_group, "factor-check", "nested r-factor integral against M^r / r!", add_mellin_factor_check);
    add(&app, "zeta-near-one", "zeta(s) - 1/(s - 1) near the pole", add_zeta_near_one);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::CallForVersion& e) {
        out << PRIMELAB_VERSION << '\n';
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        CLI::App* failing = &app;
        while (!failing->get_subcommands().empty()) failing = failing->get_subcommands().front();
        err << failing->help();
        return 2;
    }

    Command* chosen = nullptr;
    for (const auto& cmd : commands)
        if (cmd->app->parsed()) chosen = cmd.get();
    if (chosen == nullptr) {
        err << "error: no subcommand given\n" << app.help();
        return 2;
    }

    try {
        const Csv csv = chosen->body();
        const std::string flags = chosen->canonical_flags();
        if (out_path.empty()) {
            csv.write(out, chosen->source, flags);
        } else {
            std::ofstream file(out_path, std::ios::binary);
            if (!file) throw std::invalid_argument("cannot open output file " + out_path);
            csv.write(file, chosen->source, flags);
            if (!file.flush()) throw std::runtime_error("failed writing " + out_path);
        }
        return 0;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::out_of_range& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::bad_alloc&) {
        err << "error: out of memory\n";
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace primelab::cli

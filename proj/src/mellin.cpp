#include "primelab/mellin.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "primelab/quadrature.hpp"

namespace primelab {

namespace {

double parse_double(std::string_view text, std::string_view what) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (text.empty() || ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v))
        throw std::invalid_argument("invalid " + std::string(what) + " '" + std::string(text) + "'");
    return v;
}

std::string format_g(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

void require_convergent(const ModelDensity& density, double s) {
    if (!std::isfinite(s) || !(s > density.abscissa()))
        throw std::invalid_argument("s = " + format_g(s) + " is not above the abscissa of convergence " +
                                    format_g(density.abscissa()) + " of " + density.to_string());
}

quad::Options top_level() { return {1e-14, kMellinRelTol, 48, 64}; }

// Nested integrals cost (evaluations per level)^r, so they run looser: the
// outer level at kNestedRelTol and the inner levels at ten times that. Inner
// errors enter the outer integrand smoothly and are averaged, not amplified.
quad::Options outer_level() { return {1e-14, kNestedRelTol, 48, 16}; }
quad::Options nested_level() { return {1e-13, 10 * kNestedRelTol, 40, 8}; }

// int_a^inf x^{-s} rho(x) h(x) dx for a >= 1. The power family uses the
// exponential substitution with the exact decay rate; the uniform family is
// integrated over t = ln x on [ln a, ln X].
template <class H>
double tail_integral(const ModelDensity& density, double s, double a, H&& h, const quad::Options& opt) {
    if (density.family() == ModelDensity::Family::power) {
        const double alpha = density.parameter();
        const double rate = s + alpha - 1.0;
        auto f = [&](double x) { return std::pow(x, -(s + alpha)) * h(x); };
        return quad::simpson_to_infinity(f, a, rate, opt);
    }
    const double upper = std::log(density.parameter());
    const double lower = std::log(a);
    if (lower >= upper) return 0.0;
    auto f = [&](double t) { return std::exp((1.0 - s) * t) * h(std::exp(t)); };
    return quad::simpson(f, lower, upper, opt);
}

double nested(const ModelDensity& density, double s, unsigned depth, double a, const quad::Options& opt) {
    if (depth == 0) return 1.0;
    if (depth == 1) return tail_integral(density, s, a, [](double) { return 1.0; }, opt);
    const quad::Options inner = nested_level();
    return tail_integral(density, s, a,
                         [&](double x) { return nested(density, s, depth - 1, x, inner); }, opt);
}

}  // namespace

ModelDensity ModelDensity::power(double alpha) {
    if (!std::isfinite(alpha) || alpha < 0.0)
        throw std::invalid_argument("power density needs alpha >= 0, got " + format_g(alpha));
    return {Family::power, alpha};
}

ModelDensity ModelDensity::uniform(double upper) {
    if (!std::isfinite(upper) || !(upper > 1.0))
        throw std::invalid_argument("uniform density needs X > 1, got " + format_g(upper));
    return {Family::uniform, upper};
}

ModelDensity ModelDensity::parse(std::string_view text) {
    if (text.rfind("power:alpha=", 0) == 0) return power(parse_double(text.substr(12), "alpha"));
    if (text.rfind("uniform:X=", 0) == 0) return uniform(parse_double(text.substr(10), "X"));
    throw std::invalid_argument("unknown density '" + std::string(text) +
                                "'; expected power:alpha=<a> or uniform:X=<b>");
}

double ModelDensity::operator()(double x) const {
    if (x < 1.0) return 0.0;
    if (family_ == Family::power) return std::pow(x, -parameter_);
    return x <= parameter_ ? 1.0 : 0.0;
}

double ModelDensity::abscissa() const {
    if (family_ == Family::power) return 1.0 - parameter_;
    return -std::numeric_limits<double>::infinity();
}

std::string ModelDensity::to_string() const {
    return (family_ == Family::power ? "power:alpha=" : "uniform:X=") + format_g(parameter_);
}

double mellin(const ModelDensity& density, double s) {
    require_convergent(density, s);
    return nested(density, s, 1, 1.0, top_level());
}

double mellin_log_weighted(const ModelDensity& density, double s) {
    require_convergent(density, s);
    return tail_integral(density, s, 1.0, [](double x) { return std::log(x); }, top_level());
}

double rho_r_mellin(const ModelDensity& density, unsigned r, double s) {
    if (r < 1 || r > 3) throw std::invalid_argument("r must be 1, 2 or 3, got " + std::to_string(r));
    require_convergent(density, s);
    return nested(density, s, r, 1.0, r == 1 ? top_level() : outer_level());
}

double rho_all_mellin(const ModelDensity& density, double s, unsigned r_max) {
    if (r_max == 0) return 1.0;
    const double m = mellin(density, s);
    double term = 1.0;
    double sum = 1.0;
    for (unsigned r = 1; r <= r_max; ++r) {
        term *= m / static_cast<double>(r);
        sum += term;
    }
    return sum;
}

double single_factor_mellin(double rho_all_value) {
    if (!(rho_all_value > 0.0))
        throw std::invalid_argument("all-factor transform must be positive, got " + format_g(rho_all_value));
    return std::log(rho_all_value);
}

double zeta_near_one(double s) {
    if (!(s > 1.0) || s > 2.0)
        throw std::invalid_argument("zeta_near_one needs 1 < s <= 2, got " + format_g(s));
    constexpr int kN = 64;
    const double n = kN;
    double sum = 0.0;
    for (int i = kN - 1; i >= 1; --i) sum += std::pow(static_cast<double>(i), -s);
    // int_N^inf x^{-s} dx - 1/(s-1) = expm1(-(s-1) ln N) / (s-1), without cancellation.
    const double h = s - 1.0;
    sum += std::expm1(-h * std::log(n)) / h;
    const double ns = std::pow(n, -s);
    sum += 0.5 * ns;
    sum += s / 12.0 * ns / n;
    sum -= s * (s + 1.0) * (s + 2.0) / 720.0 * ns / (n * n * n);
    return sum;
}

}  // namespace primelab

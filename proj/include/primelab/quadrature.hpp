// quadrature.hpp
// Adaptive Simpson integration with Richardson correction, plus a helper for
// [a, inf) via x = a * exp(tau / rate), tau = u / (1 - u).

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace primelab::quad {

struct Options {
    double abs_tol = 1e-12;
    double rel_tol = 1e-10;
    int max_depth = 48;
    int panels = 64;  // initial uniform sweep
};

namespace detail {

template <class F>
double simpson_step(F& f, double a, double b, double fa, double fm, double fb, double whole,
                    double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

// Integral of f over [a, b]. The tolerance is max(abs_tol, rel_tol * |coarse
// estimate|), where the coarse estimate comes from an initial multi-panel
// Simpson sweep so that a peaked integrand is not mistaken for a negligible one.
template <class F>
double simpson(F&& f, double a, double b, const Options& opt = {}) {
    if (a == b) return 0.0;
    if (opt.panels < 1 || opt.panels > 4096) throw std::invalid_argument("panel count must lie in [1, 4096]");
    const int kPanels = opt.panels;
    const double h = (b - a) / kPanels;
    std::vector<double> fx(kPanels + 1);
    std::vector<double> fmid(kPanels);
    double coarse = 0.0;
    for (int i = 0; i <= kPanels; ++i) fx[i] = f(a + h * i);
    for (int i = 0; i < kPanels; ++i) {
        fmid[i] = f(a + h * (i + 0.5));
        coarse += h / 6.0 * (fx[i] + 4.0 * fmid[i] + fx[i + 1]);
    }
    const double tol = std::max(opt.abs_tol, opt.rel_tol * std::abs(coarse));
    double total = 0.0;
    for (int i = 0; i < kPanels; ++i) {
        const double lo = a + h * i;
        const double hi = (i + 1 == kPanels) ? b : a + h * (i + 1);
        const double whole = h / 6.0 * (fx[i] + 4.0 * fmid[i] + fx[i + 1]);
        total += detail::simpson_step(f, lo, hi, fx[i], fmid[i], fx[i + 1], whole,
                                      tol / kPanels, opt.max_depth);
    }
    return total;
}

// Integral of f over [a, inf) for a > 0, mapped onto u in [0, 1) through
// x = a * exp(tau / rate), tau = u / (1 - u). If f(x) * x decays like
// x^(-rate), the transformed integrand behaves like exp(-tau) and vanishes
// smoothly at u = 1.
template <class F>
double simpson_to_infinity(F&& f, double a, double rate = 1.0, const Options& opt = {}) {
    if (!(a > 0.0)) throw std::invalid_argument("lower limit must be positive");
    if (!(rate > 0.0)) throw std::invalid_argument("decay rate must be positive");
    auto g = [&](double u) {
        if (u >= 1.0) return 0.0;
        const double v = 1.0 - u;
        const double tau = u / v;
        if (tau > 700.0) return 0.0;
        const double t = tau / rate;
        if (t > 700.0) return 0.0;
        const double x = a * std::exp(t);
        const double r = f(x) * x / (rate * v * v);
        return std::isfinite(r) ? r : 0.0;
    };
    return simpson(g, 0.0, 1.0, opt);
}

}  // namespace primelab::quad

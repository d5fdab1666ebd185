#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include "mzo/detail/math.hpp"
#include "mzo/errors.hpp"

namespace mzo {

struct QuadConfig {
    double rel_tol = 1e-8;    // target relative accuracy
    double abs_tol = 1e-12;   // absolute floor for near-zero integrals
    double tail_eps = 1e-10;  // truncation threshold for exponential tails
    int max_panels = 20000;   // subdivision cap before ConvergenceError

    void validate() const {
        if (!(rel_tol > 0.0) || !(abs_tol > 0.0) || !(tail_eps > 0.0) || max_panels < 1)
            throw ConfigError("QuadConfig: tolerances must be > 0 and max_panels >= 1");
    }
};

template <class T>
struct QuadResult {
    T value{};
    double err_estimate = 0.0;
    int panels_used = 0;
};

namespace detail {

// Gauss-7 / Kronrod-15 pair on [-1, 1].
inline constexpr double gk_nodes[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr double gk_wk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double gk_wg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

inline double mag(double x) { return std::abs(x); }
inline double mag(const cplx& z) { return std::abs(z); }

template <class T, class F>
void gk15(F&& f, double a, double b, T& val, double& err) {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    T fc = f(mid);
    T k15 = gk_wk[7] * fc;
    T g7 = gk_wg[3] * fc;
    for (int i = 0; i < 7; ++i) {
        const double dx = half * gk_nodes[i];
        T fsum = f(mid - dx) + f(mid + dx);
        k15 += gk_wk[i] * fsum;
        if (i % 2 == 1) g7 += gk_wg[i / 2] * fsum;
    }
    val = half * k15;
    err = std::abs(half) * mag(k15 - g7);
}

template <class T>
struct Panel {
    double a, b;
    T val;
    double err;
};

// Adaptive worst-panel-first refinement over [a, b]. Deterministic: the
// refinement order depends only on the computed panel errors.
template <class T, class F>
QuadResult<T> integrate_adaptive(F&& f, double a, double b, const QuadConfig& cfg,
                                 double max_init_width,
                                 const std::vector<double>& breakpoints = {}) {
    cfg.validate();
    if (!(b > a)) return {};

    std::vector<double> edges{a, b};
    for (double x : breakpoints)
        if (x > a && x < b) edges.push_back(x);
    std::sort(edges.begin(), edges.end());

    std::vector<Panel<T>> panels;
    for (std::size_t k = 0; k + 1 < edges.size(); ++k) {
        const double lo = edges[k], hi = edges[k + 1];
        int n = 1;
        if (max_init_width > 0.0)
            n = std::max(1, static_cast<int>(std::ceil((hi - lo) / max_init_width)));
        n = std::min(n, cfg.max_panels);
        for (int i = 0; i < n; ++i) {
            Panel<T> p;
            p.a = lo + (hi - lo) * static_cast<double>(i) / n;
            p.b = (i + 1 == n) ? hi : lo + (hi - lo) * static_cast<double>(i + 1) / n;
            gk15(f, p.a, p.b, p.val, p.err);
            panels.push_back(p);
        }
    }

    auto worse = [](const Panel<T>& x, const Panel<T>& y) {
        if (x.err != y.err) return x.err < y.err;
        return x.a > y.a;
    };
    std::make_heap(panels.begin(), panels.end(), worse);

    T total{};
    double total_err = 0.0;
    for (const auto& p : panels) {
        total += p.val;
        total_err += p.err;
    }

    while (total_err > std::max(cfg.rel_tol * mag(total), cfg.abs_tol)) {
        if (static_cast<int>(panels.size()) + 1 > cfg.max_panels)
            throw ConvergenceError("integrate: error goal not met within max_panels");
        std::pop_heap(panels.begin(), panels.end(), worse);
        Panel<T> p = panels.back();
        panels.pop_back();
        total -= p.val;
        total_err -= p.err;

        const double mid = 0.5 * (p.a + p.b);
        Panel<T> left{p.a, mid, T{}, 0.0}, right{mid, p.b, T{}, 0.0};
        gk15(f, left.a, left.b, left.val, left.err);
        gk15(f, right.a, right.b, right.val, right.err);
        total += left.val + right.val;
        total_err += left.err + right.err;
        panels.push_back(left);
        std::push_heap(panels.begin(), panels.end(), worse);
        panels.push_back(right);
        std::push_heap(panels.begin(), panels.end(), worse);
    }

    // Re-sum in spatial order for a reproducible, well-conditioned total.
    std::sort(panels.begin(), panels.end(),
              [](const Panel<T>& x, const Panel<T>& y) { return x.a < y.a; });
    QuadResult<T> out;
    for (const auto& p : panels) {
        out.value += p.val;
        out.err_estimate += p.err;
    }
    out.panels_used = static_cast<int>(panels.size());
    return out;
}

}  // namespace detail

// Integral of f over [0, inf) for integrands bounded by C*exp(-decay_rate*s)
// at large s and oscillating no faster than osc_freq. The domain is truncated
// at s_max = ln(1/tail_eps)/decay_rate and pre-split so no panel spans more
// than a quarter oscillation before adaptive refinement takes over.
template <class T = double, class F>
QuadResult<T> integrate_semi_infinite(F&& f, double decay_rate, double osc_freq,
                                      const QuadConfig& cfg = {}) {
    if (!(decay_rate > 0.0)) throw ConfigError("integrate_semi_infinite: decay_rate must be > 0");
    const double s_max = std::log(1.0 / cfg.tail_eps) / decay_rate;
    const double scale = std::max(osc_freq, decay_rate);
    const double max_width = detail::pi / (4.0 * scale);
    return detail::integrate_adaptive<T>(f, 0.0, s_max, cfg, max_width);
}

// Integral of f over the whole real line for integrands dominated by a
// Lorentzian envelope of the given center and halfwidth. Maps the line to a
// finite interval via nu = center + halfwidth * tan(u); Gauss-Kronrod nodes
// never touch the endpoints, so f is only evaluated at finite nu.
template <class T = double, class F>
QuadResult<T> integrate_line(F&& f, double center, double halfwidth, const QuadConfig& cfg = {},
                             const std::vector<double>& breakpoints = {}) {
    if (!(halfwidth > 0.0)) throw ConfigError("integrate_line: halfwidth must be > 0");
    auto mapped = [&](double u) -> T {
        const double t = std::tan(u);
        const double nu = center + halfwidth * t;
        return f(nu) * (halfwidth * (1.0 + t * t));
    };
    std::vector<double> ubreaks;
    ubreaks.reserve(breakpoints.size());
    for (double nu : breakpoints) ubreaks.push_back(std::atan((nu - center) / halfwidth));
    const double half_pi = 0.5 * detail::pi;
    return detail::integrate_adaptive<T>(mapped, -half_pi, half_pi, cfg, detail::pi / 32.0,
                                         ubreaks);
}

// Integral of f over the finite interval [a, b].
template <class T = double, class F>
QuadResult<T> integrate_interval(F&& f, double a, double b, double osc_freq,
                                 const QuadConfig& cfg = {}) {
    const double max_width = osc_freq > 0.0 ? detail::pi / (4.0 * osc_freq) : 0.0;
    return detail::integrate_adaptive<T>(f, a, b, cfg, max_width);
}

}  // namespace mzo

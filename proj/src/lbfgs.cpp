#include "bfim/lbfgs.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

namespace bfim {

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        s += a[i] * b[i];
    return s;
}

double inf_norm(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v)
        m = std::max(m, std::abs(x));
    return m;
}

struct Evaluator {
    const Objective& objective;
    LbfgsResult& result;

    double operator()(const std::vector<double>& x, std::vector<double>& grad) {
        double f = objective(x, grad);
        ++result.function_evaluations;
        if (std::isfinite(f) && f < result.best_f) {
            result.best_f = f;
            result.best_x = x;
        }
        return f;
    }
};

// Minimizer of the cubic interpolant through (a, fa, ga) and (b, fb, gb),
// clipped into the interior of [min(a,b), max(a,b)]. Falls back to bisection
// when the interpolant is degenerate.
double cubic_interpolate(double a, double fa, double ga, double b, double fb, double gb) {
    const double lo = std::min(a, b), hi = std::max(a, b);
    const double d1 = ga + gb - 3.0 * (fa - fb) / (a - b);
    const double disc = d1 * d1 - ga * gb;
    double candidate = 0.5 * (a + b);
    if (disc >= 0.0) {
        const double d2 = std::copysign(std::sqrt(disc), b - a);
        const double t = (gb + d2 - d1) / (gb - ga + 2.0 * d2);
        if (std::isfinite(t))
            candidate = b - (b - a) * t;
    }
    const double margin = 0.1 * (hi - lo);
    if (!(candidate > lo + margin && candidate < hi - margin))
        candidate = 0.5 * (lo + hi);
    return candidate;
}

struct LineSearchOutcome {
    double alpha = 0.0;
    double f = 0.0;
    bool ok = false;
};

// Strong Wolfe search along d from (x0, f0, g0). On success x, f, g hold the
// accepted point.
LineSearchOutcome wolfe_line_search(Evaluator& eval, const LbfgsOptions& opt,
                                    const std::vector<double>& x0, double f0,
                                    const std::vector<double>& d, double dphi0,
                                    double alpha_init, std::vector<double>& x,
                                    std::vector<double>& g) {
    const std::size_t n = x0.size();
    auto phi = [&](double alpha, double& dphi) {
        for (std::size_t i = 0; i < n; ++i)
            x[i] = x0[i] + alpha * d[i];
        const double f = eval(x, g);
        dphi = dot(g, d);
        return f;
    };

    LineSearchOutcome out;
    int steps = 0;

    auto zoom = [&](double a_lo, double f_lo, double g_lo, double a_hi, double f_hi,
                    double g_hi) {
        while (steps++ < opt.max_line_search_steps) {
            const double a = cubic_interpolate(a_lo, f_lo, g_lo, a_hi, f_hi, g_hi);
            double dphi_a = 0.0;
            const double f_a = phi(a, dphi_a);
            if (!std::isfinite(f_a) || f_a > f0 + opt.c1 * a * dphi0 || f_a >= f_lo) {
                a_hi = a; f_hi = f_a; g_hi = dphi_a;
            } else {
                if (std::abs(dphi_a) <= -opt.c2 * dphi0) {
                    out = {a, f_a, true};
                    return;
                }
                if (dphi_a * (a_hi - a_lo) >= 0.0) {
                    a_hi = a_lo; f_hi = f_lo; g_hi = g_lo;
                }
                a_lo = a; f_lo = f_a; g_lo = dphi_a;
            }
            if (std::abs(a_hi - a_lo) < 1e-16)
                return;
        }
    };

    double a_prev = 0.0, f_prev = f0, g_prev = dphi0;
    double a_cur = alpha_init;
    const double a_max = 1e6;
    bool first = true;
    while (steps++ < opt.max_line_search_steps) {
        double dphi_cur = 0.0;
        const double f_cur = phi(a_cur, dphi_cur);
        if (!std::isfinite(f_cur) || f_cur > f0 + opt.c1 * a_cur * dphi0 ||
            (!first && f_cur >= f_prev)) {
            zoom(a_prev, f_prev, g_prev, a_cur, f_cur, dphi_cur);
            return out;
        }
        if (std::abs(dphi_cur) <= -opt.c2 * dphi0) {
            out = {a_cur, f_cur, true};
            return out;
        }
        if (dphi_cur >= 0.0) {
            zoom(a_cur, f_cur, dphi_cur, a_prev, f_prev, g_prev);
            return out;
        }
        a_prev = a_cur; f_prev = f_cur; g_prev = dphi_cur;
        a_cur = std::min(2.0 * a_cur, a_max);
        first = false;
        if (a_cur >= a_max)
            break;
    }
    return out;
}

} // namespace

LbfgsResult lbfgs_minimize(const Objective& objective, std::vector<double> x0,
                           const LbfgsOptions& options) {
    const std::size_t n = x0.size();
    LbfgsResult result;
    result.best_f = std::numeric_limits<double>::infinity();
    Evaluator eval{objective, result};

    std::vector<double> x = std::move(x0);
    std::vector<double> g(n), x_new(n), g_new(n);
    double f = eval(x, g);
    result.trace.emplace_back(0, f);

    std::deque<std::vector<double>> s_hist, y_hist;
    std::deque<double> rho_hist;
    std::vector<double> d(n), alpha_buf;

    for (int iter = 0; iter < options.max_iterations; ++iter) {
        if (inf_norm(g) <= options.gradient_tolerance) {
            result.converged = true;
            break;
        }

        // Two-loop recursion for d = -H g.
        d = g;
        const std::size_t m = s_hist.size();
        alpha_buf.assign(m, 0.0);
        for (std::size_t k = m; k-- > 0;) {
            alpha_buf[k] = rho_hist[k] * dot(s_hist[k], d);
            for (std::size_t i = 0; i < n; ++i)
                d[i] -= alpha_buf[k] * y_hist[k][i];
        }
        if (m > 0) {
            const double gamma =
                dot(s_hist[m - 1], y_hist[m - 1]) / dot(y_hist[m - 1], y_hist[m - 1]);
            for (auto& di : d)
                di *= gamma;
        }
        for (std::size_t k = 0; k < m; ++k) {
            const double beta = rho_hist[k] * dot(y_hist[k], d);
            for (std::size_t i = 0; i < n; ++i)
                d[i] += (alpha_buf[k] - beta) * s_hist[k][i];
        }
        for (auto& di : d)
            di = -di;

        double dphi0 = dot(g, d);
        if (dphi0 >= 0.0) {
            // Stale curvature pairs produced a non-descent direction; restart
            // from steepest descent.
            s_hist.clear(); y_hist.clear(); rho_hist.clear();
            for (std::size_t i = 0; i < n; ++i)
                d[i] = -g[i];
            dphi0 = dot(g, d);
            if (dphi0 >= 0.0) {
                result.converged = true;  // gradient numerically zero
                break;
            }
        }

        const double g2 = std::sqrt(dot(g, g));
        const double alpha_init = (iter == 0 && m == 0) ? std::min(1.0, 1.0 / g2) : 1.0;
        const auto ls =
            wolfe_line_search(eval, options, x, f, d, dphi0, alpha_init, x_new, g_new);
        if (!ls.ok) {
            result.line_search_failed = true;
            result.iterations = iter;
            return result;
        }

        std::vector<double> s(n), y(n);
        for (std::size_t i = 0; i < n; ++i) {
            s[i] = x_new[i] - x[i];
            y[i] = g_new[i] - g[i];
        }
        const double sy = dot(s, y);
        if (sy > 1e-14 * std::sqrt(dot(s, s)) * std::sqrt(dot(y, y))) {
            s_hist.push_back(std::move(s));
            y_hist.push_back(std::move(y));
            rho_hist.push_back(1.0 / sy);
            if (static_cast<int>(s_hist.size()) > options.history) {
                s_hist.pop_front();
                y_hist.pop_front();
                rho_hist.pop_front();
            }
        }

        const double f_change = f - ls.f;
        x.swap(x_new);
        g.swap(g_new);
        f = ls.f;
        result.iterations = iter + 1;
        result.trace.emplace_back(iter + 1, f);
        if (std::abs(f_change) <= options.energy_change_tolerance) {
            result.converged = true;
            break;
        }
    }
    return result;
}

} // namespace bfim

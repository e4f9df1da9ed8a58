#pragma once

#include <functional>
#include <utility>
#include <vector>

namespace bfim {

// Evaluates f(x) and writes the gradient into `grad` (same length as x).
using Objective = std::function<double(const std::vector<double>& x, std::vector<double>& grad)>;

struct LbfgsOptions {
    int max_iterations = 1000;
    int history = 10;
    double gradient_tolerance = 1e-8;        // stop when ||grad||_inf falls below
    double energy_change_tolerance = 1e-12;  // stop when an accepted step changes f by less
    double c1 = 1e-4;                        // sufficient-decrease constant
    double c2 = 0.9;                         // curvature constant
    int max_line_search_steps = 60;
};

struct LbfgsResult {
    std::vector<double> best_x;
    double best_f = 0.0;
    int iterations = 0;
    bool converged = false;
    bool line_search_failed = false;
    long function_evaluations = 0;
    // (iteration, f) at iteration 0 and every accepted step; non-increasing.
    std::vector<std::pair<int, double>> trace;
};

// Limited-memory quasi-Newton descent with a strong-Wolfe line search.
// Always returns the best point seen across every evaluation, including
// rejected line-search trials; a failed line search ends the run with
// converged = false instead of throwing.
LbfgsResult lbfgs_minimize(const Objective& objective, std::vector<double> x0,
                           const LbfgsOptions& options = {});

} // namespace bfim

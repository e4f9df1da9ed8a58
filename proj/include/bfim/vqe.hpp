#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "bfim/circuit.hpp"
#include "bfim/model.hpp"

namespace bfim {

struct VqeConfig {
    int max_iters_first = 7000;        // first sweep point (random init)
    int max_iters_subsequent = 1000;   // warm-started points
    double init_low = -0.3 * 3.14159265358979323846;
    double init_high = 0.3 * 3.14159265358979323846;
    std::uint64_t seed = 0;
    double gradient_tolerance = 1e-8;
    double energy_change_tolerance = 1e-12;

    void validate() const;
};

struct VqeResult {
    std::vector<double> optimal_params;
    double energy = 0.0;
    std::vector<std::pair<int, double>> iteration_trace;  // (iteration, energy)
    bool converged = false;
    int iterations = 0;
    double h_value = 0.0;   // the swept coefficient this result belongs to
};

// <psi(theta)|H|psi(theta)> on the exact (noiseless) statevector.
double cost(const std::vector<double>& params, const IsingChainSpec& spec,
            const HvaConfig& ansatz);

// Parameter-shift gradient: per gate occurrence g with angle sign_g * theta,
// the contribution to d cost / d theta is sign_g * (C(+pi/2) - C(-pi/2)) / 2,
// shifting only that occurrence. Exact for gates generated by involutions.
std::vector<double> gradient(const std::vector<double>& params, const IsingChainSpec& spec,
                             const HvaConfig& ansatz);

// Same values as gradient() from one forward state, a backward gate sweep and
// one observable application; this is what minimize() evaluates internally.
std::vector<double> gradient_adjoint(const std::vector<double>& params,
                                     const IsingChainSpec& spec, const HvaConfig& ansatz);

// Quasi-Newton minimization of cost() from the given start. max_iters picks
// which cap from the config applies. A line-search failure returns the best
// point seen with converged = false; it never throws for that reason.
VqeResult minimize(const IsingChainSpec& spec, const HvaConfig& ansatz,
                   const VqeConfig& config, const std::vector<double>& initial_params,
                   int max_iters);

// Uniform draw from [init_low, init_high) per parameter, seeded.
std::vector<double> random_initial_params(const HvaConfig& ansatz, int L,
                                          const VqeConfig& config);

struct SweepPoint {
    double h_l = 0.0;
    double h_r = 0.0;
    VqeResult result;
};

struct SweepResult {
    std::vector<SweepPoint> points;   // in iteration order
    IsingChainSpec spec_template;
    HvaConfig ansatz;
    VqeConfig config;
    bool tie_boundary = true;         // h_r = -h_l while sweeping, else fixed h_r
    bool decreasing = true;
};

// Warm-started sweep over boundary-field values h (applied to h_l; h_r is
// -h when tie_boundary, else the template's h_r). h_values must be strictly
// monotone; the first point starts from a seeded random init with
// max_iters_first, every later point starts from the previous optimum with
// max_iters_subsequent. A non-converged point is recorded and the sweep
// continues from its best parameters.
SweepResult sweep(const IsingChainSpec& spec_template, const std::vector<double>& h_values,
                  const HvaConfig& ansatz, const VqeConfig& config, bool tie_boundary);

} // namespace bfim

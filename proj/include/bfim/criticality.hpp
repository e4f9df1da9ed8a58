#pragma once

#include <string>
#include <utility>
#include <vector>

#include "bfim/spline.hpp"

namespace bfim {

// Swept ground-state energies E(h) with enough metadata to label outputs.
struct EnergyCurve {
    std::vector<double> h;
    std::vector<double> energy;
    int L = 0;
    double h_x = 0.0;
    double J = 1.0;
    std::string source;   // "vqe", "free-fermion", "dense-ed", or synthetic

    void validate() const;   // strictly increasing h, >= 4 points
};

struct DerivativeCurve {
    std::vector<double> h;
    std::vector<double> value;
    int order = 1;
};

// Analytic spline derivative sampled on a dense grid (density_multiplier x
// the input density) restricted to the interior 90% of the h range, keeping
// endpoint artifacts away from argmin detection.
DerivativeCurve spline_derivative(const EnergyCurve& curve, int order,
                                  int density_multiplier = 50,
                                  CubicSpline::Boundary boundary = CubicSpline::Boundary::not_a_knot);

struct ArgminResult {
    double h_star = 0.0;
    double second_derivative = 0.0;
    bool boundary_minimum = false;   // argmin landed on the scan edge; untrusted
};

// Location of the minimum of d2E/dh2: dense-grid scan, then golden-section
// refinement to 1e-6 in h.
ArgminResult find_second_derivative_minimum(const EnergyCurve& curve,
                                            int density_multiplier = 50);

struct ScalingSeries {
    std::vector<int> L;
    std::vector<double> argmin_h;
    double h_c_reference = 0.0;   // sqrt(1 - h_x) for the swept model
};

struct ScalingReport {
    std::vector<int> L;
    std::vector<double> inv_L;
    std::vector<double> argmin_h;
    double h_c_reference = 0.0;
    double fit_slope = 0.0;        // linear fit of argmin_h against 1/L
    double fit_intercept = 0.0;
    double deviation = 0.0;        // |intercept - h_c_reference|
    int fit_min_L = 0;
    bool non_monotone_small_L = false;   // |h*(L) - h_c| grew between consecutive sizes
};

// Linear extrapolation of the argmin series in 1/L using sizes >= fit_min_L
// (all sizes when fewer than two qualify).
ScalingReport finite_size_scaling(const ScalingSeries& series, int fit_min_L = 40);

struct GapFitResult {
    enum class Model { exponential, polynomial };
    double exp_c = 0.0;          // gap ~ prefactor * exp(-c L)
    double exp_prefactor = 0.0;
    double exp_residual = 0.0;   // sum of squared log-residuals
    double poly_p = 0.0;         // gap ~ prefactor / L^p
    double poly_prefactor = 0.0;
    double poly_residual = 0.0;
    Model preferred = Model::exponential;
};

// Least-squares fits of log(gap) against L and against log(L); the smaller
// residual picks the model. Gaps must be positive, >= 4 sizes.
GapFitResult classify_gap_decay(const std::vector<std::pair<int, double>>& gaps);

struct RmsReport {
    double rms = 0.0;
    std::size_t n = 0;
};

// sqrt((1/n) sum (x_i - y_i)^2); lengths must match and be nonzero.
RmsReport rms(const std::vector<double>& x, const std::vector<double>& y);

// Elementwise |(ref - est)/ref|; a zero reference yields a NaN marker at that
// position.
std::vector<double> relative_error_series(const std::vector<double>& estimates,
                                          const std::vector<double>& references);

} // namespace bfim

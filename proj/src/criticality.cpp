#include "bfim/criticality.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace bfim {

namespace {

struct InteriorGrid {
    double lo = 0.0, hi = 0.0;
    std::size_t points = 0;

    double at(std::size_t i) const {
        return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
    }
};

InteriorGrid interior_grid(const EnergyCurve& curve, int density_multiplier) {
    const double span = curve.h.back() - curve.h.front();
    InteriorGrid g;
    g.lo = curve.h.front() + 0.05 * span;
    g.hi = curve.h.back() - 0.05 * span;
    g.points = static_cast<std::size_t>(density_multiplier) * (curve.h.size() - 1) + 1;
    return g;
}

struct LinearFit {
    double slope = 0.0, intercept = 0.0, residual = 0.0;
};

LinearFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
    const auto n = static_cast<double>(x.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    LinearFit f;
    const double denom = n * sxx - sx * sx;
    f.slope = (n * sxy - sx * sy) / denom;
    f.intercept = (sy - f.slope * sx) / n;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - (f.slope * x[i] + f.intercept);
        f.residual += r * r;
    }
    return f;
}

} // namespace

void EnergyCurve::validate() const {
    if (h.size() != energy.size())
        throw std::invalid_argument("energy curve needs matching h and energy lengths");
    if (h.size() < 4)
        throw std::invalid_argument("energy curve needs at least 4 points for spline work");
    for (std::size_t i = 1; i < h.size(); ++i)
        if (!(h[i] > h[i - 1]))
            throw std::invalid_argument("energy curve h values must be strictly increasing");
}

DerivativeCurve spline_derivative(const EnergyCurve& curve, int order, int density_multiplier,
                                  CubicSpline::Boundary boundary) {
    curve.validate();
    if (order != 1 && order != 2)
        throw std::invalid_argument("derivative order must be 1 or 2");
    if (density_multiplier < 1)
        throw std::invalid_argument("density multiplier must be positive");
    const CubicSpline spline(curve.h, curve.energy, boundary);
    const InteriorGrid grid = interior_grid(curve, density_multiplier);
    DerivativeCurve out;
    out.order = order;
    out.h.reserve(grid.points);
    out.value.reserve(grid.points);
    for (std::size_t i = 0; i < grid.points; ++i) {
        const double x = grid.at(i);
        out.h.push_back(x);
        out.value.push_back(order == 1 ? spline.derivative(x) : spline.second_derivative(x));
    }
    return out;
}

ArgminResult find_second_derivative_minimum(const EnergyCurve& curve, int density_multiplier) {
    curve.validate();
    const CubicSpline spline(curve.h, curve.energy);
    const InteriorGrid grid = interior_grid(curve, density_multiplier);

    std::size_t best = 0;
    double best_val = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < grid.points; ++i) {
        const double v = spline.second_derivative(grid.at(i));
        if (v < best_val) {
            best_val = v;
            best = i;
        }
    }

    ArgminResult r;
    r.boundary_minimum = best == 0 || best == grid.points - 1;

    // Golden-section refinement between the neighbors of the best grid point.
    double a = grid.at(best == 0 ? 0 : best - 1);
    double b = grid.at(best + 1 >= grid.points ? grid.points - 1 : best + 1);
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = spline.second_derivative(c);
    double fd = spline.second_derivative(d);
    while (b - a > 1e-6) {
        if (fc < fd) {
            b = d; d = c; fd = fc;
            c = b - inv_phi * (b - a);
            fc = spline.second_derivative(c);
        } else {
            a = c; c = d; fc = fd;
            d = a + inv_phi * (b - a);
            fd = spline.second_derivative(d);
        }
    }
    r.h_star = 0.5 * (a + b);
    r.second_derivative = spline.second_derivative(r.h_star);
    return r;
}

ScalingReport finite_size_scaling(const ScalingSeries& series, int fit_min_L) {
    if (series.L.size() != series.argmin_h.size())
        throw std::invalid_argument("scaling series needs matching L and argmin lengths");
    if (series.L.size() < 3)
        throw std::invalid_argument("finite-size scaling needs at least 3 sizes");
    for (std::size_t i = 0; i < series.L.size(); ++i)
        for (std::size_t j = i + 1; j < series.L.size(); ++j)
            if (series.L[i] == series.L[j])
                throw std::invalid_argument("scaling series L values must be distinct");

    ScalingReport rep;
    rep.L = series.L;
    rep.argmin_h = series.argmin_h;
    rep.h_c_reference = series.h_c_reference;
    rep.fit_min_L = fit_min_L;
    for (int l : series.L)
        rep.inv_L.push_back(1.0 / static_cast<double>(l));

    std::vector<double> fit_x, fit_y;
    for (std::size_t i = 0; i < series.L.size(); ++i) {
        if (series.L[i] >= fit_min_L) {
            fit_x.push_back(rep.inv_L[i]);
            fit_y.push_back(series.argmin_h[i]);
        }
    }
    if (fit_x.size() < 2) {
        fit_x = rep.inv_L;
        fit_y = series.argmin_h;
    }
    const LinearFit fit = least_squares(fit_x, fit_y);
    rep.fit_slope = fit.slope;
    rep.fit_intercept = fit.intercept;
    rep.deviation = std::abs(fit.intercept - series.h_c_reference);

    // Sizes ascending for the precursor-direction check.
    std::vector<std::size_t> idx(series.L.size());
    for (std::size_t i = 0; i < idx.size(); ++i)
        idx[i] = i;
    std::sort(idx.begin(), idx.end(),
              [&](std::size_t a, std::size_t b) { return series.L[a] < series.L[b]; });
    for (std::size_t k = 1; k < idx.size(); ++k) {
        const double prev = std::abs(series.argmin_h[idx[k - 1]] - series.h_c_reference);
        const double cur = std::abs(series.argmin_h[idx[k]] - series.h_c_reference);
        if (cur > prev)
            rep.non_monotone_small_L = true;
    }
    return rep;
}

GapFitResult classify_gap_decay(const std::vector<std::pair<int, double>>& gaps) {
    if (gaps.size() < 4)
        throw std::invalid_argument("gap classification needs at least 4 sizes");
    std::vector<double> ls, log_ls, log_gaps;
    for (const auto& [l, gap] : gaps) {
        if (!(gap > 0.0))
            throw std::invalid_argument("gap classification needs positive gaps");
        ls.push_back(static_cast<double>(l));
        log_ls.push_back(std::log(static_cast<double>(l)));
        log_gaps.push_back(std::log(gap));
    }
    const LinearFit exp_fit = least_squares(ls, log_gaps);
    const LinearFit poly_fit = least_squares(log_ls, log_gaps);

    GapFitResult r;
    r.exp_c = -exp_fit.slope;
    r.exp_prefactor = std::exp(exp_fit.intercept);
    r.exp_residual = exp_fit.residual;
    r.poly_p = -poly_fit.slope;
    r.poly_prefactor = std::exp(poly_fit.intercept);
    r.poly_residual = poly_fit.residual;
    r.preferred = exp_fit.residual <= poly_fit.residual ? GapFitResult::Model::exponential
                                                        : GapFitResult::Model::polynomial;
    return r;
}

RmsReport rms(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size())
        throw std::invalid_argument("rms needs series of equal length");
    if (x.empty())
        throw std::invalid_argument("rms needs at least one point");
    double acc = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
        acc += (x[i] - y[i]) * (x[i] - y[i]);
    return RmsReport{std::sqrt(acc / static_cast<double>(x.size())), x.size()};
}

std::vector<double> relative_error_series(const std::vector<double>& estimates,
                                          const std::vector<double>& references) {
    if (estimates.size() != references.size())
        throw std::invalid_argument("relative error needs series of equal length");
    std::vector<double> out(estimates.size());
    for (std::size_t i = 0; i < estimates.size(); ++i)
        out[i] = references[i] == 0.0
                     ? std::numeric_limits<double>::quiet_NaN()
                     : std::abs((references[i] - estimates[i]) / references[i]);
    return out;
}

} // namespace bfim

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "bfim/criticality.hpp"
#include "bfim/free_fermion.hpp"

using namespace bfim;

namespace {

EnergyCurve synthetic_curve(double lo, double hi, int n, double (*f)(double)) {
    EnergyCurve c;
    c.h.resize(n);
    c.energy.resize(n);
    for (int i = 0; i < n; ++i) {
        c.h[i] = lo + (hi - lo) * i / (n - 1);
        c.energy[i] = f(c.h[i]);
    }
    c.source = "synthetic";
    return c;
}

EnergyCurve free_fermion_curve(int L, double lo, double hi, int n) {
    EnergyCurve c;
    c.L = L;
    c.h_x = 0.5;
    c.source = "free-fermion";
    c.h.resize(n);
    c.energy.resize(n);
    for (int i = 0; i < n; ++i) {
        const double h = lo + (hi - lo) * i / (n - 1);
        c.h[i] = h;
        c.energy[i] = sector_ground_energy({L, 1.0, 0.5, h, -h});
    }
    return c;
}

} // namespace

TEST_CASE("spline derivative of a quadratic energy curve") {
    const auto curve = synthetic_curve(0.0, 1.0, 20, [](double h) { return h * h; });
    const auto d1 = spline_derivative(curve, 1);
    const auto d2 = spline_derivative(curve, 2);
    REQUIRE(d1.h.size() == d1.value.size());
    CHECK(d1.order == 1);
    CHECK(d2.order == 2);
    for (std::size_t i = 0; i < d1.h.size(); ++i)
        CHECK(std::abs(d1.value[i] - 2.0 * d1.h[i]) < 1e-6);
    for (double v : d2.value)
        CHECK(std::abs(v - 2.0) < 1e-6);
}

TEST_CASE("derivative grid covers the interior 90% at the requested density") {
    const auto curve = synthetic_curve(0.0, 1.0, 11, [](double h) { return h; });
    const auto d = spline_derivative(curve, 1, 10);
    CHECK(d.h.size() == 101);
    CHECK(d.h.front() == doctest::Approx(0.05).epsilon(1e-12));
    CHECK(d.h.back() == doctest::Approx(0.95).epsilon(1e-12));
}

TEST_CASE("argmin of the second derivative of a quartic well") {
    // E = (h - 0.6)^4 has d2E/dh2 = 12 (h - 0.6)^2, minimized at 0.6.
    const auto curve =
        synthetic_curve(0.1, 1.1, 41, [](double h) { return std::pow(h - 0.6, 4); });
    const auto result = find_second_derivative_minimum(curve);
    CHECK(!result.boundary_minimum);
    CHECK(std::abs(result.h_star - 0.6) < 5e-3);
    CHECK(std::abs(result.second_derivative) < 0.02);
}

TEST_CASE("argmin refinement is stable against the scan density") {
    const auto curve = free_fermion_curve(20, 0.4, 1.0, 61);
    const auto coarse = find_second_derivative_minimum(curve, 10);
    const auto fine = find_second_derivative_minimum(curve, 200);
    CHECK(!coarse.boundary_minimum);
    CHECK(std::abs(coarse.h_star - fine.h_star) < 2e-3);
    CHECK(coarse.second_derivative < 0.0);
}

TEST_CASE("free-fermion argmin approaches sqrt(1 - h_x) as L grows") {
    const double h_c = std::sqrt(0.5);
    const auto small = find_second_derivative_minimum(free_fermion_curve(12, 0.4, 1.0, 121));
    const auto large = find_second_derivative_minimum(free_fermion_curve(120, 0.4, 1.0, 121));
    CHECK(std::abs(large.h_star - h_c) < std::abs(small.h_star - h_c));
    CHECK(std::abs(large.h_star - h_c) < 0.02);
}

TEST_CASE("monotone edge landings are flagged") {
    const auto curve = synthetic_curve(0.0, 1.0, 30, [](double h) { return std::exp(h); });
    const auto result = find_second_derivative_minimum(curve);
    CHECK(result.boundary_minimum);
}

TEST_CASE("finite-size scaling of an exactly linear series") {
    ScalingSeries series;
    series.h_c_reference = 0.70710678;
    for (int L : {40, 60, 100, 200})
        series.L.push_back(L);
    for (int L : series.L)
        series.argmin_h.push_back(0.7 + 2.0 / L);
    const auto report = finite_size_scaling(series);
    CHECK(report.fit_intercept == doctest::Approx(0.7).epsilon(1e-10));
    CHECK(report.fit_slope == doctest::Approx(2.0).epsilon(1e-8));
    CHECK(report.deviation == doctest::Approx(std::abs(0.7 - 0.70710678)).epsilon(1e-8));
    CHECK(report.fit_min_L == 40);
    CHECK(!report.non_monotone_small_L);
}

TEST_CASE("small sizes are excluded from the fit but kept in the report") {
    ScalingSeries series;
    series.h_c_reference = 0.5;
    series.L = {4, 8, 40, 80, 200};
    // Small sizes deliberately off the asymptote; fit should ignore them.
    series.argmin_h = {0.9, 0.2, 0.5 + 1.0 / 40, 0.5 + 1.0 / 80, 0.5 + 1.0 / 200};
    const auto report = finite_size_scaling(series);
    CHECK(report.L.size() == 5);
    CHECK(report.fit_intercept == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(report.fit_slope == doctest::Approx(1.0).epsilon(1e-7));
}

TEST_CASE("non-monotone approach at small L is detected") {
    ScalingSeries receding;
    receding.h_c_reference = 0.7;
    receding.L = {4, 8, 12, 20};
    receding.argmin_h = {0.705, 0.78, 0.72, 0.71};   // |error| grows 4 -> 8
    CHECK(finite_size_scaling(receding, 4).non_monotone_small_L);

    ScalingSeries monotone = receding;
    monotone.argmin_h = {0.78, 0.75, 0.72, 0.71};
    CHECK(!finite_size_scaling(monotone, 4).non_monotone_small_L);
}

TEST_CASE("scaling requires at least three sizes and matching lengths") {
    ScalingSeries bad;
    bad.L = {4, 8};
    bad.argmin_h = {0.7, 0.7};
    CHECK_THROWS_AS(finite_size_scaling(bad), std::invalid_argument);
    bad.L = {4, 8, 12};
    CHECK_THROWS_AS(finite_size_scaling(bad), std::invalid_argument);
}

TEST_CASE("synthetic exponential gaps are classified with the right rate") {
    std::vector<std::pair<int, double>> gaps;
    for (int L : {8, 12, 16, 20, 30, 40})
        gaps.emplace_back(L, 3.0 * std::exp(-0.5 * L));
    const auto fit = classify_gap_decay(gaps);
    CHECK(fit.preferred == GapFitResult::Model::exponential);
    CHECK(fit.exp_c == doctest::Approx(0.5).epsilon(1e-8));
    CHECK(fit.exp_prefactor == doctest::Approx(3.0).epsilon(1e-8));
    CHECK(fit.exp_residual < 1e-16);
    CHECK(fit.poly_residual > 1e-3);
}

TEST_CASE("synthetic polynomial gaps are classified with the right power") {
    std::vector<std::pair<int, double>> gaps;
    for (int L : {8, 12, 16, 20, 30, 40})
        gaps.emplace_back(L, 7.0 / (static_cast<double>(L) * L));
    const auto fit = classify_gap_decay(gaps);
    CHECK(fit.preferred == GapFitResult::Model::polynomial);
    CHECK(fit.poly_p == doctest::Approx(2.0).epsilon(1e-8));
    CHECK(fit.poly_prefactor == doctest::Approx(7.0).epsilon(1e-8));
    CHECK(fit.poly_residual < 1e-16);
}

TEST_CASE("gap classification is invariant under an overall scale") {
    std::vector<std::pair<int, double>> gaps, scaled;
    for (int L : {8, 12, 16, 20, 30}) {
        const double g = std::exp(-0.31 * L) * (1.0 + 0.01 * std::sin(L));
        gaps.emplace_back(L, g);
        scaled.emplace_back(L, 7.0 * g);
    }
    const auto a = classify_gap_decay(gaps);
    const auto b = classify_gap_decay(scaled);
    CHECK(a.preferred == b.preferred);
    CHECK(a.exp_c == doctest::Approx(b.exp_c).epsilon(1e-12));
    CHECK(b.exp_prefactor == doctest::Approx(7.0 * a.exp_prefactor).epsilon(1e-12));
    CHECK(a.exp_residual == doctest::Approx(b.exp_residual).epsilon(1e-9));
}

TEST_CASE("gap classification rejects bad input") {
    CHECK_THROWS_AS(classify_gap_decay({{8, 0.1}, {12, 0.05}, {16, 0.02}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(classify_gap_decay({{8, 0.1}, {12, -0.05}, {16, 0.02}, {20, 0.01}}),
                    std::invalid_argument);
}

TEST_CASE("rms of the worked pair is the exact square root") {
    const auto report = rms({0.0, 0.0}, {3.0, 4.0});
    CHECK(report.rms == std::sqrt(12.5));
    CHECK(report.n == 2);
    CHECK(rms({1.0, 2.0, 3.0}, {1.0, 2.0, 3.0}).rms == 0.0);
}

TEST_CASE("rms is symmetric and obeys the triangle inequality") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> d(-5.0, 5.0);
    for (int rep = 0; rep < 10; ++rep) {
        std::vector<double> a(6), b(6), c(6);
        for (int i = 0; i < 6; ++i) {
            a[i] = d(rng);
            b[i] = d(rng);
            c[i] = d(rng);
        }
        CHECK(rms(a, b).rms == rms(b, a).rms);
        CHECK(rms(a, c).rms <= rms(a, b).rms + rms(b, c).rms + 1e-12);
    }
}

TEST_CASE("rms rejects mismatched or empty input") {
    CHECK_THROWS_AS(rms({1.0}, {1.0, 2.0}), std::invalid_argument);
    CHECK_THROWS_AS(rms({}, {}), std::invalid_argument);
}

TEST_CASE("relative errors with NaN markers at zero references") {
    const auto errors = relative_error_series({1.0001, 2.0, 0.5}, {1.0, 0.0, 0.4});
    REQUIRE(errors.size() == 3);
    CHECK(errors[0] == doctest::Approx(1e-4).epsilon(1e-9));
    CHECK(std::isnan(errors[1]));
    CHECK(errors[2] == doctest::Approx(0.25).epsilon(1e-12));
    CHECK_THROWS_AS(relative_error_series({1.0}, {1.0, 2.0}), std::invalid_argument);
}

TEST_CASE("energy curve validation") {
    EnergyCurve c;
    c.h = {0.1, 0.2, 0.3};
    c.energy = {1.0, 2.0, 3.0};
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);   // too few points
    c.h = {0.1, 0.2, 0.2, 0.4};
    c.energy = {1.0, 2.0, 3.0, 4.0};
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);   // not strictly increasing
    c.h = {0.1, 0.2, 0.3, 0.4};
    CHECK_NOTHROW(c.validate());
}

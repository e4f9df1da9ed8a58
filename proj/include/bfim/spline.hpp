#pragma once

#include <vector>

namespace bfim {

// Piecewise-cubic interpolant through (x, y) knots with analytic first and
// second derivatives. not_a_knot reproduces cubic polynomials exactly and is
// the default everywhere derivatives feed physics; natural (zero curvature at
// the ends) is kept as an option.
class CubicSpline {
public:
    enum class Boundary { not_a_knot, natural };

    CubicSpline(std::vector<double> x, std::vector<double> y,
                Boundary boundary = Boundary::not_a_knot);

    double value(double x) const;
    double derivative(double x) const;
    double second_derivative(double x) const;

    double x_front() const { return x_.front(); }
    double x_back() const { return x_.back(); }

private:
    std::size_t interval(double x) const;
    std::vector<double> x_, y_, m_;   // m_ holds knot second derivatives
};

} // namespace bfim

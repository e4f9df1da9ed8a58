#include "bfim/spline.hpp"

#include <algorithm>
#include <stdexcept>

#include <Eigen/Dense>

namespace bfim {

CubicSpline::CubicSpline(std::vector<double> x, std::vector<double> y, Boundary boundary)
    : x_(std::move(x)), y_(std::move(y)) {
    const std::size_t n = x_.size();
    if (n != y_.size())
        throw std::invalid_argument("spline needs matching x and y lengths");
    if (n < 4)
        throw std::invalid_argument("spline needs at least 4 points, got " + std::to_string(n));
    for (std::size_t i = 1; i < n; ++i)
        if (!(x_[i] > x_[i - 1]))
            throw std::invalid_argument("spline x values must be strictly increasing");

    auto h = [this](std::size_t i) { return x_[i + 1] - x_[i]; };

    // Solve for the knot second derivatives M: continuity of S' at interior
    // knots gives a tridiagonal core; the boundary condition contributes the
    // first and last rows.
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(static_cast<long>(n), static_cast<long>(n));
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(static_cast<long>(n));
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const long r = static_cast<long>(i);
        a(r, r - 1) = h(i - 1);
        a(r, r) = 2.0 * (h(i - 1) + h(i));
        a(r, r + 1) = h(i);
        rhs(r) = 6.0 * ((y_[i + 1] - y_[i]) / h(i) - (y_[i] - y_[i - 1]) / h(i - 1));
    }
    const long last = static_cast<long>(n) - 1;
    if (boundary == Boundary::natural) {
        a(0, 0) = 1.0;
        a(last, last) = 1.0;
    } else {
        // Third derivative continuous across the second and second-to-last
        // knots: (M1 - M0)/h0 = (M2 - M1)/h1 and its mirror.
        a(0, 0) = h(1);
        a(0, 1) = -(h(0) + h(1));
        a(0, 2) = h(0);
        a(last, last - 2) = h(n - 2);
        a(last, last - 1) = -(h(n - 3) + h(n - 2));
        a(last, last) = h(n - 3);
    }
    Eigen::VectorXd m = a.partialPivLu().solve(rhs);
    m_.assign(m.data(), m.data() + n);
}

std::size_t CubicSpline::interval(double x) const {
    const auto it = std::upper_bound(x_.begin(), x_.end(), x);
    const auto idx = static_cast<std::size_t>(std::distance(x_.begin(), it));
    if (idx == 0)
        return 0;
    return std::min(idx - 1, x_.size() - 2);
}

double CubicSpline::value(double x) const {
    const std::size_t i = interval(x);
    const double h = x_[i + 1] - x_[i];
    const double t0 = x - x_[i], t1 = x_[i + 1] - x;
    return m_[i] * t1 * t1 * t1 / (6.0 * h) + m_[i + 1] * t0 * t0 * t0 / (6.0 * h) +
           (y_[i] / h - m_[i] * h / 6.0) * t1 + (y_[i + 1] / h - m_[i + 1] * h / 6.0) * t0;
}

double CubicSpline::derivative(double x) const {
    const std::size_t i = interval(x);
    const double h = x_[i + 1] - x_[i];
    const double t0 = x - x_[i], t1 = x_[i + 1] - x;
    return -m_[i] * t1 * t1 / (2.0 * h) + m_[i + 1] * t0 * t0 / (2.0 * h) -
           (y_[i] / h - m_[i] * h / 6.0) + (y_[i + 1] / h - m_[i + 1] * h / 6.0);
}

double CubicSpline::second_derivative(double x) const {
    const std::size_t i = interval(x);
    const double h = x_[i + 1] - x_[i];
    return (m_[i] * (x_[i + 1] - x) + m_[i + 1] * (x - x_[i])) / h;
}

} // namespace bfim

#include "bfim/free_fermion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>
#include <lapacke.h>

#include "bfim/errors.hpp"

namespace bfim {

namespace {

// Bond couplings t_i on links (i, i+1), i = 0..L: end bonds carry the
// boundary-field magnitudes, bulk bonds the exchange coupling.
std::vector<double> bond_couplings(const EffectiveChainSpec& spec) {
    std::vector<double> t(static_cast<std::size_t>(spec.L) + 1, -spec.J);
    t.front() = -spec.hl_abs;
    t.back() = -spec.hr_abs;
    return t;
}

// A+B is upper bidiagonal: diagonal -2g on bulk sites, superdiagonal 2 t_i.
void bidiagonal_of(const EffectiveChainSpec& spec, std::vector<double>& d,
                   std::vector<double>& e) {
    const int n = spec.size();
    const auto t = bond_couplings(spec);
    d.assign(n, 0.0);
    for (int i = 1; i <= spec.L; ++i)
        d[i] = -2.0 * spec.g;
    e.resize(n - 1);
    for (int i = 0; i + 1 < n; ++i)
        e[i] = 2.0 * t[i];
}

std::vector<double> bidiagonal_singular_values(std::vector<double> d, std::vector<double> e) {
    const auto n = static_cast<lapack_int>(d.size());
    double dummy = 0.0;
    const lapack_int info = LAPACKE_dbdsqr(LAPACK_COL_MAJOR, 'U', n, 0, 0, 0, d.data(),
                                           e.data(), &dummy, 1, &dummy, 1, &dummy, 1);
    if (info != 0)
        throw numerical_integrity_error("bidiagonal SVD failed to converge, info = " +
                                        std::to_string(info));
    std::sort(d.begin(), d.end());
    return d;
}

SpectrumResult spectrum_from_epsilons(std::vector<double> eps) {
    SpectrumResult r;
    r.epsilons = std::move(eps);
    double sum = 0.0;
    for (double e : r.epsilons)
        sum += e;
    r.E_gs = -0.5 * sum;
    r.sector_ground_energy = r.epsilons.size() > 1
                                 ? r.E_gs + r.epsilons[1]
                                 : std::numeric_limits<double>::quiet_NaN();
    r.constant_shift = 0.0;
    return r;
}

void check_zero_mode(const SpectrumResult& r) {
    const double scale = r.epsilons.empty() ? 1.0 : std::max(1.0, r.epsilons.back());
    if (r.epsilons.empty() || r.epsilons.front() > 1e-8 * scale)
        throw numerical_integrity_error(
            "expected a decoupled zero mode; smallest epsilon = " +
            std::to_string(r.epsilons.empty() ? -1.0 : r.epsilons.front()));
}

} // namespace

void SectorLabel::validate() const {
    if ((s_first != 1 && s_first != -1) || (s_last != 1 && s_last != -1))
        throw std::invalid_argument("sector label components must be +1 or -1");
}

SectorLabel antiparallel_sector() {
    return SectorLabel{1, -1};
}

void EffectiveChainSpec::validate() const {
    if (L < 2)
        throw std::invalid_argument("effective chain needs L >= 2");
    if (J < 0.0 || hl_abs < 0.0 || hr_abs < 0.0)
        throw std::invalid_argument("couplings must be non-negative magnitudes");
}

EffectiveChainSpec effective_chain(const IsingChainSpec& spec) {
    spec.validate();
    return EffectiveChainSpec{spec.L, spec.J, spec.h_x, std::abs(spec.h_l), std::abs(spec.h_r)};
}

FermionMatrices build_AB(const EffectiveChainSpec& spec) {
    spec.validate();
    const int n = spec.size();
    FermionMatrices m;
    m.n = n;
    m.A.assign(static_cast<std::size_t>(n) * n, 0.0);
    m.B.assign(static_cast<std::size_t>(n) * n, 0.0);
    auto at = [n](std::vector<double>& v, int i, int j) -> double& {
        return v[static_cast<std::size_t>(i) * n + j];
    };
    for (int i = 1; i <= spec.L; ++i)
        at(m.A, i, i) = -2.0 * spec.g;
    const auto t = bond_couplings(spec);
    for (int i = 0; i + 1 < n; ++i) {
        at(m.A, i, i + 1) = t[i];
        at(m.A, i + 1, i) = t[i];
        at(m.B, i, i + 1) = t[i];
        at(m.B, i + 1, i) = -t[i];
    }
    return m;
}

SpectrumResult single_particle_spectrum(const FermionMatrices& matrices) {
    const int n = matrices.n;
    std::vector<double> d(n), e(n - 1);
    for (int i = 0; i < n; ++i) {
        d[i] = matrices.a(i, i);
        for (int j = 0; j < n; ++j) {
            if (j == i || j == i + 1)
                continue;
            if (std::abs(matrices.a(i, j) + matrices.b(i, j)) > 1e-14)
                throw std::invalid_argument("A+B must be upper bidiagonal for this route");
        }
    }
    for (int i = 0; i + 1 < n; ++i)
        e[i] = matrices.a(i, i + 1) + matrices.b(i, i + 1);
    return spectrum_from_epsilons(bidiagonal_singular_values(std::move(d), std::move(e)));
}

SpectrumResult single_particle_spectrum_squared(const FermionMatrices& matrices) {
    const int n = matrices.n;
    Eigen::MatrixXd apb(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            apb(i, j) = matrices.a(i, j) + matrices.b(i, j);
    const Eigen::MatrixXd squared = apb * apb.transpose();

    double norm1 = 0.0;
    for (int j = 0; j < n; ++j)
        norm1 = std::max(norm1, squared.col(j).cwiseAbs().sum());
    norm1 = std::max(norm1, 1.0);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(squared, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
        throw numerical_integrity_error("symmetric eigensolver failed on (A+B)(A+B)^T");

    std::vector<double> eps(n);
    for (int i = 0; i < n; ++i) {
        double lambda = solver.eigenvalues()[i];
        if (lambda < -1e-8 * norm1)
            throw numerical_integrity_error(
                "eigenvalue " + std::to_string(lambda) +
                " of a positive-semidefinite matrix is far below zero");
        eps[i] = std::sqrt(std::max(lambda, 0.0));
    }
    std::sort(eps.begin(), eps.end());
    return spectrum_from_epsilons(std::move(eps));
}

namespace {

SpectrumResult sector_spectrum(const IsingChainSpec& spec) {
    spec.validate();
    if (!(spec.h_l * spec.h_r < 0.0))
        throw unsupported_sector_error(
            "boundary fields must be anti-parallel (h_l * h_r < 0); got h_l = " +
            std::to_string(spec.h_l) + ", h_r = " + std::to_string(spec.h_r));
    std::vector<double> d, e;
    bidiagonal_of(effective_chain(spec), d, e);
    SpectrumResult r = spectrum_from_epsilons(bidiagonal_singular_values(std::move(d), std::move(e)));
    check_zero_mode(r);
    return r;
}

} // namespace

double sector_ground_energy(const IsingChainSpec& spec) {
    const SpectrumResult r = sector_spectrum(spec);
    return r.sector_ground_energy + r.constant_shift;
}

double sector_gap(const IsingChainSpec& spec) {
    const SpectrumResult r = sector_spectrum(spec);
    return r.epsilons[2] - r.epsilons[1];
}

} // namespace bfim

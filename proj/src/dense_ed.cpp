#include "bfim/dense_ed.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

#include <lapacke.h>

#include "bfim/errors.hpp"

namespace bfim {

namespace {

constexpr int kDenseCap = 14;

// Eigenvalues ascending; if with_vectors, `a` holds eigenvectors on exit
// (column-major, column j = eigenvector j).
void symmetric_eigensolve(std::vector<double>& a, std::vector<double>& w, lapack_int n,
                          bool with_vectors) {
    const lapack_int info = LAPACKE_dsyev(LAPACK_COL_MAJOR, with_vectors ? 'V' : 'N', 'U', n,
                                          a.data(), n, w.data());
    if (info != 0)
        throw numerical_integrity_error("dsyev failed, info = " + std::to_string(info));
}

DenseEdResult solve_dense(std::vector<double>& matrix, std::size_t dim, bool with_ground_vector) {
    std::vector<double> w(dim);
    symmetric_eigensolve(matrix, w, static_cast<lapack_int>(dim), with_ground_vector);
    DenseEdResult r;
    r.eigenvalues = std::move(w);
    if (with_ground_vector)
        r.ground_state.assign(matrix.begin(), matrix.begin() + static_cast<long>(dim));
    return r;
}

std::vector<double> hamiltonian_matrix(const IsingChainSpec& spec) {
    spec.validate();
    if (spec.L > kDenseCap)
        throw capacity_error("dense diagonalization capped at L = " +
                             std::to_string(kDenseCap) + ", got " + std::to_string(spec.L));
    const int L = spec.L;
    const std::size_t dim = std::size_t{1} << L;
    std::vector<double> h(dim * dim, 0.0);
    for (std::size_t z = 0; z < dim; ++z) {
        double diag = 0.0;
        for (int i = 1; i < L; ++i) {
            const double zi = (z >> (L - i)) & 1 ? -1.0 : 1.0;
            const double zj = (z >> (L - i - 1)) & 1 ? -1.0 : 1.0;
            diag += -spec.J * zi * zj;
        }
        diag += spec.h_l * (((z >> (L - 1)) & 1) ? -1.0 : 1.0);
        diag += spec.h_r * ((z & 1) ? -1.0 : 1.0);
        h[z * dim + z] = diag;
        for (int i = 1; i <= L; ++i) {
            const std::size_t flipped = z ^ (std::size_t{1} << (L - i));
            h[flipped * dim + z] += -spec.h_x;
        }
    }
    return h;
}

std::vector<double> effective_matrix(const EffectiveChainSpec& spec) {
    spec.validate();
    const int n_sites = spec.size();
    if (n_sites > kDenseCap)
        throw capacity_error("dense effective-chain diagonalization capped at L+2 = " +
                             std::to_string(kDenseCap));
    const std::size_t dim = std::size_t{1} << n_sites;
    std::vector<double> h(dim * dim, 0.0);
    // Effective sites 0..L+1; site s occupies bit (n_sites - 1 - s), so site 0
    // is the most significant bit, matching the shared convention.
    auto mask = [n_sites](int s) { return std::size_t{1} << (n_sites - 1 - s); };
    for (std::size_t z = 0; z < dim; ++z) {
        double diag = 0.0;
        for (int s = 1; s <= spec.L; ++s)
            diag += -spec.g * ((z & mask(s)) ? -1.0 : 1.0);
        h[z * dim + z] = diag;
        for (int s = 0; s + 1 < n_sites; ++s) {
            const double coupling = s == 0 ? spec.hl_abs
                                  : s == spec.L ? spec.hr_abs
                                                : spec.J;
            const std::size_t flipped = z ^ mask(s) ^ mask(s + 1);
            h[flipped * dim + z] += -coupling;
        }
    }
    return h;
}

} // namespace

DenseEdResult dense_ed(const IsingChainSpec& spec, bool with_ground_vector) {
    auto h = hamiltonian_matrix(spec);
    const std::size_t dim = std::size_t{1} << spec.L;
    return solve_dense(h, dim, with_ground_vector);
}

double dense_ground_energy(const IsingChainSpec& spec) {
    return dense_ed(spec, false).eigenvalues.front();
}

DenseEdResult dense_ed_effective(const EffectiveChainSpec& spec, bool with_ground_vector) {
    auto h = effective_matrix(spec);
    const std::size_t dim = std::size_t{1} << spec.size();
    return solve_dense(h, dim, with_ground_vector);
}

std::vector<std::complex<double>> dense_observable_matrix(const Observable& obs) {
    const int L = obs.length();
    if (L > 8)
        throw capacity_error("dense observable matrices capped at 8 sites");
    const std::size_t dim = std::size_t{1} << L;
    std::vector<std::complex<double>> m(dim * dim, 0.0);
    for (std::size_t z = 0; z < dim; ++z)
        m[z * dim + z] += obs.constant_offset();
    const std::complex<double> imag_unit{0.0, 1.0};
    for (const auto& term : obs.terms()) {
        std::size_t flip_mask = 0, sign_mask = 0;
        int y_count = 0;
        for (const auto& [site, p] : term.factors) {
            const std::size_t bit = std::size_t{1} << (L - site);
            switch (p) {
                case Pauli::X: flip_mask |= bit; break;
                case Pauli::Y: flip_mask |= bit; sign_mask |= bit; ++y_count; break;
                case Pauli::Z: sign_mask |= bit; break;
            }
        }
        std::complex<double> y_phase = 1.0;
        for (int k = 0; k < (y_count & 3); ++k)
            y_phase *= imag_unit;
        for (std::size_t z = 0; z < dim; ++z) {
            const double sign = (std::popcount(z & sign_mask) & 1) ? -1.0 : 1.0;
            m[(z ^ flip_mask) * dim + z] += term.coefficient * y_phase * sign;
        }
    }
    return m;
}

} // namespace bfim

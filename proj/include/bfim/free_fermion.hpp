#pragma once

#include <vector>

#include "bfim/model.hpp"

namespace bfim {

// The boundary-field chain maps, after a basis rotation and the addition of
// one extra spin at each end, onto an open chain of L+2 sites (indices
// 0..L+1) whose quadratic fermion form involves only the field magnitudes:
// bulk bonds -J, end bonds -|h_l| and -|h_r|, transverse field g on the bulk
// sites only.
struct EffectiveChainSpec {
    int L = 2;          // original chain length
    double J = 1.0;
    double g = 0.5;     // transverse field
    double hl_abs = 0.0;
    double hr_abs = 0.0;

    void validate() const;
    int size() const { return L + 2; }
};

EffectiveChainSpec effective_chain(const IsingChainSpec& spec);

// Quadratic-form coefficient matrices, row-major (L+2)^2. A symmetric with
// diagonal -2g on bulk sites and the bond couplings on |i-j| = 1; B
// antisymmetric with the same magnitudes.
struct FermionMatrices {
    int n = 0;
    std::vector<double> A;
    std::vector<double> B;

    double a(int i, int j) const { return A[static_cast<std::size_t>(i) * n + j]; }
    double b(int i, int j) const { return B[static_cast<std::size_t>(i) * n + j]; }
};

FermionMatrices build_AB(const EffectiveChainSpec& spec);

// Eigenvalues (s_0, s_{L+1}) of the two commuting boundary operators of the
// effective chain. The four sectors partition its spectrum; anti-parallel
// boundary fields put the physical ground state in (+1, -1).
struct SectorLabel {
    int s_first = 1;
    int s_last = -1;

    void validate() const;   // components must be +1 or -1
};

SectorLabel antiparallel_sector();

// Single-particle energies epsilon_k >= 0 sorted ascending (one exact zero
// mode from the decoupled end Majoranas) and the free-fermion ground energy
// E_gs = -(1/2) sum epsilon_k. sector_ground_energy is E_gs + epsilon_1, the
// lowest level of the anti-parallel sector. constant_shift records the
// additive constant calibrated against dense diagonalization; it is
// identically zero.
struct SpectrumResult {
    std::vector<double> epsilons;
    double E_gs = 0.0;
    double sector_ground_energy = 0.0;
    double constant_shift = 0.0;
};

// Primary route: A+B is upper bidiagonal by construction, so the epsilon_k
// are its singular values; computed by the dqds algorithm (LAPACK dbdsqr with
// no vectors), which keeps high relative accuracy on exponentially small
// values.
SpectrumResult single_particle_spectrum(const FermionMatrices& matrices);

// Cross-check route from the squared problem: symmetric eigendecomposition of
// (A+B)(A+B)^T, non-negative square roots. Eigenvalues below -1e-8 of the
// matrix 1-norm raise numerical_integrity_error; small negatives are clamped
// to zero. Less accurate than the bidiagonal route for tiny epsilon.
SpectrumResult single_particle_spectrum_squared(const FermionMatrices& matrices);

// Ground energy of the original chain for anti-parallel boundary fields
// (h_l * h_r < 0): E_gs + epsilon_1 with the epsilons sorted ascending and
// epsilon_0 the zero mode. Parallel or vanishing boundary fields raise
// unsupported_sector_error.
double sector_ground_energy(const IsingChainSpec& spec);

// Gap to the first excited state in the same sector: epsilon_2 - epsilon_1.
double sector_gap(const IsingChainSpec& spec);

} // namespace bfim

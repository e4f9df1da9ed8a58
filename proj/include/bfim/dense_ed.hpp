#pragma once

#include <complex>
#include <vector>

#include "bfim/free_fermion.hpp"
#include "bfim/model.hpp"
#include "bfim/observable.hpp"

namespace bfim {

// Brute-force reference: explicit 2^L real-symmetric matrix, full
// eigendecomposition. Capped at L = 14 (16384-dimensional).
struct DenseEdResult {
    std::vector<double> eigenvalues;      // ascending
    std::vector<double> ground_state;     // statevector amplitude ordering; empty
                                          // when vectors were not requested
};

DenseEdResult dense_ed(const IsingChainSpec& spec, bool with_ground_vector = true);

// Eigenvalues only; skips the eigenvector work.
double dense_ground_energy(const IsingChainSpec& spec);

// Same machinery on the rotated (L+2)-site effective chain; cap L+2 <= 14.
DenseEdResult dense_ed_effective(const EffectiveChainSpec& spec,
                                 bool with_ground_vector = false);

// Full matrix of an observable in the shared amplitude ordering, row-major
// dim^2. Test oracle; capped at 8 sites.
std::vector<std::complex<double>> dense_observable_matrix(const Observable& obs);

} // namespace bfim

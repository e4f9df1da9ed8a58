#pragma once

#include "bfim/observable.hpp"

namespace bfim {

// Physical parameters of the open transverse-field Ising chain with
// longitudinal fields on the two end sites:
//
//   H = -J sum_i Z_i Z_{i+1} - h_x sum_i X_i + h_l Z_1 + h_r Z_L
struct IsingChainSpec {
    int L = 2;
    double J = 1.0;
    double h_x = 0.5;
    double h_l = 0.0;
    double h_r = 0.0;

    // Throws std::invalid_argument unless L >= 2 and J >= 0.
    void validate() const;

    // True in the regime the phase analysis assumes: 0 < h_x < 1 and
    // anti-parallel boundary fields (h_l * h_r < 0). Specs outside the regime
    // are still constructible, just flagged.
    bool physical_regime() const;
};

Observable build_hamiltonian(const IsingChainSpec& spec);

// Domain-wall counter (L-1)/2 - (1/2) sum_i Z_i Z_{i+1}.
Observable build_kink_operator(int L);

// Single term +1 * Z_i.
Observable build_local_magnetization(int i, int L);

} // namespace bfim

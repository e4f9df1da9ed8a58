#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "bfim/observable.hpp"

namespace bfim {

// Dense 2^L statevector. Basis-index convention: site i (1-based) lives in
// bit (L - i) counted from the least significant bit, so site 1 is the most
// significant bit and basis index 0 is |00...0>. Bit value 0 is the Z = +1
// eigenstate. Every module that touches amplitudes (dense diagonalization,
// sampling) follows this ordering.
class Statevector {
public:
    static constexpr int max_qubits = 24;

    // |00...0> on L qubits. Throws capacity_error for L > max_qubits.
    explicit Statevector(int L);

    // Wraps existing amplitudes (size must be a power of two). Used for
    // loading exact eigenvectors; no normalization is applied.
    static Statevector from_amplitudes(std::vector<std::complex<double>> amplitudes);

    int qubit_count() const { return qubit_count_; }
    std::size_t dimension() const { return amp_.size(); }
    const std::vector<std::complex<double>>& amplitudes() const { return amp_; }
    std::complex<double> amplitude(std::size_t basis_index) const { return amp_.at(basis_index); }
    double norm_sq() const;

    // In-place single/two-site gates; site indices are 1-based.
    // RX(t) = exp(-i t X / 2), RZ(t) = exp(-i t Z / 2), RZZ(t) = exp(-i t ZZ / 2).
    void apply_hadamard(int site);
    void apply_rx(int site, double theta);
    void apply_rz(int site, double theta);
    void apply_rzz(int site_a, int site_b, double theta);

    std::size_t bit_mask(int site) const;

private:
    Statevector() = default;
    int qubit_count_ = 0;
    std::vector<std::complex<double>> amp_;
};

// <bra|P|ket> for one Pauli factor map; bra and ket must share a dimension.
std::complex<double> pauli_bilinear(const Statevector& bra, const Statevector& ket,
                                    const std::map<int, Pauli>& factors);

// <psi|O|psi> summed over terms plus the constant offset. Each term's
// imaginary residue must stay below 1e-10 (Hermitian observable on a single
// state), otherwise numerical_integrity_error.
double expectation(const Statevector& psi, const Observable& obs);

// O|psi> as a raw amplitude vector (generally unnormalized).
std::vector<std::complex<double>> apply_observable(const Statevector& psi, const Observable& obs);

// Finite-shot estimate of <psi|O|psi>. Terms must split into a Z-diagonal
// group and an X-diagonal group (identity terms count as Z-diagonal); the X
// group is measured after a Hadamard layer on every site. Each group receives
// `shots` samples, Z group first, from one mt19937_64 stream seeded with
// `seed`, so results are bit-reproducible.
double sample_expectation(const Statevector& psi, const Observable& obs,
                          long shots, std::uint64_t seed);

} // namespace bfim

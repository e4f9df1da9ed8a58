#include "bfim/statevector.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>
#include <stdexcept>

#include "bfim/errors.hpp"

namespace bfim {

namespace {

constexpr std::complex<double> kImagUnit{0.0, 1.0};

double u64_to_unit_double(std::uint64_t x) {
    // Top 53 bits -> [0, 1). Pinned here instead of uniform_real_distribution,
    // whose output is implementation-defined.
    return static_cast<double>(x >> 11) * 0x1.0p-53;
}

} // namespace

Statevector::Statevector(int L) : qubit_count_(L) {
    if (L < 1)
        throw std::invalid_argument("qubit count must be at least 1, got " + std::to_string(L));
    if (L > max_qubits)
        throw capacity_error("qubit count " + std::to_string(L) + " exceeds cap " +
                             std::to_string(max_qubits));
    amp_.assign(std::size_t{1} << L, {0.0, 0.0});
    amp_[0] = 1.0;
}

Statevector Statevector::from_amplitudes(std::vector<std::complex<double>> amplitudes) {
    if (amplitudes.empty() || !std::has_single_bit(amplitudes.size()))
        throw std::invalid_argument("amplitude count must be a power of two");
    Statevector s;
    s.qubit_count_ = std::countr_zero(amplitudes.size());
    if (s.qubit_count_ > max_qubits)
        throw capacity_error("amplitude vector exceeds the qubit cap");
    s.amp_ = std::move(amplitudes);
    return s;
}

double Statevector::norm_sq() const {
    double n = 0.0;
    for (const auto& a : amp_)
        n += std::norm(a);
    return n;
}

std::size_t Statevector::bit_mask(int site) const {
    if (site < 1 || site > qubit_count_)
        throw std::invalid_argument("site " + std::to_string(site) + " outside [1, " +
                                    std::to_string(qubit_count_) + "]");
    return std::size_t{1} << (qubit_count_ - site);
}

void Statevector::apply_hadamard(int site) {
    const std::size_t mask = bit_mask(site);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    const std::size_t dim = amp_.size();
    for (std::size_t i = 0; i < dim; ++i) {
        if (i & mask) continue;
        const std::size_t j = i | mask;
        const auto a0 = amp_[i];
        const auto a1 = amp_[j];
        amp_[i] = (a0 + a1) * inv_sqrt2;
        amp_[j] = (a0 - a1) * inv_sqrt2;
    }
}

void Statevector::apply_rx(int site, double theta) {
    const std::size_t mask = bit_mask(site);
    const double c = std::cos(theta / 2.0);
    const std::complex<double> ms = -kImagUnit * std::sin(theta / 2.0);
    const std::size_t dim = amp_.size();
    for (std::size_t i = 0; i < dim; ++i) {
        if (i & mask) continue;
        const std::size_t j = i | mask;
        const auto a0 = amp_[i];
        const auto a1 = amp_[j];
        amp_[i] = c * a0 + ms * a1;
        amp_[j] = ms * a0 + c * a1;
    }
}

void Statevector::apply_rz(int site, double theta) {
    const std::size_t mask = bit_mask(site);
    const auto phase0 = std::exp(-kImagUnit * (theta / 2.0));
    const auto phase1 = std::exp(kImagUnit * (theta / 2.0));
    const std::size_t dim = amp_.size();
    for (std::size_t i = 0; i < dim; ++i)
        amp_[i] *= (i & mask) ? phase1 : phase0;
}

void Statevector::apply_rzz(int site_a, int site_b, double theta) {
    if (site_a == site_b)
        throw std::invalid_argument("RZZ needs two distinct sites");
    const std::size_t ma = bit_mask(site_a);
    const std::size_t mb = bit_mask(site_b);
    const auto phase_eq = std::exp(-kImagUnit * (theta / 2.0));
    const auto phase_ne = std::exp(kImagUnit * (theta / 2.0));
    const std::size_t dim = amp_.size();
    for (std::size_t i = 0; i < dim; ++i) {
        const bool equal_bits = ((i & ma) != 0) == ((i & mb) != 0);
        amp_[i] *= equal_bits ? phase_eq : phase_ne;
    }
}

std::complex<double> pauli_bilinear(const Statevector& bra, const Statevector& ket,
                                    const std::map<int, Pauli>& factors) {
    if (bra.dimension() != ket.dimension())
        throw std::invalid_argument("bra/ket dimension mismatch");
    std::size_t flip_mask = 0;   // X and Y sites change the basis index
    std::size_t sign_mask = 0;   // Z and Y sites contribute (-1)^bit
    int y_count = 0;
    for (const auto& [site, p] : factors) {
        const std::size_t m = ket.bit_mask(site);
        switch (p) {
            case Pauli::X: flip_mask |= m; break;
            case Pauli::Y: flip_mask |= m; sign_mask |= m; ++y_count; break;
            case Pauli::Z: sign_mask |= m; break;
        }
    }
    // P|i> = y_phase * (-1)^popcount(i & sign_mask) |i ^ flip_mask>
    std::complex<double> y_phase = 1.0;
    for (int k = 0; k < (y_count & 3); ++k)
        y_phase *= kImagUnit;

    const auto& a = ket.amplitudes();
    const auto& b = bra.amplitudes();
    std::complex<double> acc = 0.0;
    const std::size_t dim = a.size();
    for (std::size_t i = 0; i < dim; ++i) {
        const double sign = (std::popcount(i & sign_mask) & 1) ? -1.0 : 1.0;
        acc += std::conj(b[i ^ flip_mask]) * (sign * a[i]);
    }
    return y_phase * acc;
}

double expectation(const Statevector& psi, const Observable& obs) {
    if (obs.length() != psi.qubit_count())
        throw std::invalid_argument("observable length " + std::to_string(obs.length()) +
                                    " does not match qubit count " +
                                    std::to_string(psi.qubit_count()));
    double value = obs.constant_offset();
    for (const auto& term : obs.terms()) {
        const auto v = pauli_bilinear(psi, psi, term.factors);
        if (std::abs(v.imag()) > 1e-10)
            throw numerical_integrity_error(
                "imaginary residue " + std::to_string(v.imag()) +
                " on a Hermitian expectation; convention bug suspected");
        value += term.coefficient * v.real();
    }
    return value;
}

std::vector<std::complex<double>> apply_observable(const Statevector& psi, const Observable& obs) {
    if (obs.length() != psi.qubit_count())
        throw std::invalid_argument("observable length does not match qubit count");
    const auto& a = psi.amplitudes();
    const std::size_t dim = a.size();
    std::vector<std::complex<double>> out(dim, {0.0, 0.0});
    if (obs.constant_offset() != 0.0)
        for (std::size_t i = 0; i < dim; ++i)
            out[i] = obs.constant_offset() * a[i];
    for (const auto& term : obs.terms()) {
        std::size_t flip_mask = 0, sign_mask = 0;
        int y_count = 0;
        for (const auto& [site, p] : term.factors) {
            const std::size_t m = psi.bit_mask(site);
            switch (p) {
                case Pauli::X: flip_mask |= m; break;
                case Pauli::Y: flip_mask |= m; sign_mask |= m; ++y_count; break;
                case Pauli::Z: sign_mask |= m; break;
            }
        }
        std::complex<double> phase = term.coefficient;
        for (int k = 0; k < (y_count & 3); ++k)
            phase *= kImagUnit;
        for (std::size_t i = 0; i < dim; ++i) {
            const double sign = (std::popcount(i & sign_mask) & 1) ? -1.0 : 1.0;
            out[i ^ flip_mask] += phase * sign * a[i];
        }
    }
    return out;
}

namespace {

enum class Group { z_diagonal, x_diagonal };

Group classify_term(const PauliString& term) {
    bool has_x = false, has_z = false;
    for (const auto& [_, p] : term.factors) {
        if (p == Pauli::X) has_x = true;
        else if (p == Pauli::Z) has_z = true;
        else
            throw unsupported_grouping_error("Y factors do not fit the Z/X measurement grouping");
    }
    if (has_x && has_z)
        throw unsupported_grouping_error("term mixes X and Z factors; no single measurement basis");
    return has_x ? Group::x_diagonal : Group::z_diagonal;
}

// Draws `shots` basis indices from |amp|^2 and averages each term's
// eigenvalue product over them. All terms here are diagonal: factor sites
// contribute (-1)^bit.
double sample_group(const std::vector<std::complex<double>>& amp,
                    const std::vector<const PauliString*>& terms,
                    const Statevector& layout, long shots, std::mt19937_64& rng) {
    const std::size_t dim = amp.size();
    std::vector<double> cumulative(dim);
    double acc = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
        acc += std::norm(amp[i]);
        cumulative[i] = acc;
    }
    const double total = cumulative.back();

    std::vector<std::size_t> sign_masks(terms.size(), 0);
    for (std::size_t t = 0; t < terms.size(); ++t)
        for (const auto& [site, _] : terms[t]->factors)
            sign_masks[t] |= layout.bit_mask(site);

    std::vector<double> term_sums(terms.size(), 0.0);
    for (long s = 0; s < shots; ++s) {
        const double u = u64_to_unit_double(rng()) * total;
        const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
        const std::size_t outcome =
            static_cast<std::size_t>(std::distance(cumulative.begin(), it));
        for (std::size_t t = 0; t < terms.size(); ++t)
            term_sums[t] += (std::popcount(outcome & sign_masks[t]) & 1) ? -1.0 : 1.0;
    }
    double estimate = 0.0;
    for (std::size_t t = 0; t < terms.size(); ++t)
        estimate += terms[t]->coefficient * term_sums[t] / static_cast<double>(shots);
    return estimate;
}

} // namespace

double sample_expectation(const Statevector& psi, const Observable& obs,
                          long shots, std::uint64_t seed) {
    if (obs.length() != psi.qubit_count())
        throw std::invalid_argument("observable length does not match qubit count");
    if (shots < 1)
        throw std::invalid_argument("shot count must be at least 1");

    std::vector<const PauliString*> z_terms, x_terms;
    for (const auto& term : obs.terms())
        (classify_term(term) == Group::z_diagonal ? z_terms : x_terms).push_back(&term);

    std::mt19937_64 rng(seed);
    double estimate = obs.constant_offset();
    if (!z_terms.empty())
        estimate += sample_group(psi.amplitudes(), z_terms, psi, shots, rng);
    if (!x_terms.empty()) {
        Statevector rotated = psi;
        for (int site = 1; site <= psi.qubit_count(); ++site)
            rotated.apply_hadamard(site);
        estimate += sample_group(rotated.amplitudes(), x_terms, psi, shots, rng);
    }
    return estimate;
}

} // namespace bfim

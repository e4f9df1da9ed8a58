#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "bfim/dense_ed.hpp"
#include "bfim/errors.hpp"
#include "bfim/model.hpp"
#include "bfim/statevector.hpp"

using namespace bfim;
using cplx = std::complex<double>;

namespace {

Statevector random_state(int L, std::mt19937_64& rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    std::vector<cplx> amp(std::size_t{1} << L);
    double norm = 0.0;
    for (auto& a : amp) {
        a = cplx(n(rng), n(rng));
        norm += std::norm(a);
    }
    norm = std::sqrt(norm);
    for (auto& a : amp)
        a /= norm;
    return Statevector::from_amplitudes(std::move(amp));
}

Observable random_observable(int L, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> coeff(-2.0, 2.0);
    std::uniform_int_distribution<int> pauli(0, 2);
    std::uniform_int_distribution<int> site(1, L);
    Observable o(L, coeff(rng));
    for (int t = 0; t < 6; ++t) {
        std::map<int, Pauli> factors;
        const int n_factors = 1 + (t % 3);
        for (int f = 0; f < n_factors; ++f)
            factors[site(rng)] = static_cast<Pauli>(pauli(rng));
        o.add_term(coeff(rng), factors);
    }
    return o;
}

} // namespace

TEST_CASE("init zero state") {
    const Statevector s1(1);
    CHECK(s1.amplitude(0) == cplx(1.0, 0.0));
    CHECK(s1.amplitude(1) == cplx(0.0, 0.0));
    const Statevector s2(2);
    CHECK(s2.dimension() == 4);
    CHECK(s2.amplitude(0) == cplx(1.0, 0.0));
    CHECK(s2.norm_sq() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK_THROWS_AS(Statevector(Statevector::max_qubits + 1), capacity_error);
}

TEST_CASE("hadamard on |0> gives the even superposition") {
    Statevector s(1);
    s.apply_hadamard(1);
    CHECK(s.amplitude(0).real() == doctest::Approx(1.0 / std::sqrt(2.0)));
    CHECK(s.amplitude(1).real() == doctest::Approx(1.0 / std::sqrt(2.0)));
}

TEST_CASE("RX(pi) maps |0> to -i|1>, and <Z> flips to -1") {
    Statevector s(1);
    s.apply_rx(1, M_PI);
    CHECK(std::abs(s.amplitude(0)) == doctest::Approx(0.0));
    CHECK(s.amplitude(1).imag() == doctest::Approx(-1.0));
    CHECK(expectation(s, build_local_magnetization(1, 1)) == doctest::Approx(-1.0));
}

TEST_CASE("RZZ on |00> is the phase exp(-i theta/2) and keeps <Z1 Z2> = 1") {
    const double theta = 0.7;
    Statevector s(2);
    s.apply_rzz(1, 2, theta);
    CHECK(s.amplitude(0).real() == doctest::Approx(std::cos(theta / 2)));
    CHECK(s.amplitude(0).imag() == doctest::Approx(-std::sin(theta / 2)));
    Observable zz(2);
    zz.add_term(1.0, {{1, Pauli::Z}, {2, Pauli::Z}});
    CHECK(expectation(s, zz) == doctest::Approx(1.0));
}

TEST_CASE("site 1 is the most significant bit") {
    Statevector s(3);
    s.apply_rx(1, M_PI);   // flip site 1
    CHECK(std::abs(s.amplitude(0b100)) == doctest::Approx(1.0));
    Statevector t(3);
    t.apply_rx(3, M_PI);   // flip site 3
    CHECK(std::abs(t.amplitude(0b001)) == doctest::Approx(1.0));
}

TEST_CASE("gate inverses restore the state") {
    std::mt19937_64 rng(11);
    Statevector s = random_state(3, rng);
    const auto before = s.amplitudes();
    s.apply_rx(2, 0.83);
    s.apply_rx(2, -0.83);
    s.apply_rz(1, -1.4);
    s.apply_rz(1, 1.4);
    s.apply_rzz(2, 3, 2.2);
    s.apply_rzz(2, 3, -2.2);
    for (std::size_t i = 0; i < before.size(); ++i)
        CHECK(std::abs(s.amplitudes()[i] - before[i]) < 1e-12);
}

TEST_CASE("hadamard is an involution") {
    std::mt19937_64 rng(12);
    Statevector s = random_state(3, rng);
    const auto before = s.amplitudes();
    s.apply_hadamard(2);
    s.apply_hadamard(2);
    for (std::size_t i = 0; i < before.size(); ++i)
        CHECK(std::abs(s.amplitudes()[i] - before[i]) < 1e-12);
}

TEST_CASE("norm preserved within 1e-10 across 500 random gates") {
    std::mt19937_64 rng(13);
    std::uniform_int_distribution<int> site(1, 6), kind(0, 3);
    std::uniform_real_distribution<double> angle(-M_PI, M_PI);
    Statevector s(6);
    for (int g = 0; g < 500; ++g) {
        const int a = site(rng);
        switch (kind(rng)) {
            case 0: s.apply_hadamard(a); break;
            case 1: s.apply_rx(a, angle(rng)); break;
            case 2: s.apply_rz(a, angle(rng)); break;
            case 3: {
                int b = site(rng);
                if (b == a) b = a == 6 ? 1 : a + 1;
                s.apply_rzz(a, b, angle(rng));
                break;
            }
        }
    }
    CHECK(std::abs(s.norm_sq() - 1.0) <= 1e-10);
}

TEST_CASE("expectation matches the dense-matrix bilinear on random states, L <= 6") {
    std::mt19937_64 rng(17);
    for (int L = 2; L <= 6; ++L) {
        for (int rep = 0; rep < 8; ++rep) {
            const Statevector psi = random_state(L, rng);
            const Observable obs = random_observable(L, rng);
            const auto m = dense_observable_matrix(obs);
            const std::size_t dim = psi.dimension();
            cplx acc = 0.0;
            for (std::size_t r = 0; r < dim; ++r) {
                cplx row = 0.0;
                for (std::size_t c = 0; c < dim; ++c)
                    row += m[r * dim + c] * psi.amplitude(c);
                acc += std::conj(psi.amplitude(r)) * row;
            }
            CHECK(std::abs(expectation(psi, obs) - acc.real()) < 1e-10);
            CHECK(std::abs(acc.imag()) < 1e-10);
        }
    }
}

TEST_CASE("expectation rejects length mismatches") {
    const Statevector s(3);
    CHECK_THROWS_AS(expectation(s, Observable(2)), std::invalid_argument);
}

TEST_CASE("hamiltonian expectation on the uniform superposition is -h_x L") {
    Statevector s(4);
    for (int i = 1; i <= 4; ++i)
        s.apply_hadamard(i);
    const Observable h = build_hamiltonian({4, 1.0, 0.5, 0.7, -0.7});
    CHECK(expectation(s, h) == doctest::Approx(-2.0).epsilon(1e-12));
}

TEST_CASE("apply_observable matches the dense matrix action") {
    std::mt19937_64 rng(19);
    const Statevector psi = random_state(4, rng);
    const Observable obs = random_observable(4, rng);
    const auto out = apply_observable(psi, obs);
    const auto m = dense_observable_matrix(obs);
    const std::size_t dim = psi.dimension();
    for (std::size_t r = 0; r < dim; ++r) {
        cplx expect = 0.0;
        for (std::size_t c = 0; c < dim; ++c)
            expect += m[r * dim + c] * psi.amplitude(c);
        CHECK(std::abs(out[r] - expect) < 1e-12);
    }
}

TEST_CASE("shot estimation is exact on an eigenstate at any shot count") {
    const Statevector zero(4);
    CHECK(sample_expectation(zero, build_local_magnetization(1, 4), 3, 42) ==
          doctest::Approx(1.0));
    CHECK(sample_expectation(zero, build_local_magnetization(1, 4), 1000, 7) ==
          doctest::Approx(1.0));
}

TEST_CASE("shot estimation is deterministic for a fixed seed") {
    Statevector s(3);
    for (int i = 1; i <= 3; ++i)
        s.apply_rx(i, 0.4 * i);
    const Observable h = build_hamiltonian({3, 1.0, 0.5, 0.2, -0.2});
    const double a = sample_expectation(s, h, 500, 123);
    const double b = sample_expectation(s, h, 500, 123);
    const double c = sample_expectation(s, h, 500, 124);
    CHECK(a == b);
    CHECK(a != c);
}

TEST_CASE("uniform-superposition <Z1> estimate stays within 5/sqrt(shots) for >= 95% of seeds") {
    Statevector s(2);
    s.apply_hadamard(1);
    s.apply_hadamard(2);
    const Observable z1 = build_local_magnetization(1, 2);
    const long shots = 10000;
    int hits = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const double est = sample_expectation(s, z1, shots, seed);
        if (std::abs(est) <= 5.0 / std::sqrt(static_cast<double>(shots)))
            ++hits;
    }
    CHECK(hits >= 95);
}

TEST_CASE("shot estimate converges to the exact expectation") {
    Statevector s(3);
    for (int i = 1; i <= 3; ++i) {
        s.apply_hadamard(i);
        s.apply_rx(i, 0.3 * i);
    }
    s.apply_rzz(1, 2, 0.9);
    const Observable h = build_hamiltonian({3, 1.0, 0.4, 0.5, -0.5});
    const double exact = expectation(s, h);
    const double bound = h.coefficient_one_norm() / std::sqrt(22304.0);
    int hits = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed)
        if (std::abs(sample_expectation(s, h, 22304, seed) - exact) <= 3.0 * bound)
            ++hits;
    CHECK(hits >= 95);
}

TEST_CASE("terms mixing X and Z factors cannot be shot-estimated") {
    Observable bad(2);
    bad.add_term(1.0, {{1, Pauli::X}, {2, Pauli::Z}});
    CHECK_THROWS_AS(sample_expectation(Statevector(2), bad, 10, 0), unsupported_grouping_error);
    Observable y(2);
    y.add_term(1.0, {{1, Pauli::Y}});
    CHECK_THROWS_AS(sample_expectation(Statevector(2), y, 10, 0), unsupported_grouping_error);
}

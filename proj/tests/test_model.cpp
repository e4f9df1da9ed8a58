#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "bfim/model.hpp"
#include "bfim/statevector.hpp"

using namespace bfim;

namespace {

double coefficient_of(const Observable& o, const std::map<int, Pauli>& factors) {
    for (const auto& t : o.terms())
        if (t.factors == factors)
            return t.coefficient;
    return 0.0;
}

Statevector uniform_superposition(int L) {
    Statevector s(L);
    for (int i = 1; i <= L; ++i)
        s.apply_hadamard(i);
    return s;
}

} // namespace

TEST_CASE("hamiltonian L=2 worked example has the five expected terms") {
    const Observable h = build_hamiltonian({2, 1.0, 0.5, 0.3, -0.3});
    REQUIRE(h.terms().size() == 5);
    CHECK(h.constant_offset() == 0.0);
    CHECK(coefficient_of(h, {{1, Pauli::Z}, {2, Pauli::Z}}) == doctest::Approx(-1.0));
    CHECK(coefficient_of(h, {{1, Pauli::X}}) == doctest::Approx(-0.5));
    CHECK(coefficient_of(h, {{2, Pauli::X}}) == doctest::Approx(-0.5));
    CHECK(coefficient_of(h, {{1, Pauli::Z}}) == doctest::Approx(0.3));
    CHECK(coefficient_of(h, {{2, Pauli::Z}}) == doctest::Approx(-0.3));
}

TEST_CASE("zero boundary fields drop their terms") {
    const Observable h = build_hamiltonian({4, 1.0, 0.5, 0.0, 0.0});
    CHECK(h.terms().size() == 7);   // 3 ZZ + 4 X
}

TEST_CASE("all-zero state energy is -J(L-1) + h_l + h_r") {
    const IsingChainSpec spec{4, 1.0, 0.5, 0.7, -0.7};
    const Statevector zero(4);
    CHECK(expectation(zero, build_hamiltonian(spec)) == doctest::Approx(-3.0).epsilon(1e-12));
}

TEST_CASE("hamiltonian is linear in each coefficient") {
    IsingChainSpec spec{5, 1.0, 0.3, 0.4, -0.2};
    const Observable base = build_hamiltonian(spec);
    spec.h_l *= 2.0;
    const Observable doubled = build_hamiltonian(spec);
    CHECK(coefficient_of(doubled, {{1, Pauli::Z}}) ==
          doctest::Approx(2.0 * coefficient_of(base, {{1, Pauli::Z}})));
    CHECK(coefficient_of(doubled, {{1, Pauli::Z}, {2, Pauli::Z}}) ==
          doctest::Approx(coefficient_of(base, {{1, Pauli::Z}, {2, Pauli::Z}})));
    CHECK(doubled.terms().size() == base.terms().size());
}

TEST_CASE("energy on random circuit states respects the 1-norm bound") {
    const IsingChainSpec spec{4, 1.0, 0.5, 0.7, -0.7};
    const Observable h = build_hamiltonian(spec);
    const double bound = spec.J * (spec.L - 1) + spec.h_x * spec.L +
                         std::abs(spec.h_l) + std::abs(spec.h_r);
    Statevector s(4);
    for (int i = 1; i <= 4; ++i) {
        s.apply_hadamard(i);
        s.apply_rx(i, 0.3 * i);
        s.apply_rz(i, -0.8 + 0.2 * i);
    }
    s.apply_rzz(1, 2, 0.7);
    s.apply_rzz(3, 4, -1.2);
    const double e = expectation(s, h);
    CHECK(std::abs(e) <= bound + 1e-12);
}

TEST_CASE("kink operator: offset, terms and product-state expectations") {
    const Observable nk = build_kink_operator(3);
    CHECK(nk.constant_offset() == doctest::Approx(1.0));
    REQUIRE(nk.terms().size() == 2);
    CHECK(coefficient_of(nk, {{1, Pauli::Z}, {2, Pauli::Z}}) == doctest::Approx(-0.5));
    CHECK(coefficient_of(nk, {{2, Pauli::Z}, {3, Pauli::Z}}) == doctest::Approx(-0.5));

    const Statevector zero(4);
    CHECK(expectation(zero, build_kink_operator(4)) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(expectation(uniform_superposition(4), build_kink_operator(4)) ==
          doctest::Approx(1.5).epsilon(1e-12));

    CHECK_THROWS_AS(build_kink_operator(1), std::invalid_argument);
}

TEST_CASE("local magnetization: single Z term and expectations") {
    const Observable m = build_local_magnetization(1, 4);
    REQUIRE(m.terms().size() == 1);
    CHECK(coefficient_of(m, {{1, Pauli::Z}}) == doctest::Approx(1.0));
    CHECK(m.constant_offset() == 0.0);

    CHECK(expectation(Statevector(4), m) == doctest::Approx(1.0));
    CHECK(expectation(uniform_superposition(4), m) == doctest::Approx(0.0).epsilon(1e-12));

    CHECK_THROWS_AS(build_local_magnetization(0, 4), std::invalid_argument);
    CHECK_THROWS_AS(build_local_magnetization(5, 4), std::invalid_argument);
}

TEST_CASE("spec validation and the physical-regime predicate") {
    CHECK_THROWS_AS(build_hamiltonian({1, 1.0, 0.5, 0.0, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(build_hamiltonian({4, -1.0, 0.5, 0.0, 0.0}), std::invalid_argument);

    CHECK(IsingChainSpec{4, 1.0, 0.5, 0.3, -0.3}.physical_regime());
    CHECK_FALSE(IsingChainSpec{4, 1.0, 0.5, 0.3, 0.3}.physical_regime());   // parallel
    CHECK_FALSE(IsingChainSpec{4, 1.0, 1.5, 0.3, -0.3}.physical_regime());  // h_x too large
    CHECK_FALSE(IsingChainSpec{4, 1.0, 0.5, 0.0, -0.3}.physical_regime());  // h_l zero
}

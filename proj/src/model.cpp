#include "bfim/model.hpp"

#include <stdexcept>
#include <string>

namespace bfim {

void IsingChainSpec::validate() const {
    if (L < 2)
        throw std::invalid_argument("chain length L must be at least 2, got " + std::to_string(L));
    if (J < 0.0)
        throw std::invalid_argument("coupling J must be non-negative, got " + std::to_string(J));
}

bool IsingChainSpec::physical_regime() const {
    return h_x > 0.0 && h_x < 1.0 && h_l * h_r < 0.0;
}

Observable build_hamiltonian(const IsingChainSpec& spec) {
    spec.validate();
    Observable h(spec.L);
    for (int i = 1; i < spec.L; ++i)
        h.add_term(-spec.J, {{i, Pauli::Z}, {i + 1, Pauli::Z}});
    for (int i = 1; i <= spec.L; ++i)
        h.add_term(-spec.h_x, {{i, Pauli::X}});
    h.add_term(spec.h_l, {{1, Pauli::Z}});
    h.add_term(spec.h_r, {{spec.L, Pauli::Z}});
    return h;
}

Observable build_kink_operator(int L) {
    if (L < 2)
        throw std::invalid_argument("kink operator needs L >= 2, got " + std::to_string(L));
    Observable nk(L, (L - 1) / 2.0);
    for (int i = 1; i < L; ++i)
        nk.add_term(-0.5, {{i, Pauli::Z}, {i + 1, Pauli::Z}});
    return nk;
}

Observable build_local_magnetization(int i, int L) {
    if (i < 1 || i > L)
        throw std::invalid_argument("magnetization site " + std::to_string(i) +
                                    " outside [1, " + std::to_string(L) + "]");
    Observable m(L);
    m.add_term(1.0, {{i, Pauli::Z}});
    return m;
}

} // namespace bfim

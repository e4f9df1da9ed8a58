#include "bfim/circuit.hpp"

#include <sstream>
#include <stdexcept>

namespace bfim {

std::vector<std::size_t> Circuit::occurrences(std::size_t slot) const {
    std::vector<std::size_t> idx;
    for (std::size_t g = 0; g < gates.size(); ++g)
        if (gates[g].param_slot >= 0 && static_cast<std::size_t>(gates[g].param_slot) == slot)
            idx.push_back(g);
    return idx;
}

void apply_circuit(Statevector& state, const Circuit& circuit,
                   const std::vector<double>& params,
                   long shifted_gate, double shift) {
    if (circuit.qubit_count != state.qubit_count())
        throw std::invalid_argument("circuit qubit count does not match the state");
    if (params.size() != circuit.parameter_count())
        throw std::invalid_argument("expected " + std::to_string(circuit.parameter_count()) +
                                    " parameters, got " + std::to_string(params.size()));
    for (std::size_t g = 0; g < circuit.gates.size(); ++g) {
        const GateOp& op = circuit.gates[g];
        double angle = 0.0;
        if (op.param_slot >= 0) {
            angle = op.sign * params[static_cast<std::size_t>(op.param_slot)];
            if (static_cast<long>(g) == shifted_gate)
                angle += shift;
        }
        switch (op.kind) {
            case GateKind::Hadamard: state.apply_hadamard(op.target_a); break;
            case GateKind::RX: state.apply_rx(op.target_a, angle); break;
            case GateKind::RZ: state.apply_rz(op.target_a, angle); break;
            case GateKind::RZZ: state.apply_rzz(op.target_a, op.target_b, angle); break;
        }
    }
}

std::string render_circuit(const Circuit& circuit) {
    std::ostringstream out;
    for (const GateOp& op : circuit.gates) {
        switch (op.kind) {
            case GateKind::Hadamard: out << "H " << op.target_a; break;
            case GateKind::RX: out << "RX " << op.target_a; break;
            case GateKind::RZ: out << "RZ " << op.target_a; break;
            case GateKind::RZZ: out << "RZZ " << op.target_a << " " << op.target_b; break;
        }
        if (op.param_slot >= 0)
            out << " " << circuit.param_names[static_cast<std::size_t>(op.param_slot)]
                << " " << (op.sign > 0 ? "+1" : "-1");
        out << "\n";
    }
    return out.str();
}

Circuit build_hva_circuit(const HvaConfig& config, int L) {
    if (L < 2)
        throw std::invalid_argument("ansatz needs L >= 2, got " + std::to_string(L));
    if (config.layers < 1)
        throw std::invalid_argument("layer count must be positive");

    const bool tied = config.boundary_mode == HvaConfig::BoundaryMode::tied;
    Circuit c;
    c.qubit_count = L;
    for (int site = 1; site <= L; ++site)
        c.gates.push_back({GateKind::Hadamard, site});

    for (int layer = 1; layer <= config.layers; ++layer) {
        const std::string prefix = "layer" + std::to_string(layer) + ".";
        const int slot_zz = static_cast<int>(c.param_names.size());
        c.param_names.push_back(prefix + "zz");
        const int slot_x = static_cast<int>(c.param_names.size());
        c.param_names.push_back(prefix + "x");
        const int slot_z = static_cast<int>(c.param_names.size());
        c.param_names.push_back(prefix + "z");
        int slot_zr = slot_z;
        if (!tied) {
            slot_zr = static_cast<int>(c.param_names.size());
            c.param_names.push_back(prefix + "zr");
        }

        for (int site = 1; site <= L; ++site)
            c.gates.push_back({GateKind::RX, site, 0, slot_x, 1.0});
        for (int site = 1; site + 1 <= L; site += 2)
            c.gates.push_back({GateKind::RZZ, site, site + 1, slot_zz, 1.0});
        for (int site = 2; site + 1 <= L; site += 2)
            c.gates.push_back({GateKind::RZZ, site, site + 1, slot_zz, 1.0});
        c.gates.push_back({GateKind::RZ, 1, 0, slot_z, 1.0});
        c.gates.push_back({GateKind::RZ, L, 0, slot_zr, tied ? -1.0 : 1.0});
    }
    return c;
}

Statevector run_ansatz(const HvaConfig& config, int L, const std::vector<double>& params) {
    const Circuit circuit = build_hva_circuit(config, L);
    Statevector state(L);
    apply_circuit(state, circuit, params);
    return state;
}

} // namespace bfim

#pragma once

#include <string>
#include <vector>

#include "bfim/statevector.hpp"

namespace bfim {

enum class GateKind { Hadamard, RX, RZ, RZZ };

// One gate in program order. Parametrized gates reference a named parameter
// slot and carry a sign, so tied parameters (same angle, opposite direction)
// share a slot. param_slot < 0 marks a fixed, non-parametrized gate.
struct GateOp {
    GateKind kind;
    int target_a = 0;
    int target_b = 0;        // second site for RZZ only
    int param_slot = -1;
    double sign = 1.0;
};

struct Circuit {
    int qubit_count = 0;
    std::vector<GateOp> gates;
    std::vector<std::string> param_names;   // slot index -> name

    std::size_t parameter_count() const { return param_names.size(); }
    // Gate indices using a slot; order follows program order.
    std::vector<std::size_t> occurrences(std::size_t slot) const;
};

// Applies the circuit with the given parameter values. If shifted_gate >= 0,
// that single gate occurrence gets `shift` added to its angle (after the
// sign), which is what the per-occurrence parameter-shift rule needs.
void apply_circuit(Statevector& state, const Circuit& circuit,
                   const std::vector<double>& params,
                   long shifted_gate = -1, double shift = 0.0);

// One line per gate: kind, targets, parameter name, sign.
std::string render_circuit(const Circuit& circuit);

// Layered ansatz whose rotations are generated by the chain Hamiltonian's own
// terms. tied: the two boundary RZ gates share one parameter with opposite
// signs (3 parameters per layer); untied: independent left/right parameters
// (4 per layer).
struct HvaConfig {
    enum class BoundaryMode { tied, untied };
    int layers = 1;
    BoundaryMode boundary_mode = BoundaryMode::tied;

    int parameter_count() const {
        return layers * (boundary_mode == BoundaryMode::tied ? 3 : 4);
    }
};

// Hadamard on every site, then per layer: RX(theta_x) on every site, RZZ
// (theta_zz) on odd-start pairs (1,2),(3,4),... then even-start pairs
// (2,3),(4,5),..., then RZ(theta_z) on site 1 and RZ(-theta_z) (tied) or
// RZ(theta_zr) (untied) on site L. Parameter vector is layer-major
// [zz, x, z(, zr)] with names layer{i}.{zz|x|z|zr}.
Circuit build_hva_circuit(const HvaConfig& config, int L);

Statevector run_ansatz(const HvaConfig& config, int L, const std::vector<double>& params);

} // namespace bfim

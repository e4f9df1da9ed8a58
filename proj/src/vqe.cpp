#include "bfim/vqe.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "bfim/lbfgs.hpp"
#include "bfim/statevector.hpp"

namespace bfim {

namespace {

constexpr double kHalfPi = 1.57079632679489661923;

double u64_to_unit_double(std::uint64_t x) {
    return static_cast<double>(x >> 11) * 0x1.0p-53;
}

struct Workspace {
    Circuit circuit;
    Observable hamiltonian;
};

Workspace make_workspace(const IsingChainSpec& spec, const HvaConfig& ansatz) {
    return Workspace{build_hva_circuit(ansatz, spec.L), build_hamiltonian(spec)};
}

double cost_in(const Workspace& w, const std::vector<double>& params,
               long shifted_gate = -1, double shift = 0.0) {
    Statevector state(w.circuit.qubit_count);
    apply_circuit(state, w.circuit, params, shifted_gate, shift);
    return expectation(state, w.hamiltonian);
}

std::vector<double> gradient_shift_in(const Workspace& w, const std::vector<double>& params) {
    std::vector<double> grad(params.size(), 0.0);
    for (std::size_t g = 0; g < w.circuit.gates.size(); ++g) {
        const GateOp& op = w.circuit.gates[g];
        if (op.param_slot < 0)
            continue;
        const double plus = cost_in(w, params, static_cast<long>(g), kHalfPi);
        const double minus = cost_in(w, params, static_cast<long>(g), -kHalfPi);
        grad[static_cast<std::size_t>(op.param_slot)] += op.sign * 0.5 * (plus - minus);
    }
    return grad;
}

// Reverse-mode gradient. With phi = U|0> and lam = H phi, walking the gates
// backward while unapplying each one keeps the invariant that for gate k,
// d cost / d angle_k = Im <lam|P_k|phi> evaluated just before gate k is
// unapplied from both vectors (P_k the gate's Pauli generator).
std::vector<double> gradient_adjoint_in(const Workspace& w, const std::vector<double>& params) {
    Statevector phi(w.circuit.qubit_count);
    apply_circuit(phi, w.circuit, params);
    Statevector lam = Statevector::from_amplitudes(apply_observable(phi, w.hamiltonian));

    std::vector<double> grad(params.size(), 0.0);
    for (std::size_t g = w.circuit.gates.size(); g-- > 0;) {
        const GateOp& op = w.circuit.gates[g];
        if (op.param_slot >= 0) {
            std::map<int, Pauli> generator;
            switch (op.kind) {
                case GateKind::RX: generator = {{op.target_a, Pauli::X}}; break;
                case GateKind::RZ: generator = {{op.target_a, Pauli::Z}}; break;
                case GateKind::RZZ:
                    generator = {{op.target_a, Pauli::Z}, {op.target_b, Pauli::Z}};
                    break;
                case GateKind::Hadamard:
                    throw std::logic_error("Hadamard gates carry no parameter slot");
            }
            grad[static_cast<std::size_t>(op.param_slot)] +=
                op.sign * pauli_bilinear(lam, phi, generator).imag();
        }
        const double angle =
            op.param_slot >= 0 ? -op.sign * params[static_cast<std::size_t>(op.param_slot)] : 0.0;
        switch (op.kind) {
            case GateKind::Hadamard:
                phi.apply_hadamard(op.target_a);
                lam.apply_hadamard(op.target_a);
                break;
            case GateKind::RX:
                phi.apply_rx(op.target_a, angle);
                lam.apply_rx(op.target_a, angle);
                break;
            case GateKind::RZ:
                phi.apply_rz(op.target_a, angle);
                lam.apply_rz(op.target_a, angle);
                break;
            case GateKind::RZZ:
                phi.apply_rzz(op.target_a, op.target_b, angle);
                lam.apply_rzz(op.target_a, op.target_b, angle);
                break;
        }
    }
    return grad;
}

} // namespace

void VqeConfig::validate() const {
    if (max_iters_first < 1 || max_iters_subsequent < 1)
        throw std::invalid_argument("iteration caps must be positive");
    if (std::abs(init_low + init_high) > 1e-12)
        throw std::invalid_argument("init range must be symmetric about zero");
}

double cost(const std::vector<double>& params, const IsingChainSpec& spec,
            const HvaConfig& ansatz) {
    return cost_in(make_workspace(spec, ansatz), params);
}

std::vector<double> gradient(const std::vector<double>& params, const IsingChainSpec& spec,
                             const HvaConfig& ansatz) {
    return gradient_shift_in(make_workspace(spec, ansatz), params);
}

std::vector<double> gradient_adjoint(const std::vector<double>& params,
                                     const IsingChainSpec& spec, const HvaConfig& ansatz) {
    return gradient_adjoint_in(make_workspace(spec, ansatz), params);
}

std::vector<double> random_initial_params(const HvaConfig& ansatz, int L,
                                          const VqeConfig& config) {
    (void)L;
    std::mt19937_64 rng(config.seed);
    std::vector<double> params(static_cast<std::size_t>(ansatz.parameter_count()));
    for (auto& p : params)
        p = config.init_low + (config.init_high - config.init_low) * u64_to_unit_double(rng());
    return params;
}

VqeResult minimize(const IsingChainSpec& spec, const HvaConfig& ansatz,
                   const VqeConfig& config, const std::vector<double>& initial_params,
                   int max_iters) {
    config.validate();
    const Workspace w = make_workspace(spec, ansatz);
    const Objective objective = [&w](const std::vector<double>& x, std::vector<double>& grad) {
        grad = gradient_adjoint_in(w, x);
        return cost_in(w, x);
    };
    LbfgsOptions opt;
    opt.max_iterations = max_iters;
    opt.gradient_tolerance = config.gradient_tolerance;
    opt.energy_change_tolerance = config.energy_change_tolerance;
    const LbfgsResult r = lbfgs_minimize(objective, initial_params, opt);

    VqeResult out;
    out.optimal_params = r.best_x;
    out.energy = r.best_f;
    out.iteration_trace = r.trace;
    out.converged = r.converged;
    out.iterations = r.iterations;
    return out;
}

SweepResult sweep(const IsingChainSpec& spec_template, const std::vector<double>& h_values,
                  const HvaConfig& ansatz, const VqeConfig& config, bool tie_boundary) {
    if (h_values.empty())
        throw std::invalid_argument("sweep needs at least one h value");
    for (std::size_t i = 1; i < h_values.size(); ++i) {
        const bool increasing = h_values[1] > h_values[0];
        if ((increasing && h_values[i] <= h_values[i - 1]) ||
            (!increasing && h_values[i] >= h_values[i - 1]))
            throw std::invalid_argument("sweep h values must be strictly monotone");
    }
    config.validate();

    SweepResult out;
    out.spec_template = spec_template;
    out.ansatz = ansatz;
    out.config = config;
    out.tie_boundary = tie_boundary;
    out.decreasing = h_values.size() < 2 || h_values[1] < h_values[0];

    std::vector<double> warm = random_initial_params(ansatz, spec_template.L, config);
    for (std::size_t i = 0; i < h_values.size(); ++i) {
        IsingChainSpec spec = spec_template;
        spec.h_l = h_values[i];
        if (tie_boundary)
            spec.h_r = -h_values[i];
        const int cap = i == 0 ? config.max_iters_first : config.max_iters_subsequent;
        VqeResult r = minimize(spec, ansatz, config, warm, cap);
        r.h_value = h_values[i];
        warm = r.optimal_params;
        out.points.push_back(SweepPoint{spec.h_l, spec.h_r, std::move(r)});
    }
    return out;
}

} // namespace bfim

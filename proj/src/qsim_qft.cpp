#include "sasq/qsim/qft.hpp"

#include <algorithm>
#include <cmath>

#include "sasq/qsim/apply.hpp"

namespace sasq::qsim {

namespace {

constexpr double kPi = 3.14159265358979323846;

void check_block(QubitRange block, int num_qubits) {
    if (block.count <= 0) throw structural_error("qft: empty qubit block");
    if (block.first < 0 || block.first + block.count > num_qubits)
        throw structural_error("qft: block outside register");
}

}  // namespace

std::vector<Gate> qft_fragment(QubitRange block) {
    if (block.count <= 0) throw structural_error("qft_fragment: empty qubit block");
    std::vector<Gate> gates;
    const int b = block.count;
    for (int i = 0; i < b; ++i) {
        gates.push_back(Gate::h(block.first + i));
        for (int j = i + 1; j < b; ++j)
            gates.push_back(Gate::cphase(block.first + j, block.first + i, kPi / double(1 << (j - i))));
    }
    for (int i = 0; i < b / 2; ++i)
        gates.push_back(Gate::swap(block.first + i, block.first + b - 1 - i));
    return gates;
}

std::vector<Gate> iqft_fragment(QubitRange block) {
    std::vector<Gate> gates = qft_fragment(block);
    std::reverse(gates.begin(), gates.end());
    for (Gate& g : gates)
        if (g.kind == GateKind::CPhase) g.fixed[0] = -g.fixed[0];
    return gates;
}

void qft_register(QuantumState& state, QubitRange block) {
    check_block(block, state.num_qubits);
    for (const Gate& g : qft_fragment(block)) apply_gate(state, g);
}

void iqft_register(QuantumState& state, QubitRange block) {
    check_block(block, state.num_qubits);
    for (const Gate& g : iqft_fragment(block)) apply_gate(state, g);
}

}  // namespace sasq::qsim

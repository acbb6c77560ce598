#include "sasq/qsim/state.hpp"

#include <cmath>
#include <string>

namespace sasq::qsim {

QuantumState init_state(int num_qubits) {
    if (num_qubits < 1 || num_qubits > kMaxQubits)
        throw capacity_error("init_state: num_qubits " + std::to_string(num_qubits) +
                             " outside [1, " + std::to_string(kMaxQubits) + "]");
    QuantumState state;
    state.num_qubits = num_qubits;
    state.amplitudes.assign(std::size_t{1} << num_qubits, cplx{0.0, 0.0});
    state.amplitudes[0] = cplx{1.0, 0.0};
    return state;
}

double state_norm(const QuantumState& state) {
    double s = 0.0;
    for (const cplx& a : state.amplitudes) s += std::norm(a);
    return std::sqrt(s);
}

double expectation_z(const QuantumState& state, int qubit) {
    if (qubit < 0 || qubit >= state.num_qubits)
        throw structural_error("expectation_z: qubit index out of range");
    const std::size_t mask = std::size_t{1} << bit_position(state.num_qubits, qubit);
    double acc = 0.0;
    for (std::size_t k = 0; k < state.amplitudes.size(); ++k) {
        const double p = std::norm(state.amplitudes[k]);
        acc += (k & mask) ? -p : p;
    }
    return acc;
}

}  // namespace sasq::qsim

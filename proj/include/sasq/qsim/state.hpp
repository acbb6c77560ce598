#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "sasq/util/error.hpp"

namespace sasq::qsim {

using cplx = std::complex<double>;

// Hard simulator bound; a 24-qubit state is 256 MiB of amplitudes.
inline constexpr int kMaxQubits = 24;

// Pure state of a qubit register as a dense amplitude vector.
//
// Qubit ordering is big-endian: qubit 0 carries the most significant bit of
// the basis index. With this convention the QFT on a contiguous qubit block
// equals the standard DFT of the corresponding amplitude sub-vector.
struct QuantumState {
    int num_qubits = 0;
    std::vector<cplx> amplitudes;

    std::size_t dim() const { return amplitudes.size(); }
};

// Bit position of `qubit` inside a basis index (big-endian).
inline int bit_position(int num_qubits, int qubit) { return num_qubits - 1 - qubit; }

// |0...0> on num_qubits qubits. Throws capacity_error outside [1, kMaxQubits].
QuantumState init_state(int num_qubits);

double state_norm(const QuantumState& state);

// <Z> on one qubit: sum_k |amp_k|^2 * (+1 if the qubit's bit is 0 else -1).
double expectation_z(const QuantumState& state, int qubit);

// Contiguous qubit block [first, first + count).
struct QubitRange {
    int first = 0;
    int count = 0;
};

}  // namespace sasq::qsim

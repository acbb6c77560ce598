#pragma once

#include <vector>

#include "sasq/qsim/gate.hpp"
#include "sasq/qsim/state.hpp"

namespace sasq::qsim {

// Gate network for the exact QFT on a contiguous qubit block: Hadamards,
// controlled phases and the final bit-reversal swaps, O(b^2) gates. With the
// big-endian convention the block's amplitude sub-vector is mapped to its
// unitary DFT, F[j][k] = exp(+2*pi*i*j*k / 2^b) / sqrt(2^b).
std::vector<Gate> qft_fragment(QubitRange block);

// Adjoint network of qft_fragment (reversed gates, negated phases).
std::vector<Gate> iqft_fragment(QubitRange block);

// Applies the fragments directly to a state. Throws structural_error for an
// empty block or a block outside the register.
void qft_register(QuantumState& state, QubitRange block);
void iqft_register(QuantumState& state, QubitRange block);

}  // namespace sasq::qsim

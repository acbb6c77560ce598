#pragma once

#include <span>

#include "sasq/qsim/gate.hpp"
#include "sasq/qsim/smallmat.hpp"

namespace sasq::qsim {

// Largest register the dense oracle will materialize (2^10 x 2^10 matrix).
inline constexpr int kMaxOracleQubits = 10;

// Full 2^q x 2^q matrix of one gate, built by naive Kronecker-product
// composition from its own primitive matrix table (independent of the
// statevector kernels).
CMat dense_gate_matrix(const Gate& gate, int num_qubits, std::span<const double> params = {});

// Explicit unitary of a whole circuit: the ordered product of the per-gate
// embeddings. Exponential in qubits; intended for tests and cross-checks.
CMat dense_unitary_oracle(const Circuit& circuit, std::span<const double> params = {});

}  // namespace sasq::qsim

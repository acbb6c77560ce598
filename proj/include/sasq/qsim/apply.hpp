#pragma once

#include <span>

#include "sasq/qsim/gate.hpp"
#include "sasq/qsim/state.hpp"

namespace sasq::qsim {

// Applies one gate in place. Norm is preserved to ~1e-15 per gate.
void apply_gate(QuantumState& state, const Gate& gate, std::span<const double> params = {});

// Applies circuit.gates in order. params must cover circuit.num_params.
void apply_circuit(QuantumState& state, const Circuit& circuit, std::span<const double> params = {});

// 2x2 complex matrix in row-major split real/imag form, used by the
// statevector kernels.
struct Mat2 {
    double r00 = 0, i00 = 0, r01 = 0, i01 = 0;
    double r10 = 0, i10 = 0, r11 = 0, i11 = 0;
};

// Resolved single-qubit matrix of a (possibly controlled) rotation gate.
// For controlled kinds this is the matrix applied on the control=1 subspace.
Mat2 gate_local_matrix(GateKind kind, const std::array<double, 3>& angles);

Mat2 mat2_mul(const Mat2& a, const Mat2& b);
Mat2 mat2_adjoint(const Mat2& a);

// Low-level kernels (big-endian bit positions). Shared with the fused
// execution plan and the gradient engines.
void apply_1q(QuantumState& state, int target, const Mat2& u);
void apply_controlled_1q(QuantumState& state, int control, int target, const Mat2& u);
void apply_cnot(QuantumState& state, int control, int target);
void apply_swap(QuantumState& state, int a, int b);
void apply_cphase(QuantumState& state, int a, int b, double angle);

}  // namespace sasq::qsim

#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "sasq/qsim/state.hpp"

namespace sasq::qsim {

enum class GateKind : std::uint8_t {
    H,
    RX,
    RY,
    RZ,
    RotZYZ,  // RZ(alpha) * RY(beta) * RZ(gamma), gamma applied first
    CNOT,
    CRX,
    CRZ,
    CPhase,  // diag(1,1,1,e^{i*theta}), symmetric in control/target
    SWAP,
};

// Number of angle slots the gate consumes (0, 1 or 3).
int angle_count(GateKind kind);

const char* gate_name(GateKind kind);

// One gate of a circuit. Angles come either from `fixed` or, when
// param_index >= 0, from angle_count(kind) consecutive entries of the
// circuit's parameter vector starting at param_index.
struct Gate {
    GateKind kind = GateKind::H;
    int target = -1;
    int target2 = -1;  // SWAP only
    int control = -1;  // CNOT / CRX / CRZ / CPhase
    int param_index = -1;
    std::array<double, 3> fixed{0.0, 0.0, 0.0};

    bool parameterized() const { return param_index >= 0; }

    // Resolved angle values for this gate.
    std::array<double, 3> angles(std::span<const double> params) const;

    static Gate h(int target);
    static Gate rx(int target, double angle);
    static Gate ry(int target, double angle);
    static Gate rz(int target, double angle);
    static Gate rot_zyz(int target, double alpha, double beta, double gamma);
    static Gate cnot(int control, int target);
    static Gate crx(int control, int target, double angle);
    static Gate crz(int control, int target, double angle);
    static Gate cphase(int control, int target, double angle);
    static Gate swap(int a, int b);

    // Parameter-slot variants.
    static Gate rx_slot(int target, int slot);
    static Gate ry_slot(int target, int slot);
    static Gate rz_slot(int target, int slot);
    static Gate rot_zyz_slot(int target, int slot);  // slots slot, slot+1, slot+2
    static Gate crx_slot(int control, int target, int slot);
    static Gate crz_slot(int control, int target, int slot);
};

// Ordered gate program over a fixed-width register.
struct Circuit {
    int num_qubits = 0;
    int num_params = 0;
    std::vector<Gate> gates;

    // Throws structural_error on out-of-range indices, overlapping
    // control/target, or parameter slots beyond num_params.
    void validate() const;
};

void validate_gate(const Gate& gate, int num_qubits, int num_params);

}  // namespace sasq::qsim

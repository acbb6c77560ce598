#include "sasq/qsim/gate.hpp"

#include <string>

namespace sasq::qsim {

int angle_count(GateKind kind) {
    switch (kind) {
        case GateKind::H:
        case GateKind::CNOT:
        case GateKind::SWAP:
            return 0;
        case GateKind::RotZYZ:
            return 3;
        default:
            return 1;
    }
}

const char* gate_name(GateKind kind) {
    switch (kind) {
        case GateKind::H: return "H";
        case GateKind::RX: return "RX";
        case GateKind::RY: return "RY";
        case GateKind::RZ: return "RZ";
        case GateKind::RotZYZ: return "RotZYZ";
        case GateKind::CNOT: return "CNOT";
        case GateKind::CRX: return "CRX";
        case GateKind::CRZ: return "CRZ";
        case GateKind::CPhase: return "CPhase";
        case GateKind::SWAP: return "SWAP";
    }
    return "?";
}

std::array<double, 3> Gate::angles(std::span<const double> params) const {
    if (param_index < 0) return fixed;
    const int n = angle_count(kind);
    if (static_cast<std::size_t>(param_index) + n > params.size())
        throw structural_error("gate references parameter slots beyond the supplied vector");
    std::array<double, 3> out{0.0, 0.0, 0.0};
    for (int i = 0; i < n; ++i) out[i] = params[param_index + i];
    return out;
}

Gate Gate::h(int target) { return Gate{GateKind::H, target}; }
Gate Gate::rx(int target, double angle) { return Gate{GateKind::RX, target, -1, -1, -1, {angle, 0, 0}}; }
Gate Gate::ry(int target, double angle) { return Gate{GateKind::RY, target, -1, -1, -1, {angle, 0, 0}}; }
Gate Gate::rz(int target, double angle) { return Gate{GateKind::RZ, target, -1, -1, -1, {angle, 0, 0}}; }
Gate Gate::rot_zyz(int target, double alpha, double beta, double gamma) {
    return Gate{GateKind::RotZYZ, target, -1, -1, -1, {alpha, beta, gamma}};
}
Gate Gate::cnot(int control, int target) { return Gate{GateKind::CNOT, target, -1, control}; }
Gate Gate::crx(int control, int target, double angle) {
    return Gate{GateKind::CRX, target, -1, control, -1, {angle, 0, 0}};
}
Gate Gate::crz(int control, int target, double angle) {
    return Gate{GateKind::CRZ, target, -1, control, -1, {angle, 0, 0}};
}
Gate Gate::cphase(int control, int target, double angle) {
    return Gate{GateKind::CPhase, target, -1, control, -1, {angle, 0, 0}};
}
Gate Gate::swap(int a, int b) { return Gate{GateKind::SWAP, a, b}; }

Gate Gate::rx_slot(int target, int slot) { return Gate{GateKind::RX, target, -1, -1, slot}; }
Gate Gate::ry_slot(int target, int slot) { return Gate{GateKind::RY, target, -1, -1, slot}; }
Gate Gate::rz_slot(int target, int slot) { return Gate{GateKind::RZ, target, -1, -1, slot}; }
Gate Gate::rot_zyz_slot(int target, int slot) { return Gate{GateKind::RotZYZ, target, -1, -1, slot}; }
Gate Gate::crx_slot(int control, int target, int slot) {
    return Gate{GateKind::CRX, target, -1, control, slot};
}
Gate Gate::crz_slot(int control, int target, int slot) {
    return Gate{GateKind::CRZ, target, -1, control, slot};
}

void validate_gate(const Gate& gate, int num_qubits, int num_params) {
    auto in_range = [num_qubits](int q) { return q >= 0 && q < num_qubits; };
    if (!in_range(gate.target))
        throw structural_error(std::string(gate_name(gate.kind)) + ": target out of range");

    const bool wants_control = gate.kind == GateKind::CNOT || gate.kind == GateKind::CRX ||
                               gate.kind == GateKind::CRZ || gate.kind == GateKind::CPhase;
    const bool wants_second = gate.kind == GateKind::SWAP;

    if (wants_control) {
        if (!in_range(gate.control))
            throw structural_error(std::string(gate_name(gate.kind)) + ": control out of range");
        if (gate.control == gate.target)
            throw structural_error(std::string(gate_name(gate.kind)) + ": control equals target");
    } else if (gate.control >= 0) {
        throw structural_error(std::string(gate_name(gate.kind)) + ": unexpected control");
    }

    if (wants_second) {
        if (!in_range(gate.target2))
            throw structural_error("SWAP: second target out of range");
        if (gate.target2 == gate.target) throw structural_error("SWAP: targets coincide");
    } else if (gate.target2 >= 0) {
        throw structural_error(std::string(gate_name(gate.kind)) + ": unexpected second target");
    }

    if (gate.param_index >= 0) {
        const int n = angle_count(gate.kind);
        if (n == 0)
            throw structural_error(std::string(gate_name(gate.kind)) + ": gate takes no parameters");
        if (gate.param_index + n > num_params)
            throw structural_error(std::string(gate_name(gate.kind)) +
                                   ": parameter slot beyond num_params");
    }
}

void Circuit::validate() const {
    if (num_qubits < 1) throw structural_error("circuit: num_qubits must be >= 1");
    for (const Gate& g : gates) validate_gate(g, num_qubits, num_params);
}

}  // namespace sasq::qsim

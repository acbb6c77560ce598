#include "sasq/qsim/dense_oracle.hpp"

#include <cmath>
#include <string>

namespace sasq::qsim {

namespace {

constexpr cplx kI{0.0, 1.0};

CMat mat2(cplx a, cplx b, cplx c, cplx d) {
    CMat m(2);
    m.at(0, 0) = a; m.at(0, 1) = b;
    m.at(1, 0) = c; m.at(1, 1) = d;
    return m;
}

CMat pauli_x() { return mat2(0, 1, 1, 0); }
CMat pauli_y() { return mat2(0, -kI, kI, 0); }
CMat pauli_z() { return mat2(1, 0, 0, -1); }
CMat proj0() { return mat2(1, 0, 0, 0); }
CMat proj1() { return mat2(0, 0, 0, 1); }

CMat hadamard2() {
    const double s = 1.0 / std::sqrt(2.0);
    return mat2(s, s, s, -s);
}

CMat rx2(double t) {
    const double c = std::cos(t / 2), s = std::sin(t / 2);
    return mat2(c, -kI * s, -kI * s, c);
}

CMat ry2(double t) {
    const double c = std::cos(t / 2), s = std::sin(t / 2);
    return mat2(c, -s, s, c);
}

CMat rz2(double t) {
    return mat2(std::exp(-kI * (t / 2)), 0, 0, std::exp(kI * (t / 2)));
}

CMat rot_zyz2(double a, double b, double g) { return cmat_mul(rz2(a), cmat_mul(ry2(b), rz2(g))); }

// kron over qubit slots 0..q-1 (qubit 0 is the leftmost factor / MSB),
// `ops` holding an optional 2x2 per qubit (identity elsewhere).
CMat embed(int num_qubits, const std::vector<std::pair<int, CMat>>& ops) {
    CMat out = CMat::identity(1);
    for (int q = 0; q < num_qubits; ++q) {
        const CMat* factor = nullptr;
        for (const auto& [slot, m] : ops)
            if (slot == q) factor = &m;
        out = cmat_kron(out, factor ? *factor : CMat::identity(2));
    }
    return out;
}

CMat add(const CMat& x, const CMat& y) {
    CMat out(x.dim);
    for (std::size_t i = 0; i < x.a.size(); ++i) out.a[i] = x.a[i] + y.a[i];
    return out;
}

CMat scale(const CMat& x, cplx v) {
    CMat out(x.dim);
    for (std::size_t i = 0; i < x.a.size(); ++i) out.a[i] = v * x.a[i];
    return out;
}

}  // namespace

CMat dense_gate_matrix(const Gate& gate, int num_qubits, std::span<const double> params) {
    const auto ang = gate.angles(params);
    switch (gate.kind) {
        case GateKind::H:
            return embed(num_qubits, {{gate.target, hadamard2()}});
        case GateKind::RX:
            return embed(num_qubits, {{gate.target, rx2(ang[0])}});
        case GateKind::RY:
            return embed(num_qubits, {{gate.target, ry2(ang[0])}});
        case GateKind::RZ:
            return embed(num_qubits, {{gate.target, rz2(ang[0])}});
        case GateKind::RotZYZ:
            return embed(num_qubits, {{gate.target, rot_zyz2(ang[0], ang[1], ang[2])}});
        case GateKind::CNOT:
            return add(embed(num_qubits, {{gate.control, proj0()}}),
                       embed(num_qubits, {{gate.control, proj1()}, {gate.target, pauli_x()}}));
        case GateKind::CRX:
            return add(embed(num_qubits, {{gate.control, proj0()}}),
                       embed(num_qubits, {{gate.control, proj1()}, {gate.target, rx2(ang[0])}}));
        case GateKind::CRZ:
            return add(embed(num_qubits, {{gate.control, proj0()}}),
                       embed(num_qubits, {{gate.control, proj1()}, {gate.target, rz2(ang[0])}}));
        case GateKind::CPhase: {
            CMat rest = add(embed(num_qubits, {{gate.control, proj0()}}),
                            embed(num_qubits, {{gate.control, proj1()}, {gate.target, proj0()}}));
            CMat ph = scale(
                embed(num_qubits, {{gate.control, proj1()}, {gate.target, proj1()}}),
                std::exp(kI * ang[0]));
            return add(rest, ph);
        }
        case GateKind::SWAP: {
            CMat sum = embed(num_qubits, {});
            sum = add(sum, embed(num_qubits, {{gate.target, pauli_x()}, {gate.target2, pauli_x()}}));
            sum = add(sum, embed(num_qubits, {{gate.target, pauli_y()}, {gate.target2, pauli_y()}}));
            sum = add(sum, embed(num_qubits, {{gate.target, pauli_z()}, {gate.target2, pauli_z()}}));
            return scale(sum, 0.5);
        }
    }
    throw structural_error("dense_gate_matrix: unknown gate kind");
}

CMat dense_unitary_oracle(const Circuit& circuit, std::span<const double> params) {
    if (circuit.num_qubits > kMaxOracleQubits)
        throw capacity_error("dense_unitary_oracle: circuit has " +
                             std::to_string(circuit.num_qubits) + " qubits, limit is " +
                             std::to_string(kMaxOracleQubits));
    circuit.validate();
    CMat u = CMat::identity(std::size_t{1} << circuit.num_qubits);
    for (const Gate& g : circuit.gates) u = cmat_mul(dense_gate_matrix(g, circuit.num_qubits, params), u);
    return u;
}

}  // namespace sasq::qsim

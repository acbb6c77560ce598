#include "sasq/qsim/apply.hpp"

#include <cmath>

namespace sasq::qsim {

namespace {

inline double* raw(QuantumState& s) {
    // std::complex<double> is layout-compatible with double[2].
    return reinterpret_cast<double*>(s.amplitudes.data());
}

inline std::size_t mask_of(const QuantumState& s, int qubit) {
    return std::size_t{1} << bit_position(s.num_qubits, qubit);
}

}  // namespace

Mat2 gate_local_matrix(GateKind kind, const std::array<double, 3>& angles) {
    Mat2 u;
    switch (kind) {
        case GateKind::H: {
            const double s = 1.0 / std::sqrt(2.0);
            u.r00 = s; u.r01 = s; u.r10 = s; u.r11 = -s;
            return u;
        }
        case GateKind::RX:
        case GateKind::CRX: {
            const double c = std::cos(angles[0] / 2.0), s = std::sin(angles[0] / 2.0);
            u.r00 = c; u.r11 = c;
            u.i01 = -s; u.i10 = -s;
            return u;
        }
        case GateKind::RY: {
            const double c = std::cos(angles[0] / 2.0), s = std::sin(angles[0] / 2.0);
            u.r00 = c; u.r01 = -s; u.r10 = s; u.r11 = c;
            return u;
        }
        case GateKind::RZ:
        case GateKind::CRZ: {
            const double c = std::cos(angles[0] / 2.0), s = std::sin(angles[0] / 2.0);
            u.r00 = c; u.i00 = -s;
            u.r11 = c; u.i11 = s;
            return u;
        }
        case GateKind::RotZYZ: {
            // RZ(alpha) RY(beta) RZ(gamma)
            const double cb = std::cos(angles[1] / 2.0), sb = std::sin(angles[1] / 2.0);
            const double sum = (angles[0] + angles[2]) / 2.0, dif = (angles[0] - angles[2]) / 2.0;
            u.r00 = cb * std::cos(sum); u.i00 = -cb * std::sin(sum);
            u.r01 = -sb * std::cos(dif); u.i01 = sb * std::sin(dif);
            u.r10 = sb * std::cos(dif); u.i10 = sb * std::sin(dif);
            u.r11 = cb * std::cos(sum); u.i11 = cb * std::sin(sum);
            return u;
        }
        default:
            throw structural_error("gate_local_matrix: gate has no local 2x2 form");
    }
}

Mat2 mat2_mul(const Mat2& a, const Mat2& b) {
    Mat2 o;
    o.r00 = a.r00 * b.r00 - a.i00 * b.i00 + a.r01 * b.r10 - a.i01 * b.i10;
    o.i00 = a.r00 * b.i00 + a.i00 * b.r00 + a.r01 * b.i10 + a.i01 * b.r10;
    o.r01 = a.r00 * b.r01 - a.i00 * b.i01 + a.r01 * b.r11 - a.i01 * b.i11;
    o.i01 = a.r00 * b.i01 + a.i00 * b.r01 + a.r01 * b.i11 + a.i01 * b.r11;
    o.r10 = a.r10 * b.r00 - a.i10 * b.i00 + a.r11 * b.r10 - a.i11 * b.i10;
    o.i10 = a.r10 * b.i00 + a.i10 * b.r00 + a.r11 * b.i10 + a.i11 * b.r10;
    o.r11 = a.r10 * b.r01 - a.i10 * b.i01 + a.r11 * b.r11 - a.i11 * b.i11;
    o.i11 = a.r10 * b.i01 + a.i10 * b.r01 + a.r11 * b.i11 + a.i11 * b.r11;
    return o;
}

Mat2 mat2_adjoint(const Mat2& a) {
    Mat2 o;
    o.r00 = a.r00; o.i00 = -a.i00;
    o.r01 = a.r10; o.i01 = -a.i10;
    o.r10 = a.r01; o.i10 = -a.i01;
    o.r11 = a.r11; o.i11 = -a.i11;
    return o;
}

void apply_1q(QuantumState& state, int target, const Mat2& u) {
    const std::size_t stride = mask_of(state, target);
    const std::size_t n = state.dim();
    double* p = raw(state);
    if (u.i00 == 0 && u.i01 == 0 && u.i10 == 0 && u.i11 == 0) {
        // real matrix (H, RY): half the multiplies
        for (std::size_t base = 0; base < n; base += stride << 1) {
            for (std::size_t i = base; i < base + stride; ++i) {
                const std::size_t j = i + stride;
                const double ar = p[2 * i], ai = p[2 * i + 1];
                const double br = p[2 * j], bi = p[2 * j + 1];
                p[2 * i] = u.r00 * ar + u.r01 * br;
                p[2 * i + 1] = u.r00 * ai + u.r01 * bi;
                p[2 * j] = u.r10 * ar + u.r11 * br;
                p[2 * j + 1] = u.r10 * ai + u.r11 * bi;
            }
        }
        return;
    }
    for (std::size_t base = 0; base < n; base += stride << 1) {
        for (std::size_t i = base; i < base + stride; ++i) {
            const std::size_t j = i + stride;
            const double ar = p[2 * i], ai = p[2 * i + 1];
            const double br = p[2 * j], bi = p[2 * j + 1];
            p[2 * i] = u.r00 * ar - u.i00 * ai + u.r01 * br - u.i01 * bi;
            p[2 * i + 1] = u.r00 * ai + u.i00 * ar + u.r01 * bi + u.i01 * br;
            p[2 * j] = u.r10 * ar - u.i10 * ai + u.r11 * br - u.i11 * bi;
            p[2 * j + 1] = u.r10 * ai + u.i10 * ar + u.r11 * bi + u.i11 * br;
        }
    }
}

void apply_controlled_1q(QuantumState& state, int control, int target, const Mat2& u) {
    const std::size_t cmask = mask_of(state, control);
    const std::size_t tmask = mask_of(state, target);
    const std::size_t n = state.dim();
    double* p = raw(state);
    for (std::size_t i = 0; i < n; ++i) {
        if ((i & cmask) == 0 || (i & tmask) != 0) continue;
        const std::size_t j = i + tmask;
        const double ar = p[2 * i], ai = p[2 * i + 1];
        const double br = p[2 * j], bi = p[2 * j + 1];
        p[2 * i] = u.r00 * ar - u.i00 * ai + u.r01 * br - u.i01 * bi;
        p[2 * i + 1] = u.r00 * ai + u.i00 * ar + u.r01 * bi + u.i01 * br;
        p[2 * j] = u.r10 * ar - u.i10 * ai + u.r11 * br - u.i11 * bi;
        p[2 * j + 1] = u.r10 * ai + u.i10 * ar + u.r11 * bi + u.i11 * br;
    }
}

void apply_cnot(QuantumState& state, int control, int target) {
    const std::size_t cmask = mask_of(state, control);
    const std::size_t tmask = mask_of(state, target);
    const std::size_t n = state.dim();
    auto* a = state.amplitudes.data();
    for (std::size_t i = 0; i < n; ++i) {
        if ((i & cmask) != 0 && (i & tmask) == 0) std::swap(a[i], a[i + tmask]);
    }
}

void apply_swap(QuantumState& state, int qa, int qb) {
    const std::size_t ma = mask_of(state, qa);
    const std::size_t mb = mask_of(state, qb);
    const std::size_t n = state.dim();
    auto* a = state.amplitudes.data();
    for (std::size_t i = 0; i < n; ++i) {
        if ((i & ma) != 0 && (i & mb) == 0) std::swap(a[i], a[(i & ~ma) | mb]);
    }
}

void apply_cphase(QuantumState& state, int qa, int qb, double angle) {
    const std::size_t both = mask_of(state, qa) | mask_of(state, qb);
    const double cr = std::cos(angle), ci = std::sin(angle);
    const std::size_t n = state.dim();
    double* p = raw(state);
    for (std::size_t i = 0; i < n; ++i) {
        if ((i & both) != both) continue;
        const double ar = p[2 * i], ai = p[2 * i + 1];
        p[2 * i] = cr * ar - ci * ai;
        p[2 * i + 1] = cr * ai + ci * ar;
    }
}

void apply_gate(QuantumState& state, const Gate& gate, std::span<const double> params) {
    validate_gate(gate, state.num_qubits, static_cast<int>(params.size()));
    switch (gate.kind) {
        case GateKind::CNOT:
            apply_cnot(state, gate.control, gate.target);
            return;
        case GateKind::SWAP:
            apply_swap(state, gate.target, gate.target2);
            return;
        case GateKind::CPhase:
            apply_cphase(state, gate.control, gate.target, gate.angles(params)[0]);
            return;
        case GateKind::CRX:
        case GateKind::CRZ:
            apply_controlled_1q(state, gate.control, gate.target,
                                gate_local_matrix(gate.kind, gate.angles(params)));
            return;
        default:
            apply_1q(state, gate.target, gate_local_matrix(gate.kind, gate.angles(params)));
            return;
    }
}

void apply_circuit(QuantumState& state, const Circuit& circuit, std::span<const double> params) {
    if (circuit.num_qubits != state.num_qubits)
        throw structural_error("apply_circuit: register width mismatch");
    for (const Gate& g : circuit.gates) apply_gate(state, g, params);
}

}  // namespace sasq::qsim

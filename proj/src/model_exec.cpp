#include "sasq/model/exec.hpp"

#include <cmath>

#include "sasq/qsim/qft.hpp"

namespace sasq::model {

using qsim::Gate;
using qsim::QuantumState;

QuadLocal quad_local(std::span<const double> a) {
    using qsim::gate_local_matrix;
    using qsim::GateKind;
    using qsim::mat2_mul;
    const qsim::Mat2 rxa = gate_local_matrix(GateKind::RX, {a[0], 0, 0});
    const qsim::Mat2 rxb = gate_local_matrix(GateKind::RX, {a[1], 0, 0});
    const qsim::Mat2 rzc = gate_local_matrix(GateKind::RZ, {a[2], 0, 0});
    const qsim::Mat2 rzd = gate_local_matrix(GateKind::RZ, {a[3], 0, 0});
    QuadLocal q;
    q.control0 = mat2_mul(rzd, rxb);
    q.control1 = mat2_mul(rzd, mat2_mul(rzc, mat2_mul(rxb, rxa)));
    return q;
}

void apply_quad(QuantumState& state, int control, int readout, const QuadLocal& q) {
    if (qsim::bit_position(state.num_qubits, readout) != 0)
        throw structural_error("apply_quad: readout must be the last qubit");
    const std::size_t cmask = std::size_t{1} << qsim::bit_position(state.num_qubits, control);
    const std::size_t n = state.dim();
    auto* p = reinterpret_cast<double*>(state.amplitudes.data());
    for (std::size_t i = 0; i < n; i += 2) {
        const qsim::Mat2& u = (i & cmask) ? q.control1 : q.control0;
        const double ar = p[2 * i], ai = p[2 * i + 1];
        const double br = p[2 * i + 2], bi = p[2 * i + 3];
        p[2 * i] = u.r00 * ar - u.i00 * ai + u.r01 * br - u.i01 * bi;
        p[2 * i + 1] = u.r00 * ai + u.i00 * ar + u.r01 * bi + u.i01 * br;
        p[2 * i + 2] = u.r10 * ar - u.i10 * ai + u.r11 * br - u.i11 * bi;
        p[2 * i + 3] = u.r10 * ai + u.i10 * ar + u.r11 * bi + u.i11 * br;
    }
}

CompiledModel compile_model(const ModelConfig& config) {
    CompiledModel cm;
    cm.config = config;
    cm.circuit = build_circuit(config);
    cm.slots = slot_layout(config);

    const int q_data = config.data_qubits();
    int gi = 0;  // cursor into cm.circuit.gates

    const int plain_prefix =
        int(cm.circuit.gates.size()) - (config.use_perceptron ? 4 * q_data : 0);
    for (; gi < plain_prefix; ++gi) {
        Segment s;
        s.kind = Segment::Kind::PlainGate;
        s.gate = cm.circuit.gates[gi];
        s.gate_begin = gi;
        s.gate_end = gi + 1;
        cm.segments.push_back(s);
    }

    if (config.use_perceptron) {
        for (int i = 0; i < q_data; ++i) {
            Segment s;
            s.kind = Segment::Kind::QuadBlock;
            s.quad_control = i;
            s.quad_slot = cm.slots.kernel + 4 * i;
            s.gate_begin = gi;
            s.gate_end = gi + 4;
            gi += 4;
            cm.segments.push_back(s);
        }
    }

    if (gi != int(cm.circuit.gates.size()))
        throw structural_error("compile_model: segment plan does not cover the circuit");

    // First segment holding trainable structure: encoding token gates when the
    // embedder trains through angle encoding, otherwise the first kernel or
    // perceptron slot.
    int first = int(cm.segments.size());
    for (int i = 0; i < int(cm.segments.size()); ++i) {
        const Segment& s = cm.segments[i];
        const bool trainable_gate =
            s.kind == Segment::Kind::PlainGate && s.gate.parameterized() &&
            (s.gate.param_index < cm.slots.kernel + cm.slots.perceptron ||
             config.trainable_embedder);
        if (trainable_gate || s.kind == Segment::Kind::QuadBlock) {
            first = i;
            break;
        }
    }
    cm.first_trainable_segment = first;
    return cm;
}

std::vector<double> circuit_params_for(const CompiledModel& cm, const ModelParams& params,
                                       const embed::PatchSequence& tokens) {
    std::vector<double> cp;
    cp.reserve(cm.slots.total());
    cp.insert(cp.end(), params.kernel_angles.begin(), params.kernel_angles.end());
    cp.insert(cp.end(), params.perceptron_angles.begin(), params.perceptron_angles.end());
    if (cm.slots.tokens > 0) cp.insert(cp.end(), tokens.tokens.begin(), tokens.tokens.end());
    if (int(cp.size()) != cm.slots.total())
        throw structural_error("circuit_params_for: slot count mismatch");
    return cp;
}

QuantumState initial_state(const CompiledModel& cm, const embed::PatchSequence& tokens) {
    if (cm.config.encoding == Encoding::Angle)
        return qsim::init_state(cm.config.total_qubits());
    return embed::inject_amplitudes(embed::amplitude_encode(tokens), cm.config.num_readout);
}

void run_plan(const CompiledModel& cm, QuantumState& state, std::span<const double> cp) {
    for (const Segment& s : cm.segments) {
        if (s.kind == Segment::Kind::PlainGate)
            qsim::apply_gate(state, s.gate, cp);
        else
            apply_quad(state, s.quad_control, state.num_qubits - 1,
                       quad_local(cp.subspan(s.quad_slot, 4)));
    }
}

ForwardResult forward_compiled(const CompiledModel& cm, const ModelParams& params,
                               const embed::Image& image) {
    const auto patches = embed::extract_patches(image, cm.config.patch_size);
    const embed::PatchSequence tokens =
        embed::project_patches(patches, embedder_view(cm.config, params));
    const std::vector<double> cp = circuit_params_for(cm, params, tokens);
    QuantumState state = initial_state(cm, tokens);
    run_plan(cm, state, cp);
    ForwardResult r;
    r.expectation = qsim::expectation_z(state, cm.config.readout_qubit());
    r.logit = params.output_weight * r.expectation + params.output_bias;
    return r;
}

ForwardResult forward(const ModelConfig& config, const ModelParams& params,
                      const embed::Image& image) {
    return forward_compiled(compile_model(config), params, image);
}

}  // namespace sasq::model

#pragma once

#include <span>

#include "sasq/model/model.hpp"
#include "sasq/qsim/apply.hpp"

namespace sasq::model {

// Compiled execution plan for a fixed config: the authoritative gate list
// plus a segment sequence the runtime walks. A segment is either one circuit
// gate or one perceptron quad (CRX, RX, CRZ, RZ on a (control, readout)
// pair), which both the forward pass and the adjoint sweep handle as a unit.
struct Segment {
    enum class Kind { PlainGate, QuadBlock };
    Kind kind = Kind::PlainGate;
    qsim::Gate gate;        // PlainGate
    int quad_control = -1;  // QuadBlock
    int quad_slot = -1;     // QuadBlock: first of 4 consecutive slots
    int gate_begin = 0;     // indices into circuit.gates covered by this segment
    int gate_end = 0;
};

struct CompiledModel {
    ModelConfig config;
    qsim::Circuit circuit;
    SlotLayout slots;
    std::vector<Segment> segments;
    // Index of the first segment containing trainable slots; the adjoint
    // sweep stops there unless amplitude-encoding token gradients force a
    // full sweep.
    int first_trainable_segment = 0;
};

CompiledModel compile_model(const ModelConfig& config);

// Runs the compiled plan on a prepared initial state. circuit_params must
// cover slots.total() (token slots included for angle encoding).
void run_plan(const CompiledModel& cm, qsim::QuantumState& state,
              std::span<const double> circuit_params);

// Builds the per-sample circuit parameter vector [kernel, perceptron, tokens].
std::vector<double> circuit_params_for(const CompiledModel& cm, const ModelParams& params,
                                       const embed::PatchSequence& tokens);

// Initial state for a token sequence: |0...0> for angle encoding (tokens are
// applied as gates), the injected product state for amplitude encoding.
qsim::QuantumState initial_state(const CompiledModel& cm, const embed::PatchSequence& tokens);

// Forward pass on a precompiled model.
ForwardResult forward_compiled(const CompiledModel& cm, const ModelParams& params,
                               const embed::Image& image);

// Block-diagonal view of a perceptron quad: the readout-qubit action for each
// value of the control qubit. The readout is the last qubit, so both blocks
// sweep contiguous amplitude pairs.
struct QuadLocal {
    qsim::Mat2 control0;
    qsim::Mat2 control1;
};
QuadLocal quad_local(std::span<const double> angles4);
void apply_quad(qsim::QuantumState& state, int control, int readout, const QuadLocal& q);

}  // namespace sasq::model

#include "sasq/model/model.hpp"
#include "sasq/qsim/qft.hpp"

namespace sasq::model {

using qsim::Gate;

std::vector<Gate> kernel_layer_fragment(int q_data, int first_slot) {
    if (q_data < 1) throw structural_error("kernel_layer_fragment: need at least one data qubit");
    std::vector<Gate> gates;
    for (int i = 0; i < q_data; ++i)
        gates.push_back(Gate::rot_zyz_slot(i, first_slot + 3 * i));
    if (q_data >= 2) {
        for (int i = 0; i + 1 < q_data; ++i) gates.push_back(Gate::cnot(i, i + 1));
        gates.push_back(Gate::cnot(q_data - 1, 0));
    }
    return gates;
}

std::vector<Gate> perceptron_fragment(int q_data, int readout, int first_slot) {
    if (readout < q_data && readout >= 0)
        throw structural_error("perceptron_fragment: readout collides with a data qubit");
    std::vector<Gate> gates;
    for (int i = 0; i < q_data; ++i) {
        const int s = first_slot + 4 * i;
        gates.push_back(Gate::crx_slot(i, readout, s));
        gates.push_back(Gate::rx_slot(readout, s + 1));
        gates.push_back(Gate::crz_slot(i, readout, s + 2));
        gates.push_back(Gate::rz_slot(readout, s + 3));
    }
    return gates;
}

SlotLayout slot_layout(const ModelConfig& config) {
    SlotLayout s;
    s.kernel = config.kernel_angle_count();
    s.perceptron = config.perceptron_angle_count();
    s.token_base = s.kernel + s.perceptron;
    s.tokens = config.encoding == Encoding::Angle ? config.num_patches * config.embed_dim : 0;
    return s;
}

qsim::Circuit build_circuit(const ModelConfig& config) {
    config.validate();
    const SlotLayout slots = slot_layout(config);
    const int q_data = config.data_qubits();
    const int v = config.qubits_per_register();

    qsim::Circuit c;
    c.num_qubits = config.total_qubits();
    c.num_params = slots.total();

    if (config.encoding == Encoding::Angle) {
        for (int t = 0; t < slots.tokens; ++t)
            c.gates.push_back(Gate::ry_slot(t, slots.token_base + t));
    }
    // amplitude encoding contributes no gates: the register is injected directly

    int slot = 0;
    for (int d = 0; d < config.depth; ++d) {
        if (config.use_qft)
            for (int s = 0; s < config.num_patches; ++s)
                for (const Gate& g : qsim::qft_fragment({s * v, v})) c.gates.push_back(g);
        for (int layer = 0; layer < config.kernel_layers; ++layer) {
            for (const Gate& g : kernel_layer_fragment(q_data, slot)) c.gates.push_back(g);
            slot += 3 * q_data;
        }
        if (config.use_qft)
            for (int s = 0; s < config.num_patches; ++s)
                for (const Gate& g : qsim::iqft_fragment({s * v, v})) c.gates.push_back(g);
    }

    c.gates.push_back(Gate::h(config.readout_qubit()));
    if (config.use_perceptron)
        for (const Gate& g : perceptron_fragment(q_data, config.readout_qubit(), slots.kernel))
            c.gates.push_back(g);

    c.validate();
    return c;
}

}  // namespace sasq::model

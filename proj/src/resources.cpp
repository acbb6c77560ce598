#include <cmath>
#include <sstream>

#include "sasq/resources/resources.hpp"

namespace sasq::resources {

namespace {

int ceil_log2(int n) {
    int bits = 0;
    while ((1 << bits) < n) ++bits;
    return bits;
}

long long qft_gate_count(int b) {
    // Hadamards + controlled phases + bit-reversal swaps
    return b + (long long)b * (b - 1) / 2 + b / 2;
}

}  // namespace

ResourceEstimate estimate(const model::ModelConfig& config, int classes,
                          std::optional<int> approx_prep_depth) {
    if (classes < 2) throw structural_error("estimate: need at least two classes");
    if (config.num_patches < 1 || config.embed_dim < 1 || config.kernel_layers < 0 ||
        config.depth < 1)
        throw structural_error("estimate: malformed config");
    if (config.encoding == model::Encoding::Amplitude &&
        (config.embed_dim & (config.embed_dim - 1)) != 0)
        throw structural_error("estimate: amplitude encoding needs a power-of-two embed_dim");

    const bool angle = config.encoding == model::Encoding::Angle;
    const int n = config.num_patches;
    const int eps = config.embed_dim;
    const int reg_width = angle ? eps : ceil_log2(eps);
    const int q_data = n * reg_width;
    const int readout = ceil_log2(classes);

    ResourceEstimate r;
    r.data_qubits = q_data;
    r.readout_qubits = readout;
    r.qubits = q_data + readout;

    r.kernel.params = (long long)config.depth * config.kernel_layers * 3 * q_data;
    r.perceptron.params = config.use_perceptron ? 4LL * q_data * readout : 0;
    r.head.params = 2;
    r.embedding.params =
        config.trainable_embedder
            ? (long long)config.patch_size * config.patch_size * eps + (long long)n * eps
            : 0;
    r.params = r.kernel.params + r.perceptron.params + r.head.params + r.embedding.params;

    r.embedding.gates = angle ? (long long)n * eps : 0;
    r.qft.gates = config.use_qft ? 2LL * config.depth * n * qft_gate_count(reg_width) : 0;
    const long long ring = q_data >= 2 ? q_data : 0;
    r.kernel.gates = (long long)config.depth * config.kernel_layers * (q_data + ring);
    r.perceptron.gates = 1 + (config.use_perceptron ? 4LL * q_data * readout : 0);
    r.gates_exact =
        r.embedding.gates + r.qft.gates + r.kernel.gates + r.perceptron.gates + r.head.gates;

    if (!angle) {
        r.amp_prep_worst_case = (long long)n * (1LL << (2 * reg_width));
        if (approx_prep_depth)
            r.amp_prep_approx = (long long)n * reg_width * *approx_prep_depth;
    }

    std::ostringstream qs, ps, gs;
    if (angle) {
        qs << "O(N*eps + log2 c) = O(" << n << "*" << eps << " + " << readout << ")";
        ps << "O(N*eps*(l + log2 c)) = O(" << n << "*" << eps << "*(" << config.kernel_layers
           << " + " << readout << "))";
        gs << "O(N*eps*log(c*N*eps)) with the O(q log q) approximate QFT; embedding depth O(1)";
    } else {
        qs << "O(N*log2(eps) + log2 c) = O(" << n << "*" << reg_width << " + " << readout << ")";
        ps << "O(N*log2(eps)*(l + log2 c)) = O(" << n << "*" << reg_width << "*("
           << config.kernel_layers << " + " << readout << "))";
        gs << "O(2^q_data + N*log2(eps)*log(c*N*log2(eps))) worst-case state preparation";
        if (approx_prep_depth)
            gs << "; O(N*log2(eps)*(b + log(c*N*log2(eps)))) at preparation depth b="
               << *approx_prep_depth;
    }
    r.qubits_asymptotic = qs.str();
    r.params_asymptotic = ps.str();
    r.gates_asymptotic = gs.str();
    return r;
}

std::string ResourceEstimate::report() const {
    std::ostringstream os;
    os << "qubits:            " << qubits << " (" << data_qubits << " data + " << readout_qubits
       << " readout)\n";
    os << "parameters:        " << params << "\n";
    os << "  embedding        " << embedding.params << "\n";
    os << "  kernel           " << kernel.params << "\n";
    os << "  perceptron       " << perceptron.params << "\n";
    os << "  output head      " << head.params << "\n";
    os << "gates (emitted):   " << gates_exact << "\n";
    os << "  encoding         " << embedding.gates << "\n";
    os << "  qft blocks       " << qft.gates << "\n";
    os << "  kernel           " << kernel.gates << "\n";
    os << "  readout+perc.    " << perceptron.gates << "\n";
    if (amp_prep_worst_case > 0) {
        os << "amplitude preparation (not emitted; per-register hardware cost):\n";
        os << "  worst case       " << amp_prep_worst_case << " gates across " << data_qubits
           << " data qubits\n";
        if (amp_prep_approx)
            os << "  approx depth     " << *amp_prep_approx << " gates\n";
    }
    os << "qubit scaling:     " << qubits_asymptotic << "\n";
    os << "parameter scaling: " << params_asymptotic << "\n";
    os << "gate scaling:      " << gates_asymptotic << "\n";
    return os.str();
}

std::string ResourceEstimate::key_values() const {
    std::ostringstream os;
    os << "qubits " << qubits << "\n";
    os << "data_qubits " << data_qubits << "\n";
    os << "readout_qubits " << readout_qubits << "\n";
    os << "params " << params << "\n";
    os << "params_embedding " << embedding.params << "\n";
    os << "params_kernel " << kernel.params << "\n";
    os << "params_perceptron " << perceptron.params << "\n";
    os << "params_head " << head.params << "\n";
    os << "gates_exact " << gates_exact << "\n";
    os << "gates_encoding " << embedding.gates << "\n";
    os << "gates_qft " << qft.gates << "\n";
    os << "gates_kernel " << kernel.gates << "\n";
    os << "gates_perceptron " << perceptron.gates << "\n";
    os << "amp_prep_worst_case " << amp_prep_worst_case << "\n";
    if (amp_prep_approx) os << "amp_prep_approx " << *amp_prep_approx << "\n";
    return os.str();
}

}  // namespace sasq::resources

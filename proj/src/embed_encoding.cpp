#include <cmath>
#include <string>

#include "sasq/embed/embed.hpp"

namespace sasq::embed {

std::vector<qsim::Gate> angle_encode(const PatchSequence& tokens) {
    const int q_data = tokens.num_patches * tokens.embed_dim;
    if (q_data > qsim::kMaxQubits)
        throw capacity_error("angle_encode: " + std::to_string(q_data) +
                             " data qubits exceed the simulator bound");
    std::vector<qsim::Gate> gates;
    gates.reserve(q_data);
    for (int s = 0; s < tokens.num_patches; ++s)
        for (int j = 0; j < tokens.embed_dim; ++j)
            gates.push_back(qsim::Gate::ry(s * tokens.embed_dim + j, tokens.at(s, j)));
    return gates;
}

std::vector<std::vector<double>> amplitude_encode(const PatchSequence& tokens) {
    const int eps = tokens.embed_dim;
    if (eps < 1 || (eps & (eps - 1)) != 0)
        throw structural_error("amplitude_encode: embed_dim must be a power of two");
    std::vector<std::vector<double>> registers;
    registers.reserve(tokens.num_patches);
    for (int s = 0; s < tokens.num_patches; ++s) {
        std::vector<double> reg(eps);
        double norm2 = 0.0;
        for (int j = 0; j < eps; ++j) {
            reg[j] = tokens.at(s, j);
            norm2 += reg[j] * reg[j];
        }
        if (norm2 <= 0.0)
            throw degenerate_input_error("amplitude_encode: token " + std::to_string(s) +
                                         " has zero norm");
        const double inv = 1.0 / std::sqrt(norm2);
        for (double& v : reg) v *= inv;
        registers.push_back(std::move(reg));
    }
    return registers;
}

qsim::QuantumState inject_amplitudes(const std::vector<std::vector<double>>& registers,
                                     int extra_qubits) {
    if (registers.empty()) throw structural_error("inject_amplitudes: no registers");
    int q_data = 0;
    for (const auto& reg : registers) {
        const std::size_t dim = reg.size();
        if (dim < 2 || (dim & (dim - 1)) != 0)
            throw structural_error("inject_amplitudes: register dimension must be a power of two");
        int bits = 0;
        while ((std::size_t{1} << bits) < dim) ++bits;
        q_data += bits;
    }
    const int total = q_data + extra_qubits;
    qsim::QuantumState state = qsim::init_state(total);

    // Product over registers; register 0 occupies the most significant bits.
    // Trailing extra qubits stay |0>, so only indices with those bits clear
    // are populated.
    std::vector<std::size_t> dims;
    for (const auto& reg : registers) dims.push_back(reg.size());
    const std::size_t data_dim = std::size_t{1} << q_data;
    for (std::size_t k = 0; k < data_dim; ++k) {
        double coeff = 1.0;
        std::size_t rest = k;
        for (std::size_t r = registers.size(); r-- > 0;) {
            const std::size_t idx = rest % dims[r];
            rest /= dims[r];
            coeff *= registers[r][idx];
        }
        state.amplitudes[k << extra_qubits] = qsim::cplx{coeff, 0.0};
    }
    return state;
}

}  // namespace sasq::embed

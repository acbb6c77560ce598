#pragma once

#include <optional>
#include <string>

#include "sasq/model/model.hpp"

namespace sasq::resources {

struct StageCounts {
    long long params = 0;
    long long gates = 0;
};

// Static qubit / parameter / gate accounting for one configuration.
//
// `gates_exact` counts the gate objects the circuit builder emits (amplitude
// preparation is injected, not gated, and therefore contributes zero there;
// its hardware cost is reported separately). `*_asymptotic` strings carry the
// scaling expressions, including the approximate-QFT variant, which the
// simulator deliberately does not implement.
struct ResourceEstimate {
    int qubits = 0;
    int data_qubits = 0;
    int readout_qubits = 0;
    long long params = 0;
    long long gates_exact = 0;

    StageCounts embedding;  // embedder params when trainable; encoding gates
    StageCounts qft;
    StageCounts kernel;
    StageCounts perceptron;  // includes the readout Hadamard
    StageCounts head;        // scalar affine output layer

    // Worst-case per-register amplitude preparation gate count (2^(2v) per
    // patch register, prepared independently), 0 for angle encoding.
    long long amp_prep_worst_case = 0;
    // With an approximation depth b: O(N*v*b) preparation gates.
    std::optional<long long> amp_prep_approx;

    std::string qubits_asymptotic;
    std::string params_asymptotic;
    std::string gates_asymptotic;

    std::string report() const;     // human-readable block
    std::string key_values() const; // machine-readable "key value" lines
};

// classes >= 2; approx_prep_depth, when given, adds the approximate
// state-preparation figure for amplitude encoding.
ResourceEstimate estimate(const model::ModelConfig& config, int classes,
                          std::optional<int> approx_prep_depth = std::nullopt);

}  // namespace sasq::resources

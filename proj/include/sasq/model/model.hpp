#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "sasq/embed/embed.hpp"
#include "sasq/qsim/gate.hpp"
#include "sasq/qsim/state.hpp"

namespace sasq::model {

enum class Encoding { Angle, Amplitude };

const char* encoding_name(Encoding e);
Encoding encoding_from_name(const std::string& name);

// Static description of one classifier instance. The circuit is
// encoding -> depth x [QFT per register, kernel layers, inverse QFT per
// register] -> H on readout -> perceptron -> <Z> on the readout qubit,
// with the readout as the last qubit.
struct ModelConfig {
    Encoding encoding = Encoding::Angle;
    int image_height = 0;
    int image_width = 0;
    int patch_size = 0;
    int num_patches = 0;  // derived from image and patch size; kept explicit
    int embed_dim = 0;
    int kernel_layers = 0;     // l
    int depth = 1;             // stacked QFT-kernel-IQFT blocks
    bool use_qft = true;       // ablation switch
    bool use_perceptron = true;  // ablation switch
    int num_readout = 1;       // fixed at 1 (binary task)
    bool trainable_embedder = false;

    // Qubits per patch register: embed_dim for angle, log2(embed_dim) for
    // amplitude encoding.
    int qubits_per_register() const;
    int data_qubits() const { return num_patches * qubits_per_register(); }
    int total_qubits() const { return data_qubits() + num_readout; }
    int readout_qubit() const { return data_qubits(); }

    int kernel_angle_count() const { return depth * kernel_layers * data_qubits() * 3; }
    int perceptron_angle_count() const { return use_perceptron ? 4 * data_qubits() : 0; }
    int embedder_parameter_count() const;

    void validate() const;
};

// Expected patch count for an image under this patch size (after padding).
int patches_for(int image_height, int image_width, int patch_size);

// All trainable values plus the (possibly frozen) embedder matrices.
struct ModelParams {
    std::vector<double> kernel_angles;      // depth * l * q_data * 3
    std::vector<double> perceptron_angles;  // 4 * q_data (0 when ablated)
    double output_weight = 1.0;
    double output_bias = 0.0;
    std::vector<double> projection;  // (p^2) x eps, row-major
    std::vector<double> positional;  // N x eps, row-major
};

// Kernel/perceptron angles from U[0, 2*pi), w=1, b=0, embedder projection
// from U[-1/p, 1/p], positional zero. Deterministic in the seed.
ModelParams init_params(const ModelConfig& config, std::uint64_t seed);

// Number of trainable parameters (embedder included only when trainable).
int parameter_count(const ModelConfig& config);

// Flat optimizer vector: [kernel, perceptron, w, b, (projection, positional)].
std::vector<double> to_flat(const ModelConfig& config, const ModelParams& params);
void apply_flat(const ModelConfig& config, std::span<const double> flat, ModelParams& params);

// Rotation layer followed by the CNOT ring over all data qubits; 3 slots per
// qubit starting at first_slot. A single data qubit degenerates to the
// rotation alone.
std::vector<qsim::Gate> kernel_layer_fragment(int q_data, int first_slot);

// Per data qubit i: CRX(i -> readout), RX(readout), CRZ(i -> readout),
// RZ(readout); 4 slots per data qubit starting at first_slot.
std::vector<qsim::Gate> perceptron_fragment(int q_data, int readout, int first_slot);

// Full gate program. Parameter slots: kernel angles first, then perceptron
// angles, then (angle encoding only) one slot per token component.
qsim::Circuit build_circuit(const ModelConfig& config);

// Slot bookkeeping for build_circuit's parameter vector.
struct SlotLayout {
    int kernel = 0;        // [0, kernel)
    int perceptron = 0;    // [kernel, kernel + perceptron)
    int token_base = 0;    // angle encoding: [token_base, token_base + tokens)
    int tokens = 0;
    int total() const { return kernel + perceptron + tokens; }
};
SlotLayout slot_layout(const ModelConfig& config);

struct ForwardResult {
    double expectation = 0.0;  // <Z> on the readout qubit
    double logit = 0.0;        // w * expectation + b
};

// Embeds the image classically, runs the circuit and reads out.
ForwardResult forward(const ModelConfig& config, const ModelParams& params,
                      const embed::Image& image);

// sign(logit) with the tie at 0 mapped to +1.
int predict(double logit);

// The classical embedder view of the current parameters.
embed::PatchEmbedder embedder_view(const ModelConfig& config, const ModelParams& params);

}  // namespace sasq::model

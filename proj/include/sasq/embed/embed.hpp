#pragma once

#include <cstdint>
#include <vector>

#include "sasq/qsim/gate.hpp"
#include "sasq/qsim/state.hpp"
#include "sasq/util/matrix.hpp"

namespace sasq::embed {

// Grayscale image with pixel values in [0, 1], row-major.
struct Image {
    int height = 0;
    int width = 0;
    std::vector<double> pixels;

    double at(int r, int c) const { return pixels[std::size_t(r) * width + c]; }
    double& at(int r, int c) { return pixels[std::size_t(r) * width + c]; }
};

// Zero-pads the image up to the next multiple of patch_size (extra row/column
// on the bottom/right when the padding is odd), then emits non-overlapping
// patches in row-major order, each flattened row-major to patch_size^2 values.
std::vector<std::vector<double>> extract_patches(const Image& image, int patch_size);

// Token sequence: num_patches x embed_dim, row-major.
struct PatchSequence {
    int num_patches = 0;
    int embed_dim = 0;
    std::vector<double> tokens;

    double at(int s, int j) const { return tokens[std::size_t(s) * embed_dim + j]; }
    double& at(int s, int j) { return tokens[std::size_t(s) * embed_dim + j]; }
};

// Linear patch projection plus an additive positional term:
//   token_s = patch_s^T * projection + positional_s
struct PatchEmbedder {
    int patch_size = 0;
    int embed_dim = 0;
    int num_patches = 0;
    std::vector<double> projection;  // (patch_size^2) x embed_dim, row-major
    std::vector<double> positional;  // num_patches x embed_dim, row-major
    bool trainable = false;
};

// Projection drawn from U[-1/patch_size, 1/patch_size] (i.e. 1/sqrt(p^2)),
// positional initialized to zero.
PatchEmbedder make_embedder(int patch_size, int embed_dim, int num_patches, bool trainable,
                            std::uint64_t seed);

PatchSequence project_patches(const std::vector<std::vector<double>>& patches,
                              const PatchEmbedder& embedder);

// Angle encoding: one qubit per token component, RY(token value) acting on
// |0>; component (s, j) lands on qubit s*embed_dim + j. Throws capacity_error
// if the data register alone would exceed the simulator bound.
std::vector<qsim::Gate> angle_encode(const PatchSequence& tokens);

// Amplitude encoding: every token is L2-normalized into the amplitude vector
// of its own log2(embed_dim)-qubit register. Throws structural_error if
// embed_dim is not a power of two, degenerate_input_error on a zero token.
std::vector<std::vector<double>> amplitude_encode(const PatchSequence& tokens);

// Product state over the encoded registers, followed by `extra_qubits`
// trailing qubits in |0>.
qsim::QuantumState inject_amplitudes(const std::vector<std::vector<double>>& registers,
                                     int extra_qubits);

}  // namespace sasq::embed

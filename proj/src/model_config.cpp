#include <cmath>
#include <random>
#include <string>

#include "sasq/model/model.hpp"

namespace sasq::model {

const char* encoding_name(Encoding e) { return e == Encoding::Angle ? "angle" : "amplitude"; }

Encoding encoding_from_name(const std::string& name) {
    if (name == "angle") return Encoding::Angle;
    if (name == "amplitude") return Encoding::Amplitude;
    throw format_error("unknown encoding '" + name + "'");
}

int ModelConfig::qubits_per_register() const {
    if (encoding == Encoding::Angle) return embed_dim;
    int bits = 0;
    while ((1 << bits) < embed_dim) ++bits;
    return bits;
}

int ModelConfig::embedder_parameter_count() const {
    return patch_size * patch_size * embed_dim + num_patches * embed_dim;
}

int patches_for(int image_height, int image_width, int patch_size) {
    if (patch_size < 1) throw structural_error("patches_for: patch_size must be >= 1");
    const int rows = (image_height + patch_size - 1) / patch_size;
    const int cols = (image_width + patch_size - 1) / patch_size;
    return rows * cols;
}

void ModelConfig::validate() const {
    if (num_patches < 1) throw structural_error("config: num_patches must be >= 1");
    if (embed_dim < 1) throw structural_error("config: embed_dim must be >= 1");
    if (kernel_layers < 0) throw structural_error("config: kernel_layers must be >= 0");
    if (depth < 1) throw structural_error("config: depth must be >= 1");
    if (num_readout != 1) throw structural_error("config: only a single readout qubit is supported");
    if (patch_size < 1) throw structural_error("config: patch_size must be >= 1");
    if (image_height < 1 || image_width < 1)
        throw structural_error("config: image dimensions must be positive");
    if (patches_for(image_height, image_width, patch_size) != num_patches)
        throw structural_error("config: num_patches inconsistent with image and patch size");
    if (encoding == Encoding::Amplitude && (embed_dim & (embed_dim - 1)) != 0)
        throw structural_error("config: amplitude encoding needs a power-of-two embed_dim");
    if (total_qubits() > qsim::kMaxQubits)
        throw capacity_error("config: " + std::to_string(total_qubits()) +
                             " qubits exceed the simulator bound of " +
                             std::to_string(qsim::kMaxQubits));
}

ModelParams init_params(const ModelConfig& config, std::uint64_t seed) {
    config.validate();
    ModelParams p;
    std::mt19937_64 rng(seed);
    auto uniform01 = [&rng] { return double(rng() >> 11) * 0x1.0p-53; };
    constexpr double kTwoPi = 2.0 * 3.14159265358979323846;

    p.kernel_angles.resize(config.kernel_angle_count());
    for (double& a : p.kernel_angles) a = kTwoPi * uniform01();
    p.perceptron_angles.resize(config.perceptron_angle_count());
    for (double& a : p.perceptron_angles) a = kTwoPi * uniform01();
    p.output_weight = 1.0;
    p.output_bias = 0.0;

    const embed::PatchEmbedder e = embed::make_embedder(
        config.patch_size, config.embed_dim, config.num_patches, config.trainable_embedder, rng());
    p.projection = e.projection;
    p.positional = e.positional;
    return p;
}

int parameter_count(const ModelConfig& config) {
    int n = config.kernel_angle_count() + config.perceptron_angle_count() + 2;
    if (config.trainable_embedder) n += config.embedder_parameter_count();
    return n;
}

std::vector<double> to_flat(const ModelConfig& config, const ModelParams& params) {
    std::vector<double> flat;
    flat.reserve(parameter_count(config));
    flat.insert(flat.end(), params.kernel_angles.begin(), params.kernel_angles.end());
    flat.insert(flat.end(), params.perceptron_angles.begin(), params.perceptron_angles.end());
    flat.push_back(params.output_weight);
    flat.push_back(params.output_bias);
    if (config.trainable_embedder) {
        flat.insert(flat.end(), params.projection.begin(), params.projection.end());
        flat.insert(flat.end(), params.positional.begin(), params.positional.end());
    }
    if (int(flat.size()) != parameter_count(config))
        throw structural_error("to_flat: parameter census mismatch");
    return flat;
}

void apply_flat(const ModelConfig& config, std::span<const double> flat, ModelParams& params) {
    if (int(flat.size()) != parameter_count(config))
        throw structural_error("apply_flat: length does not match the parameter census");
    std::size_t off = 0;
    auto take = [&](std::vector<double>& dst) {
        std::copy(flat.begin() + off, flat.begin() + off + dst.size(), dst.begin());
        off += dst.size();
    };
    take(params.kernel_angles);
    take(params.perceptron_angles);
    params.output_weight = flat[off++];
    params.output_bias = flat[off++];
    if (config.trainable_embedder) {
        take(params.projection);
        take(params.positional);
    }
}

embed::PatchEmbedder embedder_view(const ModelConfig& config, const ModelParams& params) {
    embed::PatchEmbedder e;
    e.patch_size = config.patch_size;
    e.embed_dim = config.embed_dim;
    e.num_patches = config.num_patches;
    e.trainable = config.trainable_embedder;
    e.projection = params.projection;
    e.positional = params.positional;
    return e;
}

int predict(double logit) { return logit >= 0.0 ? 1 : -1; }

}  // namespace sasq::model

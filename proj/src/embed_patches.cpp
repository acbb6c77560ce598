#include <cmath>
#include <random>

#include "sasq/embed/embed.hpp"

namespace sasq::embed {

std::vector<std::vector<double>> extract_patches(const Image& image, int patch_size) {
    if (patch_size < 1) throw structural_error("extract_patches: patch_size must be >= 1");
    if (image.height < 1 || image.width < 1 ||
        image.pixels.size() != std::size_t(image.height) * image.width)
        throw structural_error("extract_patches: malformed image");

    const int pad_h = (patch_size - image.height % patch_size) % patch_size;
    const int pad_w = (patch_size - image.width % patch_size) % patch_size;
    const int top = pad_h / 2, left = pad_w / 2;
    const int height = image.height + pad_h, width = image.width + pad_w;
    const int rows = height / patch_size, cols = width / patch_size;

    auto padded_at = [&](int r, int c) -> double {
        const int ir = r - top, ic = c - left;
        if (ir < 0 || ir >= image.height || ic < 0 || ic >= image.width) return 0.0;
        return image.at(ir, ic);
    };

    std::vector<std::vector<double>> patches;
    patches.reserve(std::size_t(rows) * cols);
    for (int pr = 0; pr < rows; ++pr)
        for (int pc = 0; pc < cols; ++pc) {
            std::vector<double> patch(std::size_t(patch_size) * patch_size);
            for (int r = 0; r < patch_size; ++r)
                for (int c = 0; c < patch_size; ++c)
                    patch[std::size_t(r) * patch_size + c] =
                        padded_at(pr * patch_size + r, pc * patch_size + c);
            patches.push_back(std::move(patch));
        }
    return patches;
}

PatchEmbedder make_embedder(int patch_size, int embed_dim, int num_patches, bool trainable,
                            std::uint64_t seed) {
    if (patch_size < 1 || embed_dim < 1 || num_patches < 1)
        throw structural_error("make_embedder: dimensions must be positive");
    PatchEmbedder e;
    e.patch_size = patch_size;
    e.embed_dim = embed_dim;
    e.num_patches = num_patches;
    e.trainable = trainable;
    const std::size_t pp = std::size_t(patch_size) * patch_size;
    e.projection.resize(pp * embed_dim);
    e.positional.assign(std::size_t(num_patches) * embed_dim, 0.0);
    std::mt19937_64 rng(seed);
    const double bound = 1.0 / patch_size;  // 1/sqrt(p^2)
    for (double& v : e.projection) {
        const double u = double(rng() >> 11) * 0x1.0p-53;
        v = bound * (2.0 * u - 1.0);
    }
    return e;
}

PatchSequence project_patches(const std::vector<std::vector<double>>& patches,
                              const PatchEmbedder& embedder) {
    const std::size_t pp = std::size_t(embedder.patch_size) * embedder.patch_size;
    if (int(patches.size()) != embedder.num_patches)
        throw structural_error("project_patches: patch count mismatch");
    for (const auto& p : patches)
        if (p.size() != pp) throw structural_error("project_patches: patch length mismatch");

    PatchSequence seq;
    seq.num_patches = embedder.num_patches;
    seq.embed_dim = embedder.embed_dim;
    seq.tokens.assign(std::size_t(seq.num_patches) * seq.embed_dim, 0.0);
    for (int s = 0; s < seq.num_patches; ++s) {
        for (int j = 0; j < seq.embed_dim; ++j) {
            double acc = embedder.positional[std::size_t(s) * seq.embed_dim + j];
            for (std::size_t i = 0; i < pp; ++i)
                acc += patches[s][i] * embedder.projection[i * seq.embed_dim + j];
            seq.at(s, j) = acc;
        }
    }
    return seq;
}

}  // namespace sasq::embed

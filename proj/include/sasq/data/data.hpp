#pragma once

#include <cstdint>
#include <string>
#include <utility>

#include "sasq/data/dataset.hpp"

namespace sasq::data {

// Noisy 4x4 line images: two adjacent pixels at 0.75 (horizontal -> +1,
// vertical -> -1) plus U[0, 0.25] noise on every pixel. Placement is uniform
// over the 12 valid positions per orientation, classes alternate so any
// prefix is near-balanced. count must be even.
Dataset generate_lines(int count, std::uint64_t seed);

// Raw MNIST-style pair of IDX files.
struct RawImageSet {
    std::vector<embed::Image> images;
    std::vector<int> labels;  // 0..9
};

// Big-endian IDX parsing: magic 0x00000803 (images) / 0x00000801 (labels),
// pixel bytes scaled to [0, 1]. Throws format_error on bad magic, count
// mismatch or truncation.
RawImageSet load_mnist_idx(const std::string& images_path, const std::string& labels_path);

// Keeps two digits, mapping digit_a -> +1 and digit_b -> -1.
Dataset filter_digit_pair(const RawImageSet& raw, int digit_a, int digit_b);

// Seeded uniform sampling without replacement into disjoint train/val splits.
std::pair<Dataset, Dataset> subsample(const Dataset& set, int n_train, int n_val,
                                      std::uint64_t seed);

// Text fixture for synthetic sets: one CSV row of pixels then the label.
void save_fixture(const std::string& path, const Dataset& set);
Dataset load_fixture(const std::string& path);
std::string fixture_text(const Dataset& set);

}  // namespace sasq::data

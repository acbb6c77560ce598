#include <cstdint>
#include <fstream>
#include <string>

#include "sasq/data/data.hpp"

namespace sasq::data {

namespace {

constexpr std::uint32_t kImagesMagic = 0x00000803;
constexpr std::uint32_t kLabelsMagic = 0x00000801;

std::uint32_t read_u32_be(std::istream& in, const std::string& path) {
    unsigned char b[4];
    if (!in.read(reinterpret_cast<char*>(b), 4))
        throw format_error("idx: truncated header in '" + path + "'");
    return (std::uint32_t(b[0]) << 24) | (std::uint32_t(b[1]) << 16) |
           (std::uint32_t(b[2]) << 8) | std::uint32_t(b[3]);
}

}  // namespace

RawImageSet load_mnist_idx(const std::string& images_path, const std::string& labels_path) {
    std::ifstream img_in(images_path, std::ios::binary);
    if (!img_in) throw format_error("idx: cannot open '" + images_path + "'");
    std::ifstream lbl_in(labels_path, std::ios::binary);
    if (!lbl_in) throw format_error("idx: cannot open '" + labels_path + "'");

    if (read_u32_be(img_in, images_path) != kImagesMagic)
        throw format_error("idx: '" + images_path + "' is not an IDX image file (bad magic)");
    const std::uint32_t count = read_u32_be(img_in, images_path);
    const std::uint32_t rows = read_u32_be(img_in, images_path);
    const std::uint32_t cols = read_u32_be(img_in, images_path);
    if (rows == 0 || cols == 0 || rows > 4096 || cols > 4096)
        throw format_error("idx: implausible image dimensions in '" + images_path + "'");

    if (read_u32_be(lbl_in, labels_path) != kLabelsMagic)
        throw format_error("idx: '" + labels_path + "' is not an IDX label file (bad magic)");
    const std::uint32_t label_count = read_u32_be(lbl_in, labels_path);
    if (label_count != count)
        throw format_error("idx: image/label counts disagree (" + std::to_string(count) + " vs " +
                           std::to_string(label_count) + ")");

    RawImageSet raw;
    raw.images.reserve(count);
    raw.labels.reserve(count);
    std::vector<unsigned char> buf(std::size_t(rows) * cols);
    for (std::uint32_t i = 0; i < count; ++i) {
        if (!img_in.read(reinterpret_cast<char*>(buf.data()), std::streamsize(buf.size())))
            throw format_error("idx: truncated image data in '" + images_path + "'");
        embed::Image img{int(rows), int(cols), {}};
        img.pixels.resize(buf.size());
        for (std::size_t p = 0; p < buf.size(); ++p) img.pixels[p] = double(buf[p]) / 255.0;
        raw.images.push_back(std::move(img));
        char lbl = 0;
        if (!lbl_in.read(&lbl, 1))
            throw format_error("idx: truncated label data in '" + labels_path + "'");
        raw.labels.push_back(int(static_cast<unsigned char>(lbl)));
    }
    return raw;
}

Dataset filter_digit_pair(const RawImageSet& raw, int digit_a, int digit_b) {
    if (digit_a < 0 || digit_a > 9 || digit_b < 0 || digit_b > 9 || digit_a == digit_b)
        throw structural_error("filter_digit_pair: digits must be distinct and in 0..9");
    Dataset set;
    set.class_map = "digit " + std::to_string(digit_a) + "=+1 digit " + std::to_string(digit_b) +
                    "=-1";
    for (std::size_t i = 0; i < raw.images.size(); ++i) {
        if (raw.labels[i] == digit_a)
            set.items.push_back({raw.images[i], 1});
        else if (raw.labels[i] == digit_b)
            set.items.push_back({raw.images[i], -1});
    }
    if (set.empty())
        throw structural_error("filter_digit_pair: no images with digits " +
                               std::to_string(digit_a) + "/" + std::to_string(digit_b));
    return set;
}

}  // namespace sasq::data

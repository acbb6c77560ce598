#pragma once

#include <string>
#include <vector>

#include "sasq/embed/embed.hpp"

namespace sasq::data {

// Binary-labeled image; labels are exactly -1 or +1.
struct LabeledImage {
    embed::Image image;
    int label = 1;
};

struct Dataset {
    std::vector<LabeledImage> items;
    std::string class_map;  // which class carries label +1

    std::size_t size() const { return items.size(); }
    bool empty() const { return items.empty(); }
};

}  // namespace sasq::data

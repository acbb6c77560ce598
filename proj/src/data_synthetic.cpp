#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include "sasq/data/data.hpp"
#include "sasq/util/rng.hpp"

namespace sasq::data {

Dataset generate_lines(int count, std::uint64_t seed) {
    if (count < 2 || count % 2 != 0)
        throw structural_error("generate_lines: count must be even and positive");
    std::mt19937_64 rng(seed);
    auto u01 = [&rng] { return unit_double(rng()); };

    Dataset set;
    set.class_map = "horizontal=+1 vertical=-1";
    set.items.reserve(count);
    for (int i = 0; i < count; ++i) {
        const bool horizontal = i % 2 == 0;
        embed::Image img{4, 4, std::vector<double>(16, 0.0)};
        const int pos = int(rng() % 12);
        if (horizontal) {
            const int r = pos / 3, c = pos % 3;
            img.at(r, c) = 0.75;
            img.at(r, c + 1) = 0.75;
        } else {
            const int r = pos / 4, c = pos % 4;
            img.at(r, c) = 0.75;
            img.at(r + 1, c) = 0.75;
        }
        for (double& p : img.pixels) p += 0.25 * u01();
        set.items.push_back({std::move(img), horizontal ? 1 : -1});
    }
    return set;
}

std::pair<Dataset, Dataset> subsample(const Dataset& set, int n_train, int n_val,
                                      std::uint64_t seed) {
    if (n_train < 1) throw structural_error("subsample: training split must be nonempty");
    if (n_val < 0) throw structural_error("subsample: negative validation size");
    if (std::size_t(n_train) + std::size_t(n_val) > set.size())
        throw structural_error("subsample: dataset smaller than the requested splits");

    std::vector<std::size_t> idx(set.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::mt19937_64 rng(seed);
    for (std::size_t i = idx.size(); i > 1; --i) std::swap(idx[i - 1], idx[rng() % i]);

    Dataset train, val;
    train.class_map = set.class_map;
    val.class_map = set.class_map;
    for (int i = 0; i < n_train; ++i) train.items.push_back(set.items[idx[i]]);
    for (int i = 0; i < n_val; ++i) val.items.push_back(set.items[idx[n_train + i]]);
    return {std::move(train), std::move(val)};
}

std::string fixture_text(const Dataset& set) {
    std::ostringstream os;
    os << "# sasq-lines v1 height=4 width=4 class_map=" << set.class_map << "\n";
    char buf[32];
    for (const auto& item : set.items) {
        if (item.image.height != 4 || item.image.width != 4)
            throw structural_error("fixture_text: only 4x4 images are supported");
        for (double p : item.image.pixels) {
            std::snprintf(buf, sizeof buf, "%.17g", p);
            os << buf << ',';
        }
        os << item.label << '\n';
    }
    return os.str();
}

void save_fixture(const std::string& path, const Dataset& set) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw format_error("fixture: cannot open '" + path + "' for writing");
    out << fixture_text(set);
    if (!out) throw format_error("fixture: write failed for '" + path + "'");
}

Dataset load_fixture(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw format_error("fixture: cannot open '" + path + "'");
    Dataset set;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            const auto pos = line.find("class_map=");
            if (pos != std::string::npos) set.class_map = line.substr(pos + 10);
            continue;
        }
        std::istringstream ls(line);
        embed::Image img{4, 4, std::vector<double>(16, 0.0)};
        std::string cell;
        for (int i = 0; i < 16; ++i) {
            if (!std::getline(ls, cell, ',')) throw format_error("fixture: short row");
            img.pixels[i] = std::stod(cell);
        }
        if (!std::getline(ls, cell)) throw format_error("fixture: missing label");
        const int label = std::stoi(cell);
        if (label != 1 && label != -1) throw format_error("fixture: label outside {-1,+1}");
        set.items.push_back({std::move(img), label});
    }
    if (set.empty()) throw format_error("fixture: no records in '" + path + "'");
    return set;
}

}  // namespace sasq::data

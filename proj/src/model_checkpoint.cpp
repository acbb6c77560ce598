#include "sasq/model/checkpoint.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace sasq::model {

namespace {

constexpr const char* kMagic = "sasq-checkpoint v1";

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_array(std::ostream& os, const char* name, const std::vector<double>& v) {
    os << name << ' ' << v.size();
    for (double x : v) os << ' ' << fmt(x);
    os << '\n';
}

std::vector<double> read_array(std::istringstream& line, const std::string& name) {
    std::size_t n = 0;
    if (!(line >> n)) throw format_error("checkpoint: bad length for " + name);
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i)
        if (!(line >> v[i])) throw format_error("checkpoint: truncated array " + name);
    return v;
}

}  // namespace

std::string checkpoint_text(const ModelConfig& config, const ModelParams& params) {
    std::ostringstream os;
    os << kMagic << '\n';
    os << "encoding " << encoding_name(config.encoding) << '\n';
    os << "image_height " << config.image_height << '\n';
    os << "image_width " << config.image_width << '\n';
    os << "patch_size " << config.patch_size << '\n';
    os << "num_patches " << config.num_patches << '\n';
    os << "embed_dim " << config.embed_dim << '\n';
    os << "kernel_layers " << config.kernel_layers << '\n';
    os << "depth " << config.depth << '\n';
    os << "use_qft " << (config.use_qft ? 1 : 0) << '\n';
    os << "use_perceptron " << (config.use_perceptron ? 1 : 0) << '\n';
    os << "num_readout " << config.num_readout << '\n';
    os << "trainable_embedder " << (config.trainable_embedder ? 1 : 0) << '\n';
    write_array(os, "kernel_angles", params.kernel_angles);
    write_array(os, "perceptron_angles", params.perceptron_angles);
    os << "output_weight " << fmt(params.output_weight) << '\n';
    os << "output_bias " << fmt(params.output_bias) << '\n';
    write_array(os, "projection", params.projection);
    write_array(os, "positional", params.positional);
    return os.str();
}

std::pair<ModelConfig, ModelParams> parse_checkpoint(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    if (!std::getline(is, line) || line != kMagic)
        throw format_error("checkpoint: missing or unknown header");

    ModelConfig config;
    ModelParams params;
    bool have_w = false, have_b = false;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string key;
        ls >> key;
        auto read_int = [&](int& dst) {
            if (!(ls >> dst)) throw format_error("checkpoint: bad value for " + key);
        };
        if (key == "encoding") {
            std::string name;
            ls >> name;
            config.encoding = encoding_from_name(name);
        } else if (key == "image_height") read_int(config.image_height);
        else if (key == "image_width") read_int(config.image_width);
        else if (key == "patch_size") read_int(config.patch_size);
        else if (key == "num_patches") read_int(config.num_patches);
        else if (key == "embed_dim") read_int(config.embed_dim);
        else if (key == "kernel_layers") read_int(config.kernel_layers);
        else if (key == "depth") read_int(config.depth);
        else if (key == "use_qft") { int v; read_int(v); config.use_qft = v != 0; }
        else if (key == "use_perceptron") { int v; read_int(v); config.use_perceptron = v != 0; }
        else if (key == "num_readout") read_int(config.num_readout);
        else if (key == "trainable_embedder") { int v; read_int(v); config.trainable_embedder = v != 0; }
        else if (key == "kernel_angles") params.kernel_angles = read_array(ls, key);
        else if (key == "perceptron_angles") params.perceptron_angles = read_array(ls, key);
        else if (key == "output_weight") { if (!(ls >> params.output_weight)) throw format_error("checkpoint: bad output_weight"); have_w = true; }
        else if (key == "output_bias") { if (!(ls >> params.output_bias)) throw format_error("checkpoint: bad output_bias"); have_b = true; }
        else if (key == "projection") params.projection = read_array(ls, key);
        else if (key == "positional") params.positional = read_array(ls, key);
        else throw format_error("checkpoint: unknown key '" + key + "'");
    }
    if (!have_w || !have_b) throw format_error("checkpoint: missing output layer");

    try {
        config.validate();
    } catch (const error& e) {
        throw format_error(std::string("checkpoint: invalid config: ") + e.what());
    }
    if (int(params.kernel_angles.size()) != config.kernel_angle_count() ||
        int(params.perceptron_angles.size()) != config.perceptron_angle_count() ||
        int(params.projection.size()) != config.patch_size * config.patch_size * config.embed_dim ||
        int(params.positional.size()) != config.num_patches * config.embed_dim)
        throw format_error("checkpoint: parameter arrays do not match the config");
    return {config, params};
}

void save_checkpoint(const std::string& path, const ModelConfig& config,
                     const ModelParams& params) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw format_error("checkpoint: cannot open '" + path + "' for writing");
    out << checkpoint_text(config, params);
    if (!out) throw format_error("checkpoint: write failed for '" + path + "'");
}

std::pair<ModelConfig, ModelParams> load_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw format_error("checkpoint: cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_checkpoint(buf.str());
}

}  // namespace sasq::model

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>

#include "helpers.hpp"
#include "sasq/model/checkpoint.hpp"
#include "sasq/model/exec.hpp"
#include "sasq/model/model.hpp"
#include "sasq/qsim/apply.hpp"
#include "sasq/qsim/dense_oracle.hpp"
#include "sasq/qsim/qft.hpp"

using namespace sasq;
using namespace sasq::model;
using qsim::cplx;
using qsim::QuantumState;

namespace {

embed::Image random_image(int h, int w, std::mt19937_64& rng) {
    embed::Image img{h, w, {}};
    img.pixels.resize(std::size_t(h) * w);
    for (double& p : img.pixels) p = testutil::uniform01(rng);
    return img;
}

ModelConfig lines_config() {
    ModelConfig c;
    c.encoding = Encoding::Angle;
    c.image_height = 4;
    c.image_width = 4;
    c.patch_size = 2;
    c.num_patches = 4;
    c.embed_dim = 4;
    c.kernel_layers = 1;
    c.trainable_embedder = false;
    return c;
}

ModelConfig mnist_config() {
    ModelConfig c;
    c.encoding = Encoding::Amplitude;
    c.image_height = 28;
    c.image_width = 28;
    c.patch_size = 16;
    c.num_patches = 4;
    c.embed_dim = 4;
    c.kernel_layers = 1;
    c.trainable_embedder = true;
    return c;
}

ModelConfig small_config(Encoding enc, int n, int eps, int layers) {
    ModelConfig c;
    c.encoding = enc;
    c.image_height = 2;
    c.image_width = 2 * n;
    c.patch_size = 2;
    c.num_patches = n;
    c.embed_dim = eps;
    c.kernel_layers = layers;
    c.trainable_embedder = false;
    return c;
}

// Reference forward pass through the plain gate-by-gate path.
ForwardResult forward_plain(const CompiledModel& cm, const ModelParams& params,
                            const embed::Image& image) {
    const auto patches = embed::extract_patches(image, cm.config.patch_size);
    const embed::PatchSequence tokens =
        embed::project_patches(patches, embedder_view(cm.config, params));
    const std::vector<double> cp = circuit_params_for(cm, params, tokens);
    QuantumState state = initial_state(cm, tokens);
    qsim::apply_circuit(state, cm.circuit, cp);
    ForwardResult r;
    r.expectation = qsim::expectation_z(state, cm.config.readout_qubit());
    r.logit = params.output_weight * r.expectation + params.output_bias;
    return r;
}

}  // namespace

TEST_CASE("kernel layer fragment structure") {
    const auto frag = kernel_layer_fragment(4, 0);
    REQUIRE(frag.size() == 8);  // 4 rotations + 4 ring CNOTs
    for (int i = 0; i < 4; ++i) {
        CHECK(frag[i].kind == qsim::GateKind::RotZYZ);
        CHECK(frag[i].target == i);
        CHECK(frag[i].param_index == 3 * i);
    }
    CHECK(frag[4].control == 0); CHECK(frag[4].target == 1);
    CHECK(frag[5].control == 1); CHECK(frag[5].target == 2);
    CHECK(frag[6].control == 2); CHECK(frag[6].target == 3);
    CHECK(frag[7].control == 3); CHECK(frag[7].target == 0);

    // single data qubit: rotation only, no ring
    const auto solo = kernel_layer_fragment(1, 0);
    CHECK(solo.size() == 1);
}

TEST_CASE("kernel layer with zero angles is the CNOT ring; applied twice fixes |0...0>") {
    qsim::Circuit c;
    c.num_qubits = 4;
    c.num_params = 12;
    auto frag = kernel_layer_fragment(4, 0);
    c.gates.insert(c.gates.end(), frag.begin(), frag.end());
    c.gates.insert(c.gates.end(), frag.begin(), frag.end());
    const std::vector<double> zeros(12, 0.0);
    QuantumState s = qsim::init_state(4);
    qsim::apply_circuit(s, c, zeros);
    CHECK(std::abs(s.amplitudes[0] - cplx{1, 0}) < 1e-14);
    for (std::size_t k = 1; k < s.dim(); ++k) CHECK(std::abs(s.amplitudes[k]) < 1e-14);
}

TEST_CASE("kernel layer matches the dense oracle on seeded angles") {
    std::mt19937_64 rng(44);
    qsim::Circuit c;
    c.num_qubits = 3;
    c.num_params = 9;
    auto frag = kernel_layer_fragment(3, 0);
    c.gates.insert(c.gates.end(), frag.begin(), frag.end());
    std::vector<double> params(9);
    for (double& p : params) p = testutil::uniform(rng, 0, 2 * testutil::kPi);

    QuantumState s = testutil::random_state(3, rng);
    const auto expected = testutil::mat_vec(qsim::dense_unitary_oracle(c, params), s.amplitudes);
    qsim::apply_circuit(s, c, params);
    CHECK(testutil::max_abs_diff(s.amplitudes, expected) < 1e-10);
}

TEST_CASE("perceptron fragment: slot count and identity at zero angles") {
    const auto frag = perceptron_fragment(16, 16, 0);
    CHECK(frag.size() == 64);

    std::mt19937_64 rng(45);
    qsim::Circuit c;
    c.num_qubits = 3;
    c.num_params = 8;
    auto small = perceptron_fragment(2, 2, 0);
    c.gates.insert(c.gates.end(), small.begin(), small.end());
    const std::vector<double> zeros(8, 0.0);
    QuantumState s = testutil::random_state(3, rng);
    const QuantumState before = s;
    qsim::apply_circuit(s, c, zeros);
    CHECK(testutil::max_abs_diff(s.amplitudes, before.amplitudes) < 1e-14);
}

TEST_CASE("perceptron matches the dense oracle on seeded angles") {
    std::mt19937_64 rng(46);
    qsim::Circuit c;
    c.num_qubits = 3;
    c.num_params = 8;
    auto frag = perceptron_fragment(2, 2, 0);
    c.gates.insert(c.gates.end(), frag.begin(), frag.end());
    std::vector<double> params(8);
    for (double& p : params) p = testutil::uniform(rng, 0, 2 * testutil::kPi);
    QuantumState s = testutil::random_state(3, rng);
    const auto expected = testutil::mat_vec(qsim::dense_unitary_oracle(c, params), s.amplitudes);
    qsim::apply_circuit(s, c, params);
    CHECK(testutil::max_abs_diff(s.amplitudes, expected) < 1e-10);
}

TEST_CASE("perceptron rejects a readout that collides with data qubits") {
    CHECK_THROWS_AS(perceptron_fragment(4, 2, 0), structural_error);
}

TEST_CASE("qubit accounting for the reference configurations") {
    CHECK(lines_config().total_qubits() == 17);
    CHECK(build_circuit(lines_config()).num_qubits == 17);
    CHECK(mnist_config().total_qubits() == 9);
    CHECK(build_circuit(mnist_config()).num_qubits == 9);

    ModelConfig eps8 = mnist_config();
    eps8.embed_dim = 8;
    CHECK(eps8.total_qubits() == 13);
}

TEST_CASE("parameter census across ablation configurations") {
    auto census = [](const ModelConfig& c) {
        const ModelParams p = init_params(c, 1);
        CHECK(int(to_flat(c, p).size()) == parameter_count(c));
        int expect = c.depth * c.kernel_layers * c.data_qubits() * 3 +
                     (c.use_perceptron ? 4 * c.data_qubits() : 0) + 2;
        if (c.trainable_embedder)
            expect += c.patch_size * c.patch_size * c.embed_dim + c.num_patches * c.embed_dim;
        CHECK(parameter_count(c) == expect);
    };

    census(lines_config());
    census(mnist_config());

    ModelConfig c = mnist_config();
    for (int eps : {4, 8})
        for (int l : {0, 1, 2, 3})
            for (bool qft : {true, false})
                for (bool perc : {true, false}) {
                    c.embed_dim = eps;
                    c.kernel_layers = l;
                    c.use_qft = qft;
                    c.use_perceptron = perc;
                    census(c);
                }

    ModelConfig d = lines_config();
    d.depth = 2;
    census(d);
}

TEST_CASE("config validation") {
    ModelConfig c = lines_config();
    c.num_patches = 3;
    CHECK_THROWS_AS(c.validate(), structural_error);

    ModelConfig amp = mnist_config();
    amp.embed_dim = 6;
    amp.num_patches = patches_for(28, 28, 16);
    CHECK_THROWS_AS(amp.validate(), structural_error);

    ModelConfig big = lines_config();
    big.image_width = 8;
    big.num_patches = 8;  // 32 data qubits under angle encoding
    CHECK_THROWS_AS(big.validate(), capacity_error);
}

TEST_CASE("compiled plan equals the plain gate path") {
    std::mt19937_64 rng(47);
    int checked = 0;
    for (Encoding enc : {Encoding::Angle, Encoding::Amplitude})
        for (int layers : {0, 1, 2})
            for (bool qft : {true, false})
                for (bool perc : {true, false}) {
                    ModelConfig c = small_config(enc, 2, enc == Encoding::Angle ? 3 : 4, layers);
                    c.use_qft = qft;
                    c.use_perceptron = perc;
                    const CompiledModel cm = compile_model(c);
                    const ModelParams p = init_params(c, rng());
                    const embed::Image img = random_image(2, 4, rng);
                    const ForwardResult fused = forward_compiled(cm, p, img);
                    const ForwardResult plain = forward_plain(cm, p, img);
                    CHECK(std::abs(fused.expectation - plain.expectation) < 1e-12);
                    CHECK(std::abs(fused.logit - plain.logit) < 1e-12);
                    ++checked;
                }
    CHECK(checked == 24);
}

TEST_CASE("forward expectation matches the dense-matrix oracle on a small model") {
    std::mt19937_64 rng(48);
    ModelConfig c = small_config(Encoding::Amplitude, 2, 2, 1);
    const CompiledModel cm = compile_model(c);
    REQUIRE(cm.circuit.num_qubits == 3);
    for (int it = 0; it < 5; ++it) {
        const ModelParams p = init_params(c, rng());
        const embed::Image img = random_image(2, 4, rng);

        const auto patches = embed::extract_patches(img, 2);
        const auto tokens = embed::project_patches(patches, embedder_view(c, p));
        const auto cp = circuit_params_for(cm, p, tokens);
        QuantumState s0 = initial_state(cm, tokens);
        const auto u = qsim::dense_unitary_oracle(cm.circuit, cp);
        const auto v = testutil::mat_vec(u, s0.amplitudes);
        double expect = 0.0;
        for (std::size_t k = 0; k < v.size(); ++k) {
            const double pr = std::norm(v[k]);
            expect += (k & 1) ? -pr : pr;  // readout is the last qubit (LSB)
        }

        const ForwardResult f = forward_compiled(cm, p, img);
        CHECK(std::abs(f.expectation - expect) < 1e-10);
    }
}

TEST_CASE("readout isolation: zero or absent perceptron pins the expectation to 0") {
    std::mt19937_64 rng(49);

    ModelConfig c = small_config(Encoding::Angle, 2, 2, 1);
    const CompiledModel cm = compile_model(c);
    ModelParams p = init_params(c, 7);
    std::fill(p.perceptron_angles.begin(), p.perceptron_angles.end(), 0.0);
    p.output_bias = 0.625;
    const embed::Image img = random_image(2, 4, rng);
    const ForwardResult f = forward_compiled(cm, p, img);
    CHECK(std::abs(f.expectation) < 1e-12);
    CHECK(f.logit == doctest::Approx(0.625).epsilon(1e-12));

    ModelConfig noperc = c;
    noperc.use_perceptron = false;
    const CompiledModel cm2 = compile_model(noperc);
    for (int it = 0; it < 5; ++it) {
        const ModelParams q = init_params(noperc, rng());
        const ForwardResult g = forward_compiled(cm2, q, random_image(2, 4, rng));
        CHECK(std::abs(g.expectation) < 1e-12);
    }
}

TEST_CASE("bare circuit (no qft, no kernel, no perceptron) returns the bias") {
    std::mt19937_64 rng(50);
    ModelConfig c = small_config(Encoding::Angle, 2, 2, 0);
    c.use_qft = false;
    c.use_perceptron = false;
    ModelParams p = init_params(c, 3);
    p.output_bias = -0.25;
    for (int it = 0; it < 5; ++it) {
        const ForwardResult f = forward(c, p, random_image(2, 4, rng));
        CHECK(f.logit == doctest::Approx(-0.25).epsilon(1e-12));
    }
}

TEST_CASE("QFT cancellation: with no kernel layers the QFT blocks cancel") {
    std::mt19937_64 rng(51);
    for (Encoding enc : {Encoding::Angle, Encoding::Amplitude}) {
        ModelConfig with = small_config(enc, 2, enc == Encoding::Angle ? 3 : 4, 0);
        ModelConfig without = with;
        without.use_qft = false;
        const CompiledModel cw = compile_model(with);
        const CompiledModel co = compile_model(without);
        for (int it = 0; it < 5; ++it) {
            const std::uint64_t seed = rng();
            const ModelParams pw = init_params(with, seed);
            const ModelParams po = init_params(without, seed);
            const embed::Image img = random_image(2, 4, rng);
            const ForwardResult a = forward_compiled(cw, pw, img);
            const ForwardResult b = forward_compiled(co, po, img);
            CHECK(std::abs(a.expectation - b.expectation) < 1e-10);
        }
    }
}

TEST_CASE("depth stacking: a zero-angle second block is the inert ring sandwich") {
    std::mt19937_64 rng(52);
    ModelConfig deep = small_config(Encoding::Angle, 2, 2, 1);
    deep.depth = 2;
    const CompiledModel cm_deep = compile_model(deep);

    ModelConfig single = small_config(Encoding::Angle, 2, 2, 1);
    const CompiledModel cm_single = compile_model(single);

    const int q_data = single.data_qubits();
    const int v = single.qubits_per_register();

    for (int it = 0; it < 5; ++it) {
        ModelParams pd = init_params(deep, rng());
        // zero the second depth block: slots [l*q*3, 2*l*q*3)
        const int block = single.kernel_angle_count();
        for (int i = block; i < 2 * block; ++i) pd.kernel_angles[i] = 0.0;

        ModelParams ps = init_params(single, 1);
        ps.kernel_angles.assign(pd.kernel_angles.begin(), pd.kernel_angles.begin() + block);
        ps.perceptron_angles = pd.perceptron_angles;
        ps.output_weight = pd.output_weight;
        ps.output_bias = pd.output_bias;
        ps.projection = pd.projection;
        ps.positional = pd.positional;

        const embed::Image img = random_image(2, 4, rng);

        // single-depth circuit extended by the inert fragment: QFT blocks,
        // zero-rotation kernel layer (ring only), inverse QFT blocks,
        // inserted right before the readout Hadamard.
        qsim::Circuit extended = cm_single.circuit;
        std::vector<qsim::Gate> inert;
        for (int s = 0; s < single.num_patches; ++s)
            for (const auto& g : qsim::qft_fragment({s * v, v})) inert.push_back(g);
        for (int i = 0; i < q_data; ++i) inert.push_back(qsim::Gate::rot_zyz(i, 0, 0, 0));
        for (int i = 0; i + 1 < q_data; ++i) inert.push_back(qsim::Gate::cnot(i, i + 1));
        inert.push_back(qsim::Gate::cnot(q_data - 1, 0));
        for (int s = 0; s < single.num_patches; ++s)
            for (const auto& g : qsim::iqft_fragment({s * v, v})) inert.push_back(g);
        // locate the readout H: first gate targeting the readout qubit
        std::size_t pos = 0;
        while (pos < extended.gates.size() &&
               !(extended.gates[pos].kind == qsim::GateKind::H &&
                 extended.gates[pos].target == single.readout_qubit()))
            ++pos;
        extended.gates.insert(extended.gates.begin() + pos, inert.begin(), inert.end());

        const auto patches = embed::extract_patches(img, 2);
        const auto tokens = embed::project_patches(patches, embedder_view(single, ps));
        const auto cp = circuit_params_for(cm_single, ps, tokens);
        QuantumState s0 = initial_state(cm_single, tokens);
        qsim::apply_circuit(s0, extended, cp);
        const double expect_ext = qsim::expectation_z(s0, single.readout_qubit());

        const ForwardResult deep_f = forward_compiled(cm_deep, pd, img);
        CHECK(std::abs(deep_f.expectation - expect_ext) < 1e-10);
    }
}

TEST_CASE("predict thresholds") {
    CHECK(predict(0.7) == 1);
    CHECK(predict(-0.3) == -1);
    CHECK(predict(0.0) == 1);
}

TEST_CASE("checkpoint round-trips byte-identically and validates") {
    std::mt19937_64 rng(53);
    const ModelConfig c = mnist_config();
    const ModelParams p = init_params(c, 99);

    const std::string text = checkpoint_text(c, p);
    auto [c2, p2] = parse_checkpoint(text);
    CHECK(checkpoint_text(c2, p2) == text);
    CHECK(c2.encoding == c.encoding);
    CHECK(p2.kernel_angles == p.kernel_angles);
    CHECK(p2.projection == p.projection);
    CHECK(p2.output_weight == p.output_weight);

    const ForwardResult a = forward(c, p, random_image(28, 28, rng));
    std::mt19937_64 rng2(53);
    const ForwardResult b = forward(c2, p2, random_image(28, 28, rng2));
    CHECK(a.logit == b.logit);

    const std::string path = (std::filesystem::temp_directory_path() / "sasq_ckpt_test.txt").string();
    save_checkpoint(path, c, p);
    auto [c3, p3] = load_checkpoint(path);
    CHECK(checkpoint_text(c3, p3) == text);
    std::remove(path.c_str());

    CHECK_THROWS_AS(parse_checkpoint("garbage"), format_error);

    // mismatched array lengths against the config
    std::string bad = text;
    ModelParams short_p = p;
    short_p.kernel_angles.pop_back();
    CHECK_THROWS_AS(parse_checkpoint(checkpoint_text(c, short_p)), format_error);
}

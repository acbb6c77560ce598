#include "sasq/harness/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>

#include "sasq/model/checkpoint.hpp"
#include "sasq/model/exec.hpp"
#include "sasq/util/parallel.hpp"
#include "sasq/util/rng.hpp"

namespace sasq::harness {

namespace fs = std::filesystem;

namespace {

bool is_lines(const ExperimentSpec& spec) {
    if (spec.task == "lines") return true;
    if (spec.task == "mnist_pair") return false;
    throw format_error("unknown task '" + spec.task + "'");
}

std::string join(const std::string& dir, const std::string& name) {
    return (fs::path(dir) / name).string();
}

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw format_error("cannot create output directory '" + dir + "'");
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw format_error("cannot open '" + path + "' for writing");
    out << content;
    if (!out) throw format_error("write failed for '" + path + "'");
}

std::string percent2(double fraction) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", 100.0 * fraction);
    return buf;
}

}  // namespace

std::pair<double, double> mean_std(const std::vector<double>& values) {
    if (values.empty()) return {0.0, 0.0};
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= double(values.size());
    if (values.size() == 1) return {mean, 0.0};
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    return {mean, std::sqrt(ss / double(values.size() - 1))};
}

std::string mean_std_percent(double mean_fraction, double std_fraction) {
    return percent2(mean_fraction) + " (" + percent2(std_fraction) + ")";
}

model::ModelConfig make_model_config(const ExperimentSpec& spec) {
    const bool lines = is_lines(spec);
    model::ModelConfig c;
    c.encoding = spec.encoding.empty()
                     ? (lines ? model::Encoding::Angle : model::Encoding::Amplitude)
                     : model::encoding_from_name(spec.encoding);
    c.image_height = lines ? 4 : 28;
    c.image_width = lines ? 4 : 28;
    c.patch_size = spec.patch_size > 0 ? spec.patch_size : (lines ? 2 : 16);
    c.num_patches = model::patches_for(c.image_height, c.image_width, c.patch_size);
    c.embed_dim = spec.embed_dim;
    c.kernel_layers = spec.kernel_layers;
    c.depth = spec.depth;
    c.use_qft = spec.use_qft;
    c.use_perceptron = spec.use_perceptron;
    c.trainable_embedder = spec.trainable_embedder.value_or(!lines);
    c.validate();
    return c;
}

train::TrainConfig make_train_config(const ExperimentSpec& spec) {
    train::TrainConfig tc;
    tc.epochs = spec.epochs > 0 ? spec.epochs : (is_lines(spec) ? 100 : 200);
    tc.learning_rate = spec.learning_rate;
    tc.batch_size = spec.batch_size;
    tc.loss = train::loss_from_name(spec.loss);
    tc.engine = train::engine_from_name(spec.grad_engine);
    tc.seed = spec.seed;
    tc.validate();
    return tc;
}

TaskData load_task_data(const ExperimentSpec& spec) {
    TaskData d;
    if (is_lines(spec)) {
        d.train = data::generate_lines(spec.train_count, mix_seed(spec.seed, 1));
        d.val = data::generate_lines(spec.val_count, mix_seed(spec.seed, 2));
        return d;
    }
    if (spec.mnist_dir.empty())
        throw format_error("mnist_pair task needs --mnist-dir (or MNIST_DIR)");
    const auto train_raw = data::load_mnist_idx(join(spec.mnist_dir, "train-images-idx3-ubyte"),
                                                join(spec.mnist_dir, "train-labels-idx1-ubyte"));
    const auto test_raw = data::load_mnist_idx(join(spec.mnist_dir, "t10k-images-idx3-ubyte"),
                                               join(spec.mnist_dir, "t10k-labels-idx1-ubyte"));
    const data::Dataset train_pool = data::filter_digit_pair(train_raw, spec.digit_a, spec.digit_b);
    auto [train, val] = data::subsample(train_pool, spec.mnist_train, spec.mnist_val,
                                        mix_seed(spec.seed, 3));
    d.train = std::move(train);
    d.val = std::move(val);
    d.test = data::filter_digit_pair(test_raw, spec.digit_a, spec.digit_b);
    return d;
}

std::string run_generate(const ExperimentSpec& spec) {
    if (!is_lines(spec)) throw format_error("generate supports the lines task");
    ensure_dir(spec.out_dir);
    const data::Dataset set = data::generate_lines(spec.train_count, mix_seed(spec.seed, 1));
    const std::string path = join(spec.out_dir, "lines_fixture.csv");
    data::save_fixture(path, set);
    return path;
}

ExperimentResult run_training(const ExperimentSpec& spec) {
    if (spec.num_restarts < 1) throw structural_error("num_restarts must be >= 1");
    const model::ModelConfig config = make_model_config(spec);
    const train::TrainConfig base_tc = make_train_config(spec);
    const TaskData data = load_task_data(spec);
    ensure_dir(spec.out_dir);

    const model::CompiledModel cm = model::compile_model(config);
    ExperimentResult result;
    result.runs.resize(spec.num_restarts);

    // Restarts are independent; run them in parallel and reduce in restart
    // order afterwards so outputs do not depend on scheduling.
    parallel_for(std::size_t(spec.num_restarts), [&](std::size_t k) {
        train::TrainConfig tc = base_tc;
        tc.seed = spec.seed + k;
        const model::ModelParams init = model::init_params(config, mix_seed(tc.seed, 100));

        std::function<void(const train::Metrics&)> logger;
        if (spec.verbose)
            logger = [&, k](const train::Metrics& m) {
                std::fprintf(stderr,
                             "[restart %zu] epoch %d/%d train %.4f/%.3f val %.4f/%.3f\n", k,
                             m.epoch, tc.epochs, m.train_loss, m.train_accuracy, m.val_loss,
                             m.val_accuracy);
            };
        const train::TrainResult tr = train::train_model(config, tc, data.train, data.val, init,
                                                         logger);

        RestartResult run;
        run.restart = int(k);
        run.seed = tc.seed;
        run.final = tr.history.back();
        run.metrics_path = join(spec.out_dir, "run" + std::to_string(k) + "_metrics.csv");
        run.checkpoint_path = join(spec.out_dir, "run" + std::to_string(k) + "_checkpoint.txt");

        std::string csv = train::metrics_csv_header() + "\n";
        for (const auto& m : tr.history) csv += train::metrics_csv_line(m) + "\n";
        write_file(run.metrics_path, csv);
        model::save_checkpoint(run.checkpoint_path, config, tr.params);

        if (data.test) {
            const auto [tl, ta] = train::evaluate(cm, tr.params, *data.test, base_tc.loss);
            run.test_loss = tl;
            run.test_accuracy = ta;
        }
        result.runs[k] = run;
    });

    std::vector<double> train_accs, val_accs, test_accs;
    for (const auto& run : result.runs) {
        train_accs.push_back(run.final.train_accuracy);
        val_accs.push_back(run.final.val_accuracy);
        if (run.test_accuracy >= 0 && data.test) test_accs.push_back(run.test_accuracy);
    }

    std::tie(result.train_acc_mean, result.train_acc_std) = mean_std(train_accs);
    std::tie(result.val_acc_mean, result.val_acc_std) = mean_std(val_accs);
    if (!test_accs.empty())
        std::tie(result.test_acc_mean, result.test_acc_std) = mean_std(test_accs);

    std::string summary = "sasq-train-summary v1\n";
    summary += "task " + spec.task + "\n";
    if (!is_lines(spec))
        summary += "digits " + std::to_string(spec.digit_a) + "," + std::to_string(spec.digit_b) +
                   "\n";
    summary += "restarts " + std::to_string(spec.num_restarts) + "\n";
    summary += "columns run seed train_loss train_acc val_loss val_acc test_loss test_acc\n";
    for (const auto& run : result.runs) {
        char buf[256];
        std::snprintf(buf, sizeof buf, "run %d %llu %.6f %.6f %.6f %.6f %.6f %.6f\n", run.restart,
                      (unsigned long long)run.seed, run.final.train_loss,
                      run.final.train_accuracy, run.final.val_loss, run.final.val_accuracy,
                      run.test_loss, run.test_accuracy);
        summary += buf;
    }
    summary += "train_acc " + mean_std_percent(result.train_acc_mean, result.train_acc_std) + "\n";
    summary += "val_acc " + mean_std_percent(result.val_acc_mean, result.val_acc_std) + "\n";
    if (!test_accs.empty())
        summary += "test_acc " + mean_std_percent(result.test_acc_mean, result.test_acc_std) + "\n";
    result.summary_path = join(spec.out_dir, "summary.txt");
    write_file(result.summary_path, summary);
    return result;
}

std::vector<AblationCase> default_ablation_cases() {
    return {
        {"perceptron_only_e4", 4, 0, false, true},
        {"sasq_e4_l1", 4, 1, true, true},
        {"noqft_e4_l1", 4, 1, false, true},
        {"sasq_e8_l1", 8, 1, true, true},
        {"sasq_e4_l2", 4, 2, true, true},
        {"sasq_e8_l2", 8, 2, true, true},
        {"sasq_e8_l3", 8, 3, true, true},
        {"sasq_e8_l3_rerun", 8, 3, true, true},
        {"noperceptron_e4_l1", 4, 1, true, false},
    };
}

std::vector<AblationRow> run_ablation(const ExperimentSpec& base,
                                      const std::vector<AblationCase>& cases,
                                      const std::string& table_path) {
    if (cases.empty()) throw structural_error("ablation needs at least one case");
    std::vector<AblationRow> rows;
    std::string table = "sasq-ablation v1\ncolumns case mean std min max (test accuracy %)\n";
    for (const AblationCase& c : cases) {
        ExperimentSpec spec = base;
        spec.embed_dim = c.embed_dim;
        spec.kernel_layers = c.kernel_layers;
        spec.use_qft = c.use_qft;
        spec.use_perceptron = c.use_perceptron;
        spec.out_dir = join(base.out_dir, c.name);
        const ExperimentResult res = run_training(spec);

        AblationRow row;
        row.name = c.name;
        std::vector<double> accs;
        for (const auto& run : res.runs)
            accs.push_back(run.test_accuracy >= 0 ? run.test_accuracy : run.final.val_accuracy);
        std::tie(row.acc_mean, row.acc_std) = mean_std(accs);
        row.acc_min = *std::min_element(accs.begin(), accs.end());
        row.acc_max = *std::max_element(accs.begin(), accs.end());
        rows.push_back(row);

        char buf[200];
        std::snprintf(buf, sizeof buf, "%-22s %s  min %s  max %s\n", row.name.c_str(),
                      mean_std_percent(row.acc_mean, row.acc_std).c_str(),
                      percent2(row.acc_min).c_str(), percent2(row.acc_max).c_str());
        table += buf;
    }
    write_file(table_path, table);
    return rows;
}

std::pair<double, double> run_eval(const std::string& checkpoint_path, const ExperimentSpec& spec,
                                   const std::string& split) {
    auto [config, params] = model::load_checkpoint(checkpoint_path);
    const TaskData data = load_task_data(spec);
    const data::Dataset* set = nullptr;
    if (split == "train") set = &data.train;
    else if (split == "val") set = &data.val;
    else if (split == "test") {
        if (!data.test) throw format_error("task '" + spec.task + "' has no test split");
        set = &*data.test;
    } else {
        throw format_error("unknown split '" + split + "'");
    }
    if (!set->empty()) {
        const auto& img = set->items.front().image;
        if (img.height != config.image_height || img.width != config.image_width)
            throw format_error("checkpoint image dimensions do not match the dataset");
    }
    return train::evaluate(config, params, *set, train::loss_from_name(spec.loss));
}

resources::ResourceEstimate run_resources(const ExperimentSpec& spec, int classes,
                                          std::optional<int> approx_prep_depth) {
    return resources::estimate(make_model_config(spec), classes, approx_prep_depth);
}

}  // namespace sasq::harness

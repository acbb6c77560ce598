#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sasq/data/data.hpp"
#include "sasq/model/model.hpp"
#include "sasq/resources/resources.hpp"
#include "sasq/train/train.hpp"

namespace sasq::harness {

// One batch experiment: task, model shape, training schedule, restarts.
struct ExperimentSpec {
    std::string task = "lines";  // lines | mnist_pair
    int digit_a = 1;
    int digit_b = 3;

    // model
    std::string encoding;  // empty -> task default (lines: angle, mnist: amplitude)
    int patch_size = 0;    // 0 -> task default (lines: 2, mnist: 16)
    int embed_dim = 4;
    int kernel_layers = 1;
    int depth = 1;
    bool use_qft = true;
    bool use_perceptron = true;
    std::optional<bool> trainable_embedder;  // task default: lines frozen, mnist trainable

    // training
    int epochs = 0;  // 0 -> task default (lines: 100, mnist: 200)
    double learning_rate = 0.001;
    int batch_size = 16;
    std::string loss = "l1";
    std::string grad_engine = "adjoint";
    std::uint64_t seed = 1;
    int num_restarts = 1;

    // data
    int train_count = 500;  // lines
    int val_count = 250;    // lines
    int mnist_train = 1000;
    int mnist_val = 100;
    std::string mnist_dir;

    std::string out_dir = "out";
    bool verbose = false;
    std::string config_path;  // CLI only: key=value file applied before flags
};

model::ModelConfig make_model_config(const ExperimentSpec& spec);
train::TrainConfig make_train_config(const ExperimentSpec& spec);

struct TaskData {
    data::Dataset train;
    data::Dataset val;
    std::optional<data::Dataset> test;  // mnist: the full filtered test set
};

// lines: seeded generation (train/val streams derived from spec.seed);
// mnist_pair: IDX load from mnist_dir, digit filter, seeded subsample.
TaskData load_task_data(const ExperimentSpec& spec);

struct RestartResult {
    int restart = 0;
    std::uint64_t seed = 0;
    train::Metrics final;
    double test_loss = 0.0;
    double test_accuracy = -1.0;  // -1 when the task has no test set
    std::string checkpoint_path;
    std::string metrics_path;
};

struct ExperimentResult {
    std::vector<RestartResult> runs;
    double train_acc_mean = 0, train_acc_std = 0;
    double val_acc_mean = 0, val_acc_std = 0;
    double test_acc_mean = 0, test_acc_std = 0;
    std::string summary_path;
};

// "96.84 (2.87)" formatting of a percentage with one-standard-deviation.
std::string mean_std_percent(double mean_fraction, double std_fraction);

// Sample standard deviation (n-1); 0 for a single value.
std::pair<double, double> mean_std(const std::vector<double>& values);

// Writes a lines fixture file (cmd: generate).
std::string run_generate(const ExperimentSpec& spec);

// Trains num_restarts independent initializations with seeds seed+0..k-1,
// writing per-run metrics CSVs, checkpoints and a summary (cmd: train).
ExperimentResult run_training(const ExperimentSpec& spec);

// Named ablation case: spec overrides applied on top of a base spec.
struct AblationCase {
    std::string name;
    int embed_dim = 4;
    int kernel_layers = 1;
    bool use_qft = true;
    bool use_perceptron = true;
};

// The nine-case sweep shape used for the digit-pair study.
std::vector<AblationCase> default_ablation_cases();

struct AblationRow {
    std::string name;
    double acc_mean = 0, acc_std = 0, acc_min = 0, acc_max = 0;  // test (or val) accuracy
};

std::vector<AblationRow> run_ablation(const ExperimentSpec& base,
                                      const std::vector<AblationCase>& cases,
                                      const std::string& table_path);

// Evaluates a checkpoint against a dataset described by the spec
// (cmd: eval). Returns (loss, accuracy).
std::pair<double, double> run_eval(const std::string& checkpoint_path, const ExperimentSpec& spec,
                                   const std::string& split);

// Resource report for the spec's model configuration (cmd: resources).
resources::ResourceEstimate run_resources(const ExperimentSpec& spec, int classes,
                                          std::optional<int> approx_prep_depth);

}  // namespace sasq::harness

#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "sasq/data/dataset.hpp"
#include "sasq/model/exec.hpp"
#include "sasq/model/model.hpp"

namespace sasq::train {

enum class LossKind { L1, SoftMargin };
enum class GradEngine { Adjoint, ParameterShift };

const char* loss_name(LossKind k);
LossKind loss_from_name(const std::string& name);
const char* engine_name(GradEngine e);
GradEngine engine_from_name(const std::string& name);

// |label - logit|
double loss_l1(double logit, int label);

// log(1 + exp(-label * logit)), overflow safe.
double loss_soft_margin(double logit, int label);

double loss_value(LossKind kind, double logit, int label);
// d loss / d logit (the L1 subgradient at the kink is taken as 0).
double loss_dlogit(LossKind kind, double logit, int label);

// Gradient of the scalar loss for one sample with respect to the flat
// trainable vector (same layout as model::to_flat).
struct SampleGrad {
    std::vector<double> grad;
    double loss = 0.0;
    double logit = 0.0;
    double expectation = 0.0;
};

// Exact reverse-sweep differentiation over the compiled segment plan.
SampleGrad grad_adjoint(const model::CompiledModel& cm, const model::ModelParams& params,
                        const embed::Image& image, int label, LossKind loss);

// Shift-rule evaluation through the plain gate path: two-term rule for
// RX/RY/RZ/RotZYZ components and angle-encoding tokens, four-term rule for
// CRX/CRZ; classical parameters by the analytic chain rule.
SampleGrad grad_parameter_shift(const model::CompiledModel& cm, const model::ModelParams& params,
                                const embed::Image& image, int label, LossKind loss);

// Central differences (L(x+h) - L(x-h)) / 2h on the flat vector; test oracle.
SampleGrad grad_finite_difference(const model::ModelConfig& config,
                                  const model::ModelParams& params, const embed::Image& image,
                                  int label, LossKind loss, double h);

// Convenience overloads that compile the model internally.
SampleGrad grad_adjoint(const model::ModelConfig& config, const model::ModelParams& params,
                        const embed::Image& image, int label, LossKind loss);
SampleGrad grad_parameter_shift(const model::ModelConfig& config, const model::ModelParams& params,
                                const embed::Image& image, int label, LossKind loss);

// Bias-corrected ADAM.
struct AdamState {
    std::vector<double> m;
    std::vector<double> v;
    long step = 0;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;

    explicit AdamState(std::size_t n = 0) : m(n, 0.0), v(n, 0.0) {}
};

void adam_step(std::vector<double>& params, std::span<const double> grads, AdamState& state,
               double learning_rate);

struct TrainConfig {
    int epochs = 100;
    double learning_rate = 0.001;
    int batch_size = 16;
    LossKind loss = LossKind::L1;
    std::uint64_t seed = 0;
    GradEngine engine = GradEngine::Adjoint;

    void validate() const;
};

struct Metrics {
    int epoch = 0;  // 1-based
    double train_loss = 0.0;
    double train_accuracy = 0.0;
    double val_loss = 0.0;
    double val_accuracy = 0.0;
};

struct TrainResult {
    model::ModelParams params;
    std::vector<Metrics> history;
};

// Seeded shuffle, mini-batches with gradients averaged in index order,
// one adam_step per batch; training metrics are running means over the
// epoch's pre-update forwards, validation is evaluated after each epoch.
// Deterministic for a fixed config and seed.
TrainResult train_model(const model::ModelConfig& config, const TrainConfig& tc,
                        const data::Dataset& train_set, const data::Dataset& val_set,
                        const model::ModelParams& initial,
                        const std::function<void(const Metrics&)>& on_epoch = {});

// Mean loss and accuracy over a dataset.
std::pair<double, double> evaluate(const model::CompiledModel& cm,
                                   const model::ModelParams& params, const data::Dataset& set,
                                   LossKind loss);
std::pair<double, double> evaluate(const model::ModelConfig& config,
                                   const model::ModelParams& params, const data::Dataset& set,
                                   LossKind loss);

std::string metrics_csv_header();
std::string metrics_csv_line(const Metrics& m);

}  // namespace sasq::train

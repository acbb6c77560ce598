#include <cstdio>
#include <numeric>
#include <random>

#include "sasq/train/train.hpp"
#include "sasq/util/parallel.hpp"
#include "sasq/util/rng.hpp"

namespace sasq::train {

using model::CompiledModel;
using model::ModelConfig;
using model::ModelParams;

void TrainConfig::validate() const {
    if (epochs < 1) throw structural_error("train config: epochs must be >= 1");
    if (batch_size < 1) throw structural_error("train config: batch_size must be >= 1");
    if (learning_rate < 0) throw structural_error("train config: learning_rate must be >= 0");
}

namespace {

void check_dataset(const data::Dataset& set, const char* name) {
    if (set.empty()) throw structural_error(std::string(name) + " dataset is empty");
    for (const auto& item : set.items)
        if (item.label != 1 && item.label != -1)
            throw structural_error(std::string(name) + " dataset has a label outside {-1,+1}");
}

SampleGrad sample_grad(GradEngine engine, const CompiledModel& cm, const ModelParams& params,
                       const data::LabeledImage& item, LossKind loss) {
    return engine == GradEngine::Adjoint
               ? grad_adjoint(cm, params, item.image, item.label, loss)
               : grad_parameter_shift(cm, params, item.image, item.label, loss);
}

}  // namespace

std::pair<double, double> evaluate(const CompiledModel& cm, const ModelParams& params,
                                   const data::Dataset& set, LossKind loss) {
    check_dataset(set, "evaluation");
    std::vector<double> losses(set.size());
    std::vector<int> correct(set.size());
    parallel_for(set.size(), [&](std::size_t i) {
        const auto f = model::forward_compiled(cm, params, set.items[i].image);
        losses[i] = loss_value(loss, f.logit, set.items[i].label);
        correct[i] = model::predict(f.logit) == set.items[i].label ? 1 : 0;
    });
    double loss_sum = 0.0;
    long hits = 0;
    for (std::size_t i = 0; i < set.size(); ++i) {
        loss_sum += losses[i];
        hits += correct[i];
    }
    return {loss_sum / double(set.size()), double(hits) / double(set.size())};
}

std::pair<double, double> evaluate(const ModelConfig& config, const ModelParams& params,
                                   const data::Dataset& set, LossKind loss) {
    return evaluate(model::compile_model(config), params, set, loss);
}

TrainResult train_model(const ModelConfig& config, const TrainConfig& tc,
                        const data::Dataset& train_set, const data::Dataset& val_set,
                        const ModelParams& initial,
                        const std::function<void(const Metrics&)>& on_epoch) {
    tc.validate();
    check_dataset(train_set, "training");
    check_dataset(val_set, "validation");

    const CompiledModel cm = model::compile_model(config);
    TrainResult result;
    result.params = initial;
    std::vector<double> flat = model::to_flat(config, result.params);
    AdamState opt(flat.size());

    std::mt19937_64 shuffle_rng(mix_seed(tc.seed, 0x5148));
    std::vector<std::size_t> order(train_set.size());
    std::iota(order.begin(), order.end(), std::size_t{0});

    std::vector<SampleGrad> batch(std::min<std::size_t>(train_set.size(), tc.batch_size));
    std::vector<double> mean_grad(flat.size());

    for (int epoch = 1; epoch <= tc.epochs; ++epoch) {
        // Fisher-Yates with the dedicated stream; identical every rerun.
        for (std::size_t i = order.size(); i > 1; --i)
            std::swap(order[i - 1], order[shuffle_rng() % i]);

        double loss_sum = 0.0;
        long hits = 0;
        for (std::size_t start = 0; start < order.size(); start += tc.batch_size) {
            const std::size_t count = std::min<std::size_t>(tc.batch_size, order.size() - start);
            parallel_for(count, [&](std::size_t k) {
                batch[k] = sample_grad(tc.engine, cm, result.params,
                                       train_set.items[order[start + k]], tc.loss);
            });
            std::fill(mean_grad.begin(), mean_grad.end(), 0.0);
            for (std::size_t k = 0; k < count; ++k) {  // fixed reduction order
                const SampleGrad& g = batch[k];
                loss_sum += g.loss;
                hits += model::predict(g.logit) == train_set.items[order[start + k]].label;
                for (std::size_t i = 0; i < mean_grad.size(); ++i) mean_grad[i] += g.grad[i];
            }
            for (double& v : mean_grad) v /= double(count);
            adam_step(flat, mean_grad, opt, tc.learning_rate);
            model::apply_flat(config, flat, result.params);
        }

        Metrics m;
        m.epoch = epoch;
        m.train_loss = loss_sum / double(train_set.size());
        m.train_accuracy = double(hits) / double(train_set.size());
        const auto [vl, va] = evaluate(cm, result.params, val_set, tc.loss);
        m.val_loss = vl;
        m.val_accuracy = va;
        result.history.push_back(m);
        if (on_epoch) on_epoch(m);
    }
    return result;
}

std::string metrics_csv_header() { return "epoch,train_loss,train_acc,val_loss,val_acc"; }

std::string metrics_csv_line(const Metrics& m) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g,%.17g", m.epoch, m.train_loss,
                  m.train_accuracy, m.val_loss, m.val_accuracy);
    return buf;
}

}  // namespace sasq::train

#include <cmath>

#include "sasq/train/train.hpp"

namespace sasq::train {

void adam_step(std::vector<double>& params, std::span<const double> grads, AdamState& state,
               double learning_rate) {
    if (params.size() != grads.size() || params.size() != state.m.size() ||
        params.size() != state.v.size())
        throw structural_error("adam_step: parameter/gradient/state lengths disagree");
    state.step += 1;
    const double bc1 = 1.0 - std::pow(state.beta1, double(state.step));
    const double bc2 = 1.0 - std::pow(state.beta2, double(state.step));
    for (std::size_t i = 0; i < params.size(); ++i) {
        const double g = grads[i];
        state.m[i] = state.beta1 * state.m[i] + (1.0 - state.beta1) * g;
        state.v[i] = state.beta2 * state.v[i] + (1.0 - state.beta2) * g * g;
        const double mhat = state.m[i] / bc1;
        const double vhat = state.v[i] / bc2;
        params[i] -= learning_rate * mhat / (std::sqrt(vhat) + state.epsilon);
    }
}

}  // namespace sasq::train

#include <cmath>

#include "sasq/train/train.hpp"

namespace sasq::train {

const char* loss_name(LossKind k) { return k == LossKind::L1 ? "l1" : "soft_margin"; }

LossKind loss_from_name(const std::string& name) {
    if (name == "l1") return LossKind::L1;
    if (name == "soft_margin") return LossKind::SoftMargin;
    throw format_error("unknown loss '" + name + "'");
}

const char* engine_name(GradEngine e) {
    return e == GradEngine::Adjoint ? "adjoint" : "parameter_shift";
}

GradEngine engine_from_name(const std::string& name) {
    if (name == "adjoint") return GradEngine::Adjoint;
    if (name == "parameter_shift") return GradEngine::ParameterShift;
    throw format_error("unknown gradient engine '" + name + "'");
}

double loss_l1(double logit, int label) { return std::abs(double(label) - logit); }

double loss_soft_margin(double logit, int label) {
    const double m = -double(label) * logit;
    // log(1 + e^m) without overflow on either side
    return m > 0 ? m + std::log1p(std::exp(-m)) : std::log1p(std::exp(m));
}

double loss_value(LossKind kind, double logit, int label) {
    return kind == LossKind::L1 ? loss_l1(logit, label) : loss_soft_margin(logit, label);
}

double loss_dlogit(LossKind kind, double logit, int label) {
    if (kind == LossKind::L1) {
        const double r = double(label) - logit;
        return r > 0 ? -1.0 : (r < 0 ? 1.0 : 0.0);
    }
    // d/dlogit log(1 + exp(-y*logit)) = -y * sigmoid(-y*logit)
    const double m = -double(label) * logit;
    const double sig = m > 0 ? 1.0 / (1.0 + std::exp(-m)) : std::exp(m) / (1.0 + std::exp(m));
    return -double(label) * sig;
}

}  // namespace sasq::train

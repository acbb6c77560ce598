#pragma once

#include <string>
#include <utility>

#include "sasq/model/model.hpp"

namespace sasq::model {

// Plain-text checkpoint: config fields and every parameter array, numbers
// written with 17 significant digits so a save/load/save cycle is
// byte-identical.
void save_checkpoint(const std::string& path, const ModelConfig& config,
                     const ModelParams& params);

std::pair<ModelConfig, ModelParams> load_checkpoint(const std::string& path);

std::string checkpoint_text(const ModelConfig& config, const ModelParams& params);
std::pair<ModelConfig, ModelParams> parse_checkpoint(const std::string& text);

}  // namespace sasq::model

#pragma once

#include <memory>
#include <string>

#include "splitparse/model.hpp"

namespace splitparse {

// Versioned plain-text checkpoint holding mode, model dimensions, the
// vocabulary and every named parameter tensor. Values are printed with 17
// significant digits, which round-trips IEEE doubles exactly, so save/load
// is lossless and byte-stable across runs.
void save_checkpoint(const std::string& path, const Model& model);
std::string checkpoint_string(const Model& model);
std::unique_ptr<Model> load_checkpoint(const std::string& path);
std::unique_ptr<Model> load_checkpoint_string(const std::string& text);

}  // namespace splitparse

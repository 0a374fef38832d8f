#pragma once

#include <iosfwd>
#include <string>

#include "splitparse/model.hpp"
#include "splitparse/training.hpp"

namespace splitparse {

// Flag-level misuse (missing required paths, contradictory options).
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Resolved settings of one CLI run. Written next to the primary output for
// provenance.
struct RunConfig {
  Mode mode = Mode::syntax;
  std::string train_path, dev_path, test_path;
  std::string model_path, out_path, embeddings_path;
  std::string format = "trees";  // trees | splits
  ModelConfig model;
  TrainConfig train;
  int min_word_freq = 1;
  int beam = 0;  // 0 = the model's configured width
  bool oracle = false;
};

std::string resolved_config_string(const RunConfig& cfg);

void run_train(const RunConfig& cfg, std::ostream& log);
void run_parse(const RunConfig& cfg, std::istream& fallback_input, std::ostream& out,
               std::ostream& err);
void run_eval(const RunConfig& cfg, std::ostream& out);
void run_codec(const RunConfig& cfg, std::istream& fallback_input, std::ostream& out);

}  // namespace splitparse

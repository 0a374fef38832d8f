#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "splitparse/adam.hpp"
#include "splitparse/corpus.hpp"
#include "splitparse/model.hpp"

namespace splitparse {

// One teacher-forcing target: the gold split sequence in depth-first order
// plus the gold label targets (syntax: every decision span and every
// singleton; discourse: one relation per genuine split, -1 at terminals).
struct TrainingExample {
  Sentence sentence;
  SplitSequence splits;
  struct SpanLabel {
    int i = 0, j = 0, label = 0;
  };
  std::vector<SpanLabel> span_labels;
  std::vector<int> relation_labels;
};

std::vector<TrainingExample> make_examples(const Dataset& data, const Vocab& vocab);

struct TrainConfig {
  int batch_tokens = 5000;
  AdamConfig adam;
  double clip_norm = 5.0;
  int max_epochs = 50;
  std::uint64_t seed = 1;
  // Stop once the dev metric reaches this value; negative disables.
  double early_stop_metric = -1.0;
};

struct LossStats {
  double split = 0.0;
  double label = 0.0;
  int decoder_steps = 0;
  double total() const { return split + label; }
};

struct ExampleLoss {
  ad::Var split, label, total;
};

// Builds the full teacher-forced graph (encode, decode along the gold
// sequence, label every target) on the given tape.
ExampleLoss example_loss_graph(const Model& model, ad::Tape& tape, const TrainingExample& ex,
                               Rng* dropout_rng = nullptr);

// Forward-only loss of one example.
LossStats compute_loss(const Model& model, const TrainingExample& ex);

// One optimizer step on a batch: summed losses, global-norm clipping, Adam.
LossStats train_step(Model& model, AdamState& adam,
                     const std::vector<const TrainingExample*>& batch, double clip_norm,
                     Rng* dropout_rng = nullptr);

struct EpochLog {
  int epoch = 0;
  double loss_split = 0.0;
  double loss_label = 0.0;
  double dev_metric = -1.0;
};

struct TrainResult {
  std::vector<EpochLog> history;
  int best_epoch = -1;
  double best_metric = -1.0;
};

// Parses a dataset with the current parameters and returns the model
// selection metric: labeled F1 for syntax, relation F1 for discourse.
double evaluate_metric(const Model& model, const Dataset& dev);

// Epoch loop with per-epoch dev evaluation; the best-by-dev-metric parameters
// are restored into the model before returning. `log`, when given, receives
// one machine-parseable key=value line per epoch.
TrainResult train(Model& model, const std::vector<TrainingExample>& examples, const Dataset* dev,
                  const TrainConfig& cfg, std::ostream* log = nullptr);

}  // namespace splitparse

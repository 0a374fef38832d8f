#include "splitparse/training.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <numeric>
#include <ostream>

#include "splitparse/error.hpp"
#include "splitparse/inference.hpp"
#include "splitparse/metrics.hpp"
#include "splitparse/tree_codec.hpp"

namespace splitparse {

namespace {

// Singleton gold labels: the collapsed wrapper chain above each leaf, or the
// dummy label where the leaf sits directly under a binary node.
void collect_singleton_labels(const ParseTree& node, int lo, std::vector<std::string>& out) {
  if (node.is_leaf) return;
  if (node.children.size() == 1) {
    out[static_cast<size_t>(lo)] = node.label;
    return;
  }
  int off = lo;
  for (const ParseTree& c : node.children) {
    collect_singleton_labels(c, off, out);
    off += c.leaf_count();
  }
}

TrainingExample make_syntax_example(const ParseTree& tree, const Vocab& vocab) {
  TrainingExample ex;
  ex.sentence = numericalize(vocab, tree.tokens());
  const ParseTree prepared = collapse_unary(binarize(tree));
  ex.splits = to_splits(prepared);
  for (const LabeledSpan& s : to_spans(prepared))
    ex.span_labels.push_back({s.i, s.j, vocab.syn_label_id(s.label)});
  const int n = ex.sentence.n();
  std::vector<std::string> singleton(static_cast<size_t>(n), kEmptyLabel);
  collect_singleton_labels(prepared, 0, singleton);
  for (int i = 0; i < n; ++i)
    ex.span_labels.push_back({i, i + 1, vocab.syn_label_id(singleton[static_cast<size_t>(i)])});
  return ex;
}

void collect_relation_map(const DiscourseTree& t, std::map<std::pair<int, int>, std::string>& out) {
  if (t.is_edu) return;
  out[{t.i, t.j}] = t.label;
  for (const DiscourseTree& c : t.children) collect_relation_map(c, out);
}

TrainingExample make_discourse_example(const DiscourseDoc& doc, const Vocab& vocab) {
  TrainingExample ex;
  ex.sentence = numericalize(vocab, doc.tokens);
  ex.splits = to_splits_dt(doc.tree);
  std::map<std::pair<int, int>, std::string> relations;
  collect_relation_map(doc.tree, relations);
  for (const SplitDecision& d : ex.splits.decisions) {
    if (d.k == d.j) {
      ex.relation_labels.push_back(-1);
    } else {
      ex.relation_labels.push_back(vocab.dis_label_id(relations.at({d.i, d.j})));
    }
  }
  return ex;
}

}  // namespace

std::vector<TrainingExample> make_examples(const Dataset& data, const Vocab& vocab) {
  std::vector<TrainingExample> out;
  out.reserve(data.size());
  if (data.mode == Mode::syntax) {
    for (const ParseTree& t : data.trees) out.push_back(make_syntax_example(t, vocab));
  } else {
    for (const DiscourseDoc& d : data.docs) out.push_back(make_discourse_example(d, vocab));
  }
  return out;
}

ExampleLoss example_loss_graph(const Model& model, ad::Tape& tape, const TrainingExample& ex,
                               Rng* dropout_rng) {
  Model::EncoderOutput enc = model.encode(tape, ex.sentence, dropout_rng);
  Model::DecoderState state = model.initial_state(tape);
  std::vector<ad::Var> split_terms;
  split_terms.reserve(ex.splits.decisions.size());
  for (const SplitDecision& d : ex.splits.decisions) {
    Model::PointOutput po = model.point(tape, state, d.i, d.j, enc);
    split_terms.push_back(ad::scale(tape, ad::pick(tape, po.logprobs, d.k - po.lo), -1.0));
    state = std::move(po.state);
  }
  std::vector<ad::Var> label_terms;
  if (model.mode() == Mode::syntax) {
    label_terms.reserve(ex.span_labels.size());
    for (const TrainingExample::SpanLabel& sl : ex.span_labels) {
      ad::Var lp = model.syntax_label_logprobs(tape, enc, sl.i, sl.j);
      label_terms.push_back(ad::scale(tape, ad::pick(tape, lp, sl.label), -1.0));
    }
  } else {
    for (size_t t = 0; t < ex.splits.decisions.size(); ++t) {
      const int lab = ex.relation_labels[t];
      if (lab < 0) continue;
      const SplitDecision& d = ex.splits.decisions[t];
      ad::Var lp = model.discourse_label_logprobs(tape, enc, d.i, d.k, d.j);
      label_terms.push_back(ad::scale(tape, ad::pick(tape, lp, lab), -1.0));
    }
  }
  ExampleLoss loss;
  loss.split = ad::add_n(tape, split_terms);
  loss.label = ad::add_n(tape, label_terms);
  loss.total = ad::add(tape, loss.split, loss.label);
  return loss;
}

LossStats compute_loss(const Model& model, const TrainingExample& ex) {
  ad::Tape tape;
  ExampleLoss loss = example_loss_graph(model, tape, ex);
  LossStats stats;
  stats.split = tape.val(loss.split).v[0];
  stats.label = tape.val(loss.label).v[0];
  stats.decoder_steps = static_cast<int>(ex.splits.decisions.size());
  return stats;
}

LossStats train_step(Model& model, AdamState& adam,
                     const std::vector<const TrainingExample*>& batch, double clip_norm,
                     Rng* dropout_rng) {
  model.params().zero_grads();
  LossStats stats;
  for (size_t b = 0; b < batch.size(); ++b) {
    const TrainingExample& ex = *batch[b];
    ad::Tape tape;
    ExampleLoss loss = example_loss_graph(model, tape, ex, dropout_rng);
    const double total = tape.val(loss.total).v[0];
    if (!std::isfinite(total)) {
      std::string text;
      for (const std::string& w : ex.sentence.tokens) text += (text.empty() ? "" : " ") + w;
      throw NumericalError("non-finite loss on batch sentence " + std::to_string(b) + ": '" +
                           text + "'");
    }
    stats.split += tape.val(loss.split).v[0];
    stats.label += tape.val(loss.label).v[0];
    stats.decoder_steps += static_cast<int>(ex.splits.decisions.size());
    tape.backward(loss.total);
  }
  clip_global_norm(model.params(), clip_norm);
  adam.apply(model.params());
  return stats;
}

double evaluate_metric(const Model& model, const Dataset& dev) {
  if (dev.mode != model.mode())
    throw DataError("evaluate_metric: dataset mode does not match the model");
  if (model.mode() == Mode::syntax) {
    std::vector<ParseTree> preds;
    preds.reserve(dev.trees.size());
    for (const ParseTree& gold : dev.trees) {
      const Sentence s = numericalize(model.vocab(), gold.tokens());
      const std::vector<std::string> tags = gold.preterminals();
      preds.push_back(beam_parse(model, s, model.config().beam_width, &tags).tree);
    }
    return labeled_prf(dev.trees, preds).f1;
  }
  std::vector<DiscourseTree> gold, preds;
  gold.reserve(dev.docs.size());
  for (const DiscourseDoc& doc : dev.docs) {
    gold.push_back(doc.tree);
    const Sentence s = numericalize(model.vocab(), doc.tokens);
    preds.push_back(greedy_discourse_parse(model, s).tree);
  }
  return rst_prf(gold, preds).relation.f1;
}

TrainResult train(Model& model, const std::vector<TrainingExample>& examples, const Dataset* dev,
                  const TrainConfig& cfg, std::ostream* log) {
  if (examples.empty()) throw DataError("train: empty corpus");
  for (const TrainingExample& ex : examples)
    if (ex.sentence.n() > cfg.batch_tokens)
      throw DataError("train: batch_tokens=" + std::to_string(cfg.batch_tokens) +
                      " is smaller than a sentence of length " + std::to_string(ex.sentence.n()));

  // Bucket by length, then pack consecutive sentences up to the token budget.
  std::vector<size_t> order(examples.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return examples[a].sentence.n() < examples[b].sentence.n();
  });
  std::vector<std::vector<const TrainingExample*>> batches;
  for (size_t pos = 0; pos < order.size();) {
    std::vector<const TrainingExample*> batch;
    int budget = 0;
    while (pos < order.size()) {
      const int n = examples[order[pos]].sentence.n();
      if (!batch.empty() && budget + n > cfg.batch_tokens) break;
      batch.push_back(&examples[order[pos]]);
      budget += n;
      ++pos;
    }
    batches.push_back(std::move(batch));
  }

  Rng rng(cfg.seed);
  AdamState adam(model.params(), cfg.adam);
  TrainResult result;
  std::vector<Tensor> best;
  Rng* dropout_rng = model.config().dropout > 0.0 ? &rng : nullptr;

  for (int epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
    // Fisher-Yates on the batch order; portable across standard libraries.
    std::vector<size_t> bo(batches.size());
    std::iota(bo.begin(), bo.end(), 0);
    for (size_t i = bo.size(); i > 1; --i)
      std::swap(bo[i - 1], bo[rng.raw() % i]);

    LossStats epoch_stats;
    for (size_t b : bo) {
      LossStats s = train_step(model, adam, batches[b], cfg.clip_norm, dropout_rng);
      epoch_stats.split += s.split;
      epoch_stats.label += s.label;
    }

    EpochLog el;
    el.epoch = epoch;
    el.loss_split = epoch_stats.split;
    el.loss_label = epoch_stats.label;
    if (dev) el.dev_metric = evaluate_metric(model, *dev);
    result.history.push_back(el);

    if (log) {
      std::ostream& os = *log;
      os << "epoch=" << epoch << std::fixed << std::setprecision(6)
         << " loss_split=" << el.loss_split << " loss_label=" << el.loss_label
         << " lr=" << std::setprecision(8) << adam.current_lr() << " steps=" << adam.step;
      if (dev) os << std::setprecision(4) << " dev_metric=" << el.dev_metric;
      os << "\n";
    }

    if (dev && el.dev_metric > result.best_metric) {
      result.best_metric = el.dev_metric;
      result.best_epoch = epoch;
      best = model.params().snapshot_values();
    }
    if (dev && cfg.early_stop_metric >= 0.0 && el.dev_metric >= cfg.early_stop_metric) break;
  }

  if (!best.empty()) model.params().restore_values(best);
  return result;
}

}  // namespace splitparse

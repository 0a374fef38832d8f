#include "splitparse/inference.hpp"

#include <algorithm>
#include <map>

#include "splitparse/error.hpp"
#include "splitparse/tree_codec.hpp"

namespace splitparse {

namespace {

// Candidate split points of one distribution, best first; ties by smaller k.
std::vector<std::pair<int, double>> top_candidates(const Model::PointDist& dist, int limit) {
  std::vector<std::pair<int, double>> ks;
  ks.reserve(dist.logp.size());
  for (size_t idx = 0; idx < dist.logp.size(); ++idx)
    ks.emplace_back(dist.lo + static_cast<int>(idx), dist.logp[idx]);
  std::sort(ks.begin(), ks.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  if (static_cast<int>(ks.size()) > limit) ks.resize(static_cast<size_t>(limit));
  return ks;
}

struct LabeledBuilder {
  const std::vector<SplitDecision>& decisions;
  const std::map<std::pair<int, int>, std::string>& span_labels;
  const std::vector<std::string>& singleton_labels;
  const Sentence& sentence;
  const std::vector<std::string>* preterminals;
  size_t pos = 0;

  ParseTree build(int i, int j) {
    if (j - i == 1) {
      const std::string tag =
          preterminals ? (*preterminals)[static_cast<size_t>(i)] : std::string("XX");
      ParseTree leaf =
          ParseTree::make_leaf(i + 1, sentence.tokens[static_cast<size_t>(i)], tag);
      const std::string& wrap = singleton_labels[static_cast<size_t>(i)];
      if (wrap == kEmptyLabel) return leaf;
      return ParseTree::make_internal(wrap, {std::move(leaf)});
    }
    const SplitDecision& d = decisions[pos++];
    ParseTree left = build(i, d.k);
    ParseTree right = build(d.k, j);
    return ParseTree::make_internal(span_labels.at({i, j}), {std::move(left), std::move(right)});
  }
};

}  // namespace

ParseResult beam_parse(const Model& model, const Sentence& sentence, int beam_width,
                       const std::vector<std::string>* preterminals) {
  if (model.mode() != Mode::syntax)
    throw InvalidArgument("beam_parse: model is not a syntax model");
  if (beam_width < 1) throw InvalidArgument("beam_parse: beam width must be >= 1");
  if (preterminals && static_cast<int>(preterminals->size()) != sentence.n())
    throw InvalidArgument("beam_parse: preterminal count does not match the sentence");
  const int n = sentence.n();
  if (n < 1) throw InvalidArgument("beam_parse: empty sentence");

  const Model::Encoding enc = model.encode_concrete(sentence);
  ParseResult result;

  const int steps = n - 1;
  std::vector<BeamItem> beam(1);
  beam[0].state = model.initial_state_concrete();
  beam[0].slots.assign(static_cast<size_t>(std::max(steps, 1)), {0, 0});
  beam[0].slots[0] = {0, n};

  struct Candidate {
    double logp;
    int k;
    size_t item;
    Model::State state;
    std::vector<std::pair<int, int>> slots;
    std::vector<SplitDecision> decided;
  };

  for (int t = 1; t <= steps; ++t) {
    std::vector<Candidate> candidates;
    for (size_t idx = 0; idx < beam.size(); ++idx) {
      BeamItem& item = beam[idx];
      const auto [i, j] = item.slots[static_cast<size_t>(t - 1)];
      Model::PointDist dist = model.point_concrete(item.state, i, j, enc);
      for (const auto& [k, lp] : top_candidates(dist, beam_width)) {
        Candidate c;
        c.logp = item.logp + lp;
        c.k = k;
        c.item = idx;
        c.state = dist.state;
        c.slots = item.slots;
        // Left child splits next; the right child follows the whole left
        // subtree, i.e. k - i - 1 decisions later.
        if (k > i + 1) c.slots[static_cast<size_t>(t)] = {i, k};
        if (j > k + 1) c.slots[static_cast<size_t>(t + (k - i - 1))] = {k, j};
        c.decided = item.decided;
        c.decided.push_back({i, j, k});
        candidates.push_back(std::move(c));
      }
    }
    std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
      if (a.logp != b.logp) return a.logp > b.logp;
      if (a.k != b.k) return a.k < b.k;
      return a.item < b.item;
    });
    if (static_cast<int>(candidates.size()) > beam_width)
      candidates.resize(static_cast<size_t>(beam_width));
    std::vector<BeamItem> next;
    next.reserve(candidates.size());
    for (Candidate& c : candidates)
      next.push_back({c.logp, std::move(c.state), std::move(c.slots), std::move(c.decided)});
    beam = std::move(next);
    ++result.decoder_steps;
  }

  const BeamItem& best = beam.front();
  result.logp = best.logp;
  result.splits.mode = Mode::syntax;
  result.splits.decisions = best.decided;

  // Label every decision span and every singleton, then assemble.
  std::map<std::pair<int, int>, std::string> span_labels;
  for (const SplitDecision& d : best.decided) {
    const bool is_root = d.i == 0 && d.j == n;
    const int lab = model.argmax_syntax_label(enc, d.i, d.j, /*exclude_empty=*/is_root);
    span_labels[{d.i, d.j}] = model.vocab().syn_label(lab);
  }
  std::vector<std::string> singleton_labels(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    const bool is_root = n == 1;  // a one-token sentence keeps a real root label
    const int lab = model.argmax_syntax_label(enc, i, i + 1, is_root);
    singleton_labels[static_cast<size_t>(i)] = model.vocab().syn_label(lab);
  }
  LabeledBuilder builder{best.decided, span_labels, singleton_labels, sentence, preterminals};
  ParseTree assembled = builder.build(0, n);

  // Structural validity: the assembled tree must encode back to the decisions.
  if (n > 1 && !(to_splits(assembled) == result.splits))
    throw InvalidArgument("beam_parse: assembled tree does not round-trip its decisions");
  result.tree = expand_unary(debinarize(assembled));
  return result;
}

namespace {

DiscourseResult finish_discourse(const Model& model, const std::vector<SplitDecision>& decided,
                                 const std::map<std::pair<int, int>, std::string>& labels,
                                 int n, double logp, int steps) {
  DiscourseResult result;
  result.splits.mode = Mode::discourse;
  result.splits.decisions = decided;
  result.logp = logp;
  result.decoder_steps = steps;
  result.tree = from_splits_dt(result.splits, n);
  struct {
    void operator()(DiscourseTree& t,
                    const std::map<std::pair<int, int>, std::string>& labels) const {
      if (t.is_edu) return;
      t.label = labels.at({t.i, t.j});
      for (DiscourseTree& c : t.children) (*this)(c, labels);
    }
  } attach;
  attach(result.tree, labels);
  result.tree.edu_spans(result.edus);
  (void)model;
  return result;
}

}  // namespace

DiscourseResult greedy_discourse_parse(const Model& model, const Sentence& sentence) {
  if (model.mode() != Mode::discourse)
    throw InvalidArgument("greedy_discourse_parse: model is not a discourse model");
  const int n = sentence.n();
  if (n < 1) throw InvalidArgument("greedy_discourse_parse: empty sentence");
  std::map<std::pair<int, int>, std::string> labels;
  std::vector<SplitDecision> decided;
  double logp = 0.0;
  int steps = 0;
  if (n == 1) return finish_discourse(model, decided, labels, n, logp, steps);

  const Model::Encoding enc = model.encode_concrete(sentence);
  Model::State state = model.initial_state_concrete();
  std::vector<std::pair<int, int>> stack{{0, n}};
  while (!stack.empty()) {
    const auto [i, j] = stack.back();
    stack.pop_back();
    Model::PointDist dist = model.point_concrete(state, i, j, enc);
    state = std::move(dist.state);
    ++steps;
    int k = dist.lo;
    for (size_t idx = 1; idx < dist.logp.size(); ++idx)
      if (dist.logp[idx] > dist.logp[static_cast<size_t>(k - dist.lo)])
        k = dist.lo + static_cast<int>(idx);
    logp += dist.logp[static_cast<size_t>(k - dist.lo)];
    decided.push_back({i, j, k});
    if (k != j) {
      const int lab = model.argmax_discourse_label(enc, i, k, j);
      labels[{i, j}] = model.vocab().dis_label(lab);
      if (j - k >= 2) stack.emplace_back(k, j);
      if (k - i >= 2) stack.emplace_back(i, k);  // left on top: depth-first
    }
  }
  return finish_discourse(model, decided, labels, n, logp, steps);
}

DiscourseResult beam_discourse_parse(const Model& model, const Sentence& sentence,
                                     int beam_width) {
  if (model.mode() != Mode::discourse)
    throw InvalidArgument("beam_discourse_parse: model is not a discourse model");
  if (beam_width < 1) throw InvalidArgument("beam_discourse_parse: beam width must be >= 1");
  const int n = sentence.n();
  if (n < 1) throw InvalidArgument("beam_discourse_parse: empty sentence");
  if (n == 1)
    return finish_discourse(model, {}, {}, n, 0.0, 0);

  const Model::Encoding enc = model.encode_concrete(sentence);

  struct Item {
    double logp = 0.0;
    Model::State state;
    std::vector<std::pair<int, int>> stack;
    std::vector<SplitDecision> decided;
  };
  std::vector<Item> active(1);
  active[0].state = model.initial_state_concrete();
  active[0].stack.emplace_back(0, n);
  std::vector<Item> done;
  int steps = 0;

  while (!active.empty()) {
    ++steps;
    struct Candidate {
      double logp;
      int k;
      size_t item;
      Item value;
    };
    std::vector<Candidate> candidates;
    for (size_t idx = 0; idx < active.size(); ++idx) {
      Item& item = active[idx];
      const auto [i, j] = item.stack.back();
      Model::PointDist dist = model.point_concrete(item.state, i, j, enc);
      for (const auto& [k, lp] : top_candidates(dist, beam_width)) {
        Candidate c;
        c.logp = item.logp + lp;
        c.k = k;
        c.item = idx;
        c.value.logp = c.logp;
        c.value.state = dist.state;
        c.value.stack = item.stack;
        c.value.stack.pop_back();
        c.value.decided = item.decided;
        c.value.decided.push_back({i, j, k});
        if (k != j) {
          if (j - k >= 2) c.value.stack.emplace_back(k, j);
          if (k - i >= 2) c.value.stack.emplace_back(i, k);
        }
        candidates.push_back(std::move(c));
      }
    }
    std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
      if (a.logp != b.logp) return a.logp > b.logp;
      if (a.k != b.k) return a.k < b.k;
      return a.item < b.item;
    });
    std::vector<Item> next;
    for (Candidate& c : candidates) {
      if (c.value.stack.empty())
        done.push_back(std::move(c.value));
      else if (static_cast<int>(next.size()) < beam_width)
        next.push_back(std::move(c.value));
    }
    active = std::move(next);
  }

  const Item* best = nullptr;
  for (const Item& it : done)
    if (!best || it.logp > best->logp) best = &it;

  std::map<std::pair<int, int>, std::string> labels;
  for (const SplitDecision& d : best->decided)
    if (d.k != d.j)
      labels[{d.i, d.j}] =
          model.vocab().dis_label(model.argmax_discourse_label(enc, d.i, d.k, d.j));
  return finish_discourse(model, best->decided, labels, n, best->logp, steps);
}

namespace {

struct BruteForce {
  const Model& model;
  const Model::Encoding& enc;
  Mode mode;
  OracleResult best;
  std::vector<SplitDecision> current;

  void search(std::vector<std::pair<int, int>>& stack, const Model::State& state, double logp) {
    if (stack.empty()) {
      ++best.sequences_scored;
      if (best.sequences_scored == 1 || logp > best.logp) {
        best.logp = logp;
        best.splits.decisions = current;
      }
      return;
    }
    const auto [i, j] = stack.back();
    stack.pop_back();
    Model::PointDist dist = model.point_concrete(state, i, j, enc);
    for (size_t idx = 0; idx < dist.logp.size(); ++idx) {
      const int k = dist.lo + static_cast<int>(idx);
      const size_t mark = stack.size();
      if (mode == Mode::syntax || k != j) {
        if (j - k >= 2) stack.emplace_back(k, j);
        if (k - i >= 2) stack.emplace_back(i, k);
      }
      current.push_back({i, j, k});
      search(stack, dist.state, logp + dist.logp[idx]);
      current.pop_back();
      stack.resize(mark);
    }
    stack.emplace_back(i, j);
  }
};

}  // namespace

OracleResult brute_force_parse(const Model& model, const Sentence& sentence, Mode mode,
                               int max_n) {
  if (mode != model.mode())
    throw InvalidArgument("brute_force_parse: mode does not match the model");
  const int n = sentence.n();
  if (n < 1) throw InvalidArgument("brute_force_parse: empty sentence");
  if (n > max_n)
    throw InvalidArgument("brute_force_parse: n=" + std::to_string(n) +
                          " exceeds the exhaustive limit " + std::to_string(max_n));
  OracleResult base;
  base.splits.mode = mode;
  if (n == 1) {
    base.sequences_scored = 1;
    return base;
  }
  const Model::Encoding enc = model.encode_concrete(sentence);
  BruteForce bf{model, enc, mode, base, {}};
  bf.best.splits.mode = mode;
  std::vector<std::pair<int, int>> stack{{0, n}};
  bf.search(stack, model.initial_state_concrete(), 0.0);
  return bf.best;
}

}  // namespace splitparse

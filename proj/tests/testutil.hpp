#pragma once

// Shared helpers for the test suites: independent tree enumerators and
// generators (kept free of the codec under test), finite-difference gradient
// checking, and deterministic toy corpora.

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "splitparse/corpus.hpp"
#include "splitparse/model.hpp"
#include "splitparse/params.hpp"
#include "splitparse/tree.hpp"

namespace testutil {

using namespace splitparse;

// ---- exhaustive enumeration (independent of tree_codec) ----------------------

// Every binary tree shape over tokens lo+1..hi (boundary span (lo,hi)).
inline std::vector<ParseTree> all_binary_trees(int lo, int hi) {
  std::vector<ParseTree> out;
  if (hi - lo == 1) {
    out.push_back(ParseTree::make_leaf(lo + 1, "w" + std::to_string(lo + 1), "T"));
    return out;
  }
  for (int k = lo + 1; k < hi; ++k) {
    for (const ParseTree& left : all_binary_trees(lo, k))
      for (const ParseTree& right : all_binary_trees(k, hi))
        out.push_back(ParseTree::make_internal("X", {left, right}));
  }
  return out;
}

inline std::vector<ParseTree> all_binary_trees(int n) { return all_binary_trees(0, n); }

// Every discourse tree over boundary span (lo,hi): an EDU, or a split into
// two sub-trees.
inline std::vector<DiscourseTree> all_discourse_trees(int lo, int hi) {
  std::vector<DiscourseTree> out;
  out.push_back(DiscourseTree::make_edu(lo, hi));
  for (int k = lo + 1; k < hi; ++k) {
    for (const DiscourseTree& left : all_discourse_trees(lo, k))
      for (const DiscourseTree& right : all_discourse_trees(k, hi))
        out.push_back(DiscourseTree::make_rel("R_NN", left, right));
  }
  return out;
}

inline std::vector<DiscourseTree> all_discourse_trees(int n) {
  return all_discourse_trees(0, n);
}

inline long catalan(int n) {
  std::vector<long> c(static_cast<size_t>(n + 1), 0);
  c[0] = 1;
  for (int i = 1; i <= n; ++i)
    for (int k = 0; k < i; ++k)
      c[static_cast<size_t>(i)] += c[static_cast<size_t>(k)] * c[static_cast<size_t>(i - 1 - k)];
  return c[static_cast<size_t>(n)];
}

// ---- random trees -------------------------------------------------------------

inline ParseTree random_nary_tree(Rng& rng, int lo, int hi, int depth = 0) {
  static const std::vector<std::string> labels = {"A", "B", "C", "D", "E"};
  if (hi - lo == 1) {
    ParseTree leaf = ParseTree::make_leaf(lo + 1, "w" + std::to_string(lo + 1), "T");
    if (rng.uniform() < 0.2)  // singleton wrapper
      return ParseTree::make_internal(labels[static_cast<size_t>(rng.uniform_int(0, 4))],
                                      {std::move(leaf)});
    return leaf;
  }
  const int width = hi - lo;
  if (depth > 0 && rng.uniform() < 0.15 && width >= 2) {
    // unary chain link over a multi-token span
    ParseTree inner = random_nary_tree(rng, lo, hi, depth + 1);
    if (!inner.is_leaf && inner.children.size() >= 2)
      return ParseTree::make_internal(labels[static_cast<size_t>(rng.uniform_int(0, 4))],
                                      {std::move(inner)});
  }
  const int arity = std::min(width, rng.uniform_int(2, 4));
  std::vector<int> cuts{lo, hi};
  while (static_cast<int>(cuts.size()) < arity + 1) {
    const int c = rng.uniform_int(lo + 1, hi - 1);
    if (std::find(cuts.begin(), cuts.end(), c) == cuts.end()) cuts.push_back(c);
  }
  std::sort(cuts.begin(), cuts.end());
  std::vector<ParseTree> kids;
  for (size_t p = 0; p + 1 < cuts.size(); ++p)
    kids.push_back(random_nary_tree(rng, cuts[p], cuts[p + 1], depth + 1));
  return ParseTree::make_internal(labels[static_cast<size_t>(rng.uniform_int(0, 4))],
                                  std::move(kids));
}

inline ParseTree random_nary_tree(Rng& rng, int n) {
  ParseTree t = random_nary_tree(rng, 0, n);
  if (t.is_leaf) t = ParseTree::make_internal("S", {std::move(t)});
  return t;
}

inline DiscourseTree random_discourse_tree(Rng& rng, int lo, int hi,
                                           const std::vector<std::string>& labels) {
  if (hi - lo == 1 || rng.uniform() < 0.3) return DiscourseTree::make_edu(lo, hi);
  const int k = rng.uniform_int(lo + 1, hi - 1);
  return DiscourseTree::make_rel(labels[rng.raw() % labels.size()],
                                 random_discourse_tree(rng, lo, k, labels),
                                 random_discourse_tree(rng, k, hi, labels));
}

// ---- finite differences --------------------------------------------------------

struct GradReport {
  double max_rel_err = 0.0;
  std::string worst_param;
};

// Central finite differences of loss() against the analytic gradients already
// stored in the params. Relative error uses max(1,|a|,|n|) so near-zero
// gradients are judged on the loss scale.
inline GradReport finite_diff_check(ParamStore& params, const std::function<double()>& loss,
                                    double h = 1e-5) {
  GradReport report;
  for (auto& p : params.items()) {
    for (size_t idx = 0; idx < p->value.v.size(); ++idx) {
      const double saved = p->value.v[idx];
      p->value.v[idx] = saved + h;
      const double up = loss();
      p->value.v[idx] = saved - h;
      const double down = loss();
      p->value.v[idx] = saved;
      const double numeric = (up - down) / (2.0 * h);
      const double analytic = p->grad.v[idx];
      const double err = std::abs(analytic - numeric) /
                         std::max({1.0, std::abs(analytic), std::abs(numeric)});
      if (err > report.max_rel_err) {
        report.max_rel_err = err;
        report.worst_param = p->name + "[" + std::to_string(idx) + "]";
      }
    }
  }
  return report;
}

// ---- toy corpora ---------------------------------------------------------------

// Small CFG treebank: n-ary VPs exercise binarization, gerund clauses give
// S-VP unary chains, names give singleton NP wrappers. The grammar is
// unambiguous given the word classes, so it is cleanly learnable.
inline ParseTree toy_np(Rng& rng) {
  static const std::vector<std::string> det = {"the", "a", "every"};
  static const std::vector<std::string> adj = {"big", "red", "happy"};
  static const std::vector<std::string> noun = {"cat", "dog", "pizza", "game", "car", "bird"};
  static const std::vector<std::string> name = {"alice", "bob", "carol"};
  const double r = rng.uniform();
  if (r < 0.4)
    return ParseTree::make_internal(
        "NP", {ParseTree::make_leaf(0, name[rng.raw() % name.size()], "NNP")});
  if (r < 0.8)
    return ParseTree::make_internal(
        "NP", {ParseTree::make_leaf(0, det[rng.raw() % det.size()], "DT"),
               ParseTree::make_leaf(0, noun[rng.raw() % noun.size()], "NN")});
  return ParseTree::make_internal(
      "NP", {ParseTree::make_leaf(0, det[rng.raw() % det.size()], "DT"),
             ParseTree::make_leaf(0, adj[rng.raw() % adj.size()], "JJ"),
             ParseTree::make_leaf(0, noun[rng.raw() % noun.size()], "NN")});
}

inline ParseTree toy_vp(Rng& rng) {
  static const std::vector<std::string> verb = {"sees", "likes", "eats", "enjoys"};
  static const std::vector<std::string> ger = {"playing", "eating", "watching"};
  static const std::vector<std::string> adv = {"often", "quietly"};
  static const std::vector<std::string> prep = {"with", "near"};
  const double r = rng.uniform();
  ParseTree v = ParseTree::make_leaf(0, verb[rng.raw() % verb.size()], "VBZ");
  if (r < 0.4) return ParseTree::make_internal("VP", {v, toy_np(rng)});
  if (r < 0.6) {
    ParseTree pp = ParseTree::make_internal(
        "PP", {ParseTree::make_leaf(0, prep[rng.raw() % prep.size()], "IN"), toy_np(rng)});
    return ParseTree::make_internal("VP", {v, toy_np(rng), pp});  // 3-ary
  }
  if (r < 0.8) {
    ParseTree a = ParseTree::make_leaf(0, adv[rng.raw() % adv.size()], "RB");
    return ParseTree::make_internal("VP", {a, v, toy_np(rng)});  // 3-ary
  }
  ParseTree inner_vp = ParseTree::make_internal(
      "VP", {ParseTree::make_leaf(0, ger[rng.raw() % ger.size()], "VBG"), toy_np(rng)});
  ParseTree clause = ParseTree::make_internal("S", {std::move(inner_vp)});  // unary chain
  return ParseTree::make_internal("VP", {std::move(v), std::move(clause)});
}

inline std::vector<ParseTree> toy_syntax_corpus(int count, int min_len, int max_len,
                                                std::uint64_t seed) {
  Rng rng(seed);
  std::vector<ParseTree> out;
  std::set<std::string> seen;
  while (static_cast<int>(out.size()) < count) {
    ParseTree dot = ParseTree::make_leaf(0, ".", "PUNC");
    ParseTree s = rng.uniform() < 0.75
                      ? ParseTree::make_internal("S", {toy_np(rng), toy_vp(rng), dot})
                      : ParseTree::make_internal("S", {toy_vp(rng), dot});
    const int n = s.leaf_count();
    if (n < min_len || n > max_len) continue;
    std::string key;
    for (const std::string& w : s.tokens()) key += w + " ";
    if (!seen.insert(key).second) continue;
    renumber_leaves(s);
    out.push_back(std::move(s));
  }
  return out;
}

// Discourse toy texts: right-branching trees whose relation is signalled by
// the cue word opening the right span, and EDU boundaries marked by commas.
inline const std::vector<std::pair<std::string, std::string>>& toy_cues() {
  static const std::vector<std::pair<std::string, std::string>> cues = {
      {"because", "Explanation_NS"},
      {"but", "Contrast_NN"},
      {"and", "Joint_NN"},
      {"while", "Background_NS"},
      {"saying", "Attribution_SN"},
  };
  return cues;
}

inline std::vector<std::string> toy_edu_content(Rng& rng) {
  static const std::vector<std::string> subj = {"alice", "bob", "carol", "dan"};
  static const std::vector<std::string> verb = {"slept", "smiled", "left", "agreed"};
  static const std::vector<std::string> obj = {"early", "today", "loudly"};
  std::vector<std::string> out{subj[rng.raw() % subj.size()], verb[rng.raw() % verb.size()]};
  if (rng.uniform() < 0.5) out.push_back(obj[rng.raw() % obj.size()]);
  return out;
}

inline std::vector<DiscourseDoc> toy_discourse_corpus(int count, int min_edus, int max_edus,
                                                      std::uint64_t seed) {
  Rng rng(seed);
  std::vector<DiscourseDoc> out;
  std::set<std::string> seen;
  while (static_cast<int>(out.size()) < count) {
    const int edus = rng.uniform_int(min_edus, max_edus);
    DiscourseDoc doc;
    std::vector<std::pair<int, int>> spans;
    std::vector<std::string> relations;
    for (int e = 0; e < edus; ++e) {
      const int start = static_cast<int>(doc.tokens.size());
      if (e > 0) {
        const auto& [cue, rel] = toy_cues()[rng.raw() % toy_cues().size()];
        doc.tokens.push_back(cue);
        relations.push_back(rel);
      }
      for (const std::string& w : toy_edu_content(rng)) doc.tokens.push_back(w);
      doc.tokens.push_back(e + 1 == edus ? "." : ",");
      spans.emplace_back(start, static_cast<int>(doc.tokens.size()));
    }
    std::string key;
    for (const std::string& w : doc.tokens) key += w + " ";
    if (!seen.insert(key).second) continue;
    // right-branching over the EDUs
    DiscourseTree tree = DiscourseTree::make_edu(spans.back().first, spans.back().second);
    for (int e = edus - 2; e >= 0; --e)
      tree = DiscourseTree::make_rel(relations[static_cast<size_t>(e)],
                                     DiscourseTree::make_edu(spans[static_cast<size_t>(e)].first,
                                                             spans[static_cast<size_t>(e)].second),
                                     std::move(tree));
    doc.tree = std::move(tree);
    out.push_back(std::move(doc));
  }
  return out;
}

// ---- model helpers -------------------------------------------------------------

inline ModelConfig tiny_config(int hidden = 8, int layers = 2) {
  ModelConfig cfg;
  cfg.word_emb_dim = 6;
  cfg.char_emb_dim = 4;
  cfg.char_rnn_hidden = 3;
  cfg.encoder_hidden = hidden;
  cfg.encoder_layers = layers;
  cfg.decoder_layers = layers;
  cfg.mlp_dim = 10;
  cfg.beam_width = 4;
  return cfg;
}

inline Dataset tiny_syntax_dataset() {
  Dataset ds;
  ds.mode = Mode::syntax;
  ds.trees = parse_ptb_string(
      "(S (NP (DT the) (NN cat)) (VP (VBZ sees) (NP (NNP bob))) (PUNC .))\n"
      "(S (NP (NNP alice)) (VP (VBZ likes) (NP (DT a) (NN dog))) (PUNC .))\n"
      "(S (VP (VBZ eats) (NP (DT the) (NN pizza))) (PUNC .))\n");
  return ds;
}

inline Dataset tiny_discourse_dataset() {
  Dataset ds;
  ds.mode = Mode::discourse;
  ds.docs = parse_discourse_string(
      "(Joint_NN (EDU alice slept ,) (EDU and bob smiled .))\n"
      "(Contrast_NN (EDU carol left ,) (Explanation_NS (EDU but dan agreed ,) (EDU because "
      "alice smiled .)))\n");
  return ds;
}

inline Model tiny_syntax_model(std::uint64_t seed = 7, int hidden = 8, int layers = 2) {
  Dataset ds = tiny_syntax_dataset();
  Vocab vocab = build_vocab(ds, 1);
  return Model(Mode::syntax, tiny_config(hidden, layers), vocab, seed);
}

inline Model tiny_discourse_model(std::uint64_t seed = 7, int hidden = 8, int layers = 2) {
  Dataset ds = tiny_discourse_dataset();
  Vocab vocab = build_vocab(ds, 1);
  return Model(Mode::discourse, tiny_config(hidden, layers), vocab, seed);
}

inline Sentence toy_sentence(const Model& model, const std::vector<std::string>& tokens) {
  return numericalize(model.vocab(), tokens);
}

inline std::vector<std::string> placeholder_tokens(int n) {
  std::vector<std::string> out;
  for (int i = 1; i <= n; ++i) out.push_back("w" + std::to_string(i));
  return out;
}

}  // namespace testutil

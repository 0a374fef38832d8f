#pragma once

#include <utility>
#include <vector>

#include "splitparse/model.hpp"
#include "splitparse/tree.hpp"

namespace splitparse {

// A partial decode: cumulative split log-probability, decoder state, the
// per-step schedule of pending spans (slot t-1 is split at step t) and the
// decisions taken so far.
struct BeamItem {
  double logp = 0.0;
  Model::State state;
  std::vector<std::pair<int, int>> slots;
  std::vector<SplitDecision> decided;
};

struct ParseResult {
  ParseTree tree;  // labeled, debinarized, unary-expanded
  SplitSequence splits;
  double logp = 0.0;       // structure log-probability of the best item
  int decoder_steps = 0;   // sequential decoder steps taken (n-1)
};

// Top-down beam-search decoding. Runs exactly n-1 decoder steps; each item
// expands its current span over its best valid split points and the beam is
// pruned to width B by log-probability (ties: smaller k, then earlier item).
// The best structure is labeled span-by-span, singletons included.
ParseResult beam_parse(const Model& model, const Sentence& sentence, int beam_width,
                       const std::vector<std::string>* preterminals = nullptr);

struct DiscourseResult {
  DiscourseTree tree;  // labeled
  SplitSequence splits;
  double logp = 0.0;
  int decoder_steps = 0;
  std::vector<std::pair<int, int>> edus;
};

// Stack-based greedy decoding from the full span; k = j ends a span as an
// EDU, so segmentation falls out of parsing. Width-1 spans are implicit EDUs.
DiscourseResult greedy_discourse_parse(const Model& model, const Sentence& sentence);

// Beam extension of the greedy loop; beam_width 1 reproduces it.
DiscourseResult beam_discourse_parse(const Model& model, const Sentence& sentence,
                                     int beam_width);

struct OracleResult {
  SplitSequence splits;
  double logp = 0.0;
  long sequences_scored = 0;
};

// Exhaustively scores every valid split sequence by teacher-forced decoder
// replay and returns the maximum. Exponential; refuses n > max_n.
OracleResult brute_force_parse(const Model& model, const Sentence& sentence, Mode mode,
                               int max_n = 10);

}  // namespace splitparse

#pragma once

#include <vector>

#include "splitparse/tree.hpp"

namespace splitparse {

struct PRF {
  double precision = 0.0, recall = 0.0, f1 = 0.0;  // percentages in [0,100]
  long matched = 0, gold_count = 0, pred_count = 0;
};

PRF make_prf(long matched, long gold_count, long pred_count);

// Labeled bracketing P/R/F1 over n-ary trees, micro-averaged. Trees are
// debinarized and unary-expanded first; dummy-labeled spans and the
// preterminal layer are excluded, singleton phrase nodes count.
PRF labeled_prf(const std::vector<ParseTree>& gold, const std::vector<ParseTree>& pred);

struct RstScores {
  PRF span, nuclearity, relation;
};

// Span / nuclearity / relation F1 over internal discourse nodes, matched in
// token-boundary space so segmentation errors propagate end to end.
RstScores rst_prf(const std::vector<DiscourseTree>& gold,
                  const std::vector<DiscourseTree>& pred);

}  // namespace splitparse

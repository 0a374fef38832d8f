#pragma once

#include <string>
#include <vector>

namespace splitparse {

enum class Mode { syntax, discourse };

std::string mode_name(Mode m);
Mode parse_mode(const std::string& s);

// Dummy label introduced by right-branching binarization and removed again
// by debinarize. Also the "no extra node" singleton label.
extern const std::string kEmptyLabel;

// Value-semantic n-ary constituency tree. A leaf carries the token, its
// 1-based position and its preterminal (POS) label; an internal node carries
// a phrase label and ordered children.
struct ParseTree {
  bool is_leaf = false;
  std::string label;  // phrase label, or preterminal for a leaf
  std::string token;  // leaf only
  int token_index = 0;
  std::vector<ParseTree> children;

  static ParseTree make_leaf(int token_index, std::string token, std::string preterminal);
  static ParseTree make_internal(std::string label, std::vector<ParseTree> children);

  int leaf_count() const;
  void collect_leaves(std::vector<const ParseTree*>& out) const;
  std::vector<std::string> tokens() const;
  std::vector<std::string> preterminals() const;
  bool operator==(const ParseTree& o) const;
};

// Returns true when the two trees have the same branching shape, ignoring
// labels and tokens.
bool same_shape(const ParseTree& a, const ParseTree& b);

// Renumbers leaf token indices left to right starting at 1.
void renumber_leaves(ParseTree& t);

// Binary discourse tree over token boundaries: leaves are EDUs spanning
// (i, j), internal nodes carry a joint relation_nuclearity label such as
// "Elaboration_NS". Every node stores its boundary span.
struct DiscourseTree {
  bool is_edu = false;
  int i = 0, j = 0;
  std::string label;  // internal only
  std::vector<DiscourseTree> children;

  static DiscourseTree make_edu(int i, int j);
  static DiscourseTree make_rel(std::string label, DiscourseTree left, DiscourseTree right);

  void edu_spans(std::vector<std::pair<int, int>>& out) const;
  bool operator==(const DiscourseTree& o) const;
};

std::string nuclearity_of(const std::string& relation_nuclearity);
std::string relation_of(const std::string& relation_nuclearity);

// One conditional splitting decision (i,j) -> k over boundary indices.
// Syntax: i < k < j. Discourse: i < k <= j, where k = j ends the span as
// an EDU.
struct SplitDecision {
  int i = 0, j = 0, k = 0;
  bool operator==(const SplitDecision& o) const { return i == o.i && j == o.j && k == o.k; }
};

struct SplitSequence {
  Mode mode = Mode::syntax;
  std::vector<SplitDecision> decisions;
  bool operator==(const SplitSequence& o) const {
    return mode == o.mode && decisions == o.decisions;
  }
};

std::string format_decision(const SplitDecision& d);    // "(i,j)->k"
std::string format_sequence(const SplitSequence& s);    // space-separated

// Boundary-based labeled span: 0 <= i < j <= n.
struct LabeledSpan {
  int i = 0, j = 0;
  std::string label;
  bool operator==(const LabeledSpan& o) const {
    return i == o.i && j == o.j && label == o.label;
  }
  bool operator<(const LabeledSpan& o) const {
    if (i != o.i) return i < o.i;
    if (j != o.j) return j < o.j;
    return label < o.label;
  }
};

}  // namespace splitparse

#include "splitparse/tree_codec.hpp"

#include <string>

#include "splitparse/error.hpp"

namespace splitparse {

namespace {

ParseTree right_fold(const std::vector<ParseTree>& children, size_t from) {
  if (from + 2 == children.size()) {
    return ParseTree::make_internal(kEmptyLabel,
                                    {binarize(children[from]), binarize(children[from + 1])});
  }
  return ParseTree::make_internal(kEmptyLabel,
                                  {binarize(children[from]), right_fold(children, from + 1)});
}

}  // namespace

ParseTree binarize(const ParseTree& tree) {
  if (tree.is_leaf) return tree;
  if (tree.children.empty())
    throw DataError("binarize: internal node '" + tree.label + "' has no children");
  if (tree.children.size() <= 2) {
    std::vector<ParseTree> kids;
    kids.reserve(tree.children.size());
    for (const ParseTree& c : tree.children) kids.push_back(binarize(c));
    return ParseTree::make_internal(tree.label, std::move(kids));
  }
  return ParseTree::make_internal(tree.label,
                                  {binarize(tree.children[0]), right_fold(tree.children, 1)});
}

ParseTree collapse_unary(const ParseTree& tree) {
  if (tree.is_leaf) return tree;
  if (tree.children.empty())
    throw DataError("collapse_unary: internal node '" + tree.label + "' has no children");
  std::string label = tree.label;
  const ParseTree* node = &tree;
  while (node->children.size() == 1 && !node->children[0].is_leaf) {
    node = &node->children[0];
    label += "-" + node->label;
  }
  std::vector<ParseTree> kids;
  kids.reserve(node->children.size());
  for (const ParseTree& c : node->children) kids.push_back(collapse_unary(c));
  return ParseTree::make_internal(std::move(label), std::move(kids));
}

ParseTree expand_unary(const ParseTree& tree) {
  if (tree.is_leaf) return tree;
  std::vector<ParseTree> kids;
  kids.reserve(tree.children.size());
  for (const ParseTree& c : tree.children) kids.push_back(expand_unary(c));
  if (tree.label == kEmptyLabel)  // the dummy never holds a collapsed chain
    return ParseTree::make_internal(tree.label, std::move(kids));
  std::vector<std::string> parts;
  size_t start = 0;
  for (size_t p = tree.label.find('-'); p != std::string::npos;
       p = tree.label.find('-', start)) {
    parts.push_back(tree.label.substr(start, p - start));
    start = p + 1;
  }
  parts.push_back(tree.label.substr(start));
  ParseTree out = ParseTree::make_internal(parts.back(), std::move(kids));
  for (size_t p = parts.size() - 1; p-- > 0;)
    out = ParseTree::make_internal(parts[p], {std::move(out)});
  return out;
}

namespace {

ParseTree debinarize_rec(const ParseTree& tree);

}  // namespace

ParseTree debinarize(const ParseTree& tree) {
  if (!tree.is_leaf && tree.label == kEmptyLabel)
    throw DataError("debinarize: dummy label " + kEmptyLabel + " at the root");
  return debinarize_rec(tree);
}

namespace {

ParseTree debinarize_rec(const ParseTree& tree) {
  if (tree.is_leaf) return tree;
  std::vector<ParseTree> kids;
  for (const ParseTree& c : tree.children) kids.push_back(debinarize_rec(c));
  // Splice dummy children (possibly nested from right-branching) in place.
  for (size_t idx = 0; idx < kids.size();) {
    if (!kids[idx].is_leaf && kids[idx].label == kEmptyLabel) {
      std::vector<ParseTree> sub = std::move(kids[idx].children);
      kids.erase(kids.begin() + static_cast<std::ptrdiff_t>(idx));
      kids.insert(kids.begin() + static_cast<std::ptrdiff_t>(idx),
                  std::make_move_iterator(sub.begin()), std::make_move_iterator(sub.end()));
    } else {
      ++idx;
    }
  }
  return ParseTree::make_internal(tree.label, std::move(kids));
}

namespace {

// Walks a binarized (possibly unary-collapsed) tree tracking boundary
// offsets. Width-1 wrapper chains above leaves contribute neither spans nor
// decisions.
struct Walker {
  std::vector<LabeledSpan>* spans = nullptr;
  std::vector<SplitDecision>* decisions = nullptr;

  // Returns the width (token count) under `node`, with `lo` its left boundary.
  int walk(const ParseTree& node, int lo) {
    if (node.is_leaf) return 1;
    if (node.children.empty())
      throw DataError("tree_codec: internal node '" + node.label + "' has no children");
    if (node.children.size() == 1) {
      const int w = walk_skip_wrapper(node, lo);
      return w;
    }
    if (node.children.size() != 2)
      throw DataError("tree_codec: non-binary node '" + node.label + "' with " +
                      std::to_string(node.children.size()) + " children");
    const int wl = width(node.children[0]);
    const int wr = width(node.children[1]);
    if (spans) spans->push_back({lo, lo + wl + wr, node.label});
    if (decisions) decisions->push_back({lo, lo + wl + wr, lo + wl});
    walk(node.children[0], lo);
    walk(node.children[1], lo + wl);
    return wl + wr;
  }

  int walk_skip_wrapper(const ParseTree& node, int lo) {
    // A unary internal node is only legal as a singleton wrapper chain
    // terminating in a leaf.
    const ParseTree* cur = &node;
    while (!cur->is_leaf) {
      if (cur->children.size() != 1)
        throw DataError("tree_codec: unary node '" + node.label +
                        "' does not terminate in a leaf (collapse_unary first)");
      cur = &cur->children[0];
    }
    (void)lo;
    return 1;
  }

  static int width(const ParseTree& node) {
    if (node.is_leaf) return 1;
    int w = 0;
    for (const ParseTree& c : node.children) w += width(c);
    return w;
  }
};

}  // namespace

std::vector<LabeledSpan> to_spans(const ParseTree& tree) {
  std::vector<LabeledSpan> spans;
  Walker w;
  w.spans = &spans;
  w.walk(tree, 0);
  return spans;
}

SplitSequence to_splits(const ParseTree& tree) {
  SplitSequence seq;
  seq.mode = Mode::syntax;
  Walker w;
  w.decisions = &seq.decisions;
  w.walk(tree, 0);
  return seq;
}

namespace {

struct SplitReader {
  const std::vector<SplitDecision>& decisions;
  size_t pos = 0;

  const SplitDecision& take(int i, int j) {
    if (pos >= decisions.size())
      throw DataError("from_splits: sequence ended but span (" + std::to_string(i) + "," +
                      std::to_string(j) + ") still needs a decision");
    const SplitDecision& d = decisions[pos];
    if (d.i != i || d.j != j)
      throw DataError("from_splits: decision " + std::to_string(pos) + " is " +
                      format_decision(d) + " but depth-first order expects span (" +
                      std::to_string(i) + "," + std::to_string(j) + ")");
    ++pos;
    return d;
  }
};

ParseTree build_syntax(SplitReader& r, int i, int j) {
  if (j - i == 1) return ParseTree::make_leaf(i + 1, "", "");
  const size_t at = r.pos;
  const SplitDecision d = r.take(i, j);
  if (d.k <= i || d.k >= j)
    throw DataError("from_splits: decision " + std::to_string(at) + " " + format_decision(d) +
                    " has split point outside (" + std::to_string(i) + "," + std::to_string(j) +
                    ")");
  ParseTree left = build_syntax(r, i, d.k);
  ParseTree right = build_syntax(r, d.k, j);
  return ParseTree::make_internal("", {std::move(left), std::move(right)});
}

DiscourseTree build_discourse(SplitReader& r, int i, int j) {
  if (j - i == 1) return DiscourseTree::make_edu(i, j);
  const size_t at = r.pos;
  const SplitDecision d = r.take(i, j);
  if (d.k <= i || d.k > j)
    throw DataError("from_splits_dt: decision " + std::to_string(at) + " " +
                    format_decision(d) + " has split point outside (" + std::to_string(i) + "," +
                    std::to_string(j) + "]");
  if (d.k == j) return DiscourseTree::make_edu(i, j);
  DiscourseTree left = build_discourse(r, i, d.k);
  DiscourseTree right = build_discourse(r, d.k, j);
  return DiscourseTree::make_rel("", std::move(left), std::move(right));
}

}  // namespace

ParseTree from_splits(const SplitSequence& seq, int n) {
  if (n < 1) throw DataError("from_splits: token count must be >= 1");
  if (static_cast<int>(seq.decisions.size()) != n - 1)
    throw DataError("from_splits: expected " + std::to_string(n - 1) + " decisions for " +
                    std::to_string(n) + " tokens, got " +
                    std::to_string(seq.decisions.size()));
  SplitReader r{seq.decisions};
  ParseTree t = build_syntax(r, 0, n);
  return t;
}

DiscourseTree from_splits_dt(const SplitSequence& seq, int n) {
  if (n < 1) throw DataError("from_splits_dt: token count must be >= 1");
  SplitReader r{seq.decisions};
  DiscourseTree t = build_discourse(r, 0, n);
  if (r.pos != seq.decisions.size())
    throw DataError("from_splits_dt: decision " + std::to_string(r.pos) +
                    " is unreachable (tree already complete)");
  return t;
}

SplitSequence to_splits_dt(const DiscourseTree& tree) {
  SplitSequence seq;
  seq.mode = Mode::discourse;
  struct {
    void operator()(const DiscourseTree& node, std::vector<SplitDecision>& out) const {
      if (node.is_edu) {
        if (node.j - node.i >= 2) out.push_back({node.i, node.j, node.j});
        return;
      }
      out.push_back({node.i, node.j, node.children[0].j});
      (*this)(node.children[0], out);
      (*this)(node.children[1], out);
    }
  } walk;
  walk(tree, seq.decisions);
  return seq;
}

}  // namespace splitparse

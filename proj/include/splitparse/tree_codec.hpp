#pragma once

#include <vector>

#include "splitparse/tree.hpp"

namespace splitparse {

// Right-branching binarization: children c1..cm of an over-binary node become
// (c1, (c2, (..., cm))) with every introduced node labeled kEmptyLabel.
// Unary nodes are left untouched (collapse_unary handles them).
ParseTree binarize(const ParseTree& tree);

// Merges every maximal chain of internal nodes with a single internal child
// into one node labeled "L1-L2-...-Lm", outermost label first. Internal nodes
// whose single child is a leaf are kept (singleton wrappers); the chain above
// them still collapses into the wrapper's label.
ParseTree collapse_unary(const ParseTree& tree);

// Inverses. debinarize splices children of kEmptyLabel nodes into the parent
// child list; a kEmptyLabel root is an error. expand_unary splits hyphen-
// joined labels back into nested nodes.
ParseTree debinarize(const ParseTree& tree);
ParseTree expand_unary(const ParseTree& tree);

// Boundary-based labeled spans of a binarized, unary-collapsed tree: one per
// internal node, excluding width-1 (singleton) spans.
std::vector<LabeledSpan> to_spans(const ParseTree& tree);

// Depth-first split decisions of a binarized tree: the decision for a span
// precedes all decisions inside its left child, which precede the right
// child's. n tokens yield exactly n-1 decisions.
SplitSequence to_splits(const ParseTree& tree);

// Rebuilds the unique binary tree whose to_splits equals seq. Labels and
// tokens are left empty; leaves are numbered 1..n.
ParseTree from_splits(const SplitSequence& seq, int n);

// Discourse variants (Prop 2): internal nodes emit (i,j)->k; multi-token EDUs
// emit the terminal decision (i,j)->j; width-1 EDUs emit nothing.
SplitSequence to_splits_dt(const DiscourseTree& tree);
DiscourseTree from_splits_dt(const SplitSequence& seq, int n);

}  // namespace splitparse

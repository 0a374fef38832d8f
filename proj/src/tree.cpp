#include "splitparse/tree.hpp"

#include <sstream>

#include "splitparse/error.hpp"

namespace splitparse {

const std::string kEmptyLabel = "∅";

std::string mode_name(Mode m) { return m == Mode::syntax ? "syntax" : "discourse"; }

Mode parse_mode(const std::string& s) {
  if (s == "syntax") return Mode::syntax;
  if (s == "discourse") return Mode::discourse;
  throw DataError("unknown mode '" + s + "' (expected syntax or discourse)");
}

ParseTree ParseTree::make_leaf(int token_index, std::string token, std::string preterminal) {
  ParseTree t;
  t.is_leaf = true;
  t.token_index = token_index;
  t.token = std::move(token);
  t.label = std::move(preterminal);
  return t;
}

ParseTree ParseTree::make_internal(std::string label, std::vector<ParseTree> children) {
  ParseTree t;
  t.label = std::move(label);
  t.children = std::move(children);
  return t;
}

int ParseTree::leaf_count() const {
  if (is_leaf) return 1;
  int n = 0;
  for (const ParseTree& c : children) n += c.leaf_count();
  return n;
}

void ParseTree::collect_leaves(std::vector<const ParseTree*>& out) const {
  if (is_leaf) {
    out.push_back(this);
    return;
  }
  for (const ParseTree& c : children) c.collect_leaves(out);
}

std::vector<std::string> ParseTree::tokens() const {
  std::vector<const ParseTree*> ls;
  collect_leaves(ls);
  std::vector<std::string> out;
  out.reserve(ls.size());
  for (const ParseTree* l : ls) out.push_back(l->token);
  return out;
}

std::vector<std::string> ParseTree::preterminals() const {
  std::vector<const ParseTree*> ls;
  collect_leaves(ls);
  std::vector<std::string> out;
  out.reserve(ls.size());
  for (const ParseTree* l : ls) out.push_back(l->label);
  return out;
}

bool ParseTree::operator==(const ParseTree& o) const {
  if (is_leaf != o.is_leaf || label != o.label) return false;
  if (is_leaf) return token == o.token && token_index == o.token_index;
  if (children.size() != o.children.size()) return false;
  for (size_t i = 0; i < children.size(); ++i)
    if (!(children[i] == o.children[i])) return false;
  return true;
}

bool same_shape(const ParseTree& a, const ParseTree& b) {
  if (a.is_leaf != b.is_leaf) return false;
  if (a.is_leaf) return true;
  if (a.children.size() != b.children.size()) return false;
  for (size_t i = 0; i < a.children.size(); ++i)
    if (!same_shape(a.children[i], b.children[i])) return false;
  return true;
}

static void renumber_rec(ParseTree& t, int& next) {
  if (t.is_leaf) {
    t.token_index = next++;
    return;
  }
  for (ParseTree& c : t.children) renumber_rec(c, next);
}

void renumber_leaves(ParseTree& t) {
  int next = 1;
  renumber_rec(t, next);
}

DiscourseTree DiscourseTree::make_edu(int i, int j) {
  if (i < 0 || j <= i) throw DataError("EDU span (" + std::to_string(i) + "," +
                                       std::to_string(j) + ") is empty or negative");
  DiscourseTree t;
  t.is_edu = true;
  t.i = i;
  t.j = j;
  return t;
}

DiscourseTree DiscourseTree::make_rel(std::string label, DiscourseTree left,
                                      DiscourseTree right) {
  if (left.j != right.i)
    throw DataError("discourse children not adjacent: (" + std::to_string(left.i) + "," +
                    std::to_string(left.j) + ") then (" + std::to_string(right.i) + "," +
                    std::to_string(right.j) + ")");
  DiscourseTree t;
  t.i = left.i;
  t.j = right.j;
  t.label = std::move(label);
  t.children.push_back(std::move(left));
  t.children.push_back(std::move(right));
  return t;
}

void DiscourseTree::edu_spans(std::vector<std::pair<int, int>>& out) const {
  if (is_edu) {
    out.emplace_back(i, j);
    return;
  }
  for (const DiscourseTree& c : children) c.edu_spans(out);
}

bool DiscourseTree::operator==(const DiscourseTree& o) const {
  if (is_edu != o.is_edu || i != o.i || j != o.j || label != o.label) return false;
  if (children.size() != o.children.size()) return false;
  for (size_t c = 0; c < children.size(); ++c)
    if (!(children[c] == o.children[c])) return false;
  return true;
}

std::string nuclearity_of(const std::string& rn) {
  const size_t p = rn.rfind('_');
  return p == std::string::npos ? std::string() : rn.substr(p + 1);
}

std::string relation_of(const std::string& rn) {
  const size_t p = rn.rfind('_');
  return p == std::string::npos ? rn : rn.substr(0, p);
}

std::string format_decision(const SplitDecision& d) {
  std::ostringstream os;
  os << "(" << d.i << "," << d.j << ")->" << d.k;
  return os.str();
}

std::string format_sequence(const SplitSequence& s) {
  std::ostringstream os;
  for (size_t t = 0; t < s.decisions.size(); ++t)
    os << (t ? " " : "") << format_decision(s.decisions[t]);
  return os.str();
}

}  // namespace splitparse

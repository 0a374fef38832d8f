#include "splitparse/metrics.hpp"

#include <map>
#include <tuple>

#include "splitparse/error.hpp"
#include "splitparse/tree_codec.hpp"

namespace splitparse {

PRF make_prf(long matched, long gold_count, long pred_count) {
  PRF out;
  out.matched = matched;
  out.gold_count = gold_count;
  out.pred_count = pred_count;
  out.precision = pred_count > 0 ? 100.0 * matched / pred_count : 0.0;
  out.recall = gold_count > 0 ? 100.0 * matched / gold_count : 0.0;
  out.f1 = (out.precision + out.recall) > 0.0
               ? 2.0 * out.precision * out.recall / (out.precision + out.recall)
               : 0.0;
  return out;
}

namespace {

using SpanKey = std::tuple<int, int, std::string>;

void collect_eval_spans(const ParseTree& node, int lo, std::map<SpanKey, long>& out) {
  if (node.is_leaf) return;
  const int width = node.leaf_count();
  if (node.label != kEmptyLabel) ++out[{lo, lo + width, node.label}];
  int off = lo;
  for (const ParseTree& c : node.children) {
    collect_eval_spans(c, off, out);
    off += c.leaf_count();
  }
}

long intersect_counts(const std::map<SpanKey, long>& a, const std::map<SpanKey, long>& b) {
  long matched = 0;
  for (const auto& [key, count] : a) {
    auto it = b.find(key);
    if (it != b.end()) matched += std::min(count, it->second);
  }
  return matched;
}

long total(const std::map<SpanKey, long>& m) {
  long t = 0;
  for (const auto& [key, count] : m) t += count;
  return t;
}

}  // namespace

PRF labeled_prf(const std::vector<ParseTree>& gold, const std::vector<ParseTree>& pred) {
  if (gold.size() != pred.size())
    throw DataError("labeled_prf: " + std::to_string(gold.size()) + " gold vs " +
                    std::to_string(pred.size()) + " predicted trees");
  long matched = 0, gold_count = 0, pred_count = 0;
  for (size_t s = 0; s < gold.size(); ++s) {
    if (gold[s].leaf_count() != pred[s].leaf_count())
      throw DataError("labeled_prf: token count mismatch at sentence " + std::to_string(s) +
                      " (" + std::to_string(gold[s].leaf_count()) + " vs " +
                      std::to_string(pred[s].leaf_count()) + ")");
    const ParseTree g = expand_unary(debinarize(gold[s]));
    const ParseTree p = expand_unary(debinarize(pred[s]));
    std::map<SpanKey, long> gs, ps;
    collect_eval_spans(g, 0, gs);
    collect_eval_spans(p, 0, ps);
    matched += intersect_counts(gs, ps);
    gold_count += total(gs);
    pred_count += total(ps);
  }
  return make_prf(matched, gold_count, pred_count);
}

namespace {

void collect_dt_spans(const DiscourseTree& t,
                      std::map<std::pair<int, int>, std::string>& out) {
  if (t.is_edu) return;
  out[{t.i, t.j}] = t.label;
  for (const DiscourseTree& c : t.children) collect_dt_spans(c, out);
}

}  // namespace

RstScores rst_prf(const std::vector<DiscourseTree>& gold,
                  const std::vector<DiscourseTree>& pred) {
  if (gold.size() != pred.size())
    throw DataError("rst_prf: " + std::to_string(gold.size()) + " gold vs " +
                    std::to_string(pred.size()) + " predicted trees");
  long m_span = 0, m_nuc = 0, m_rel = 0, n_gold = 0, n_pred = 0;
  for (size_t s = 0; s < gold.size(); ++s) {
    if (gold[s].j != pred[s].j || gold[s].i != pred[s].i)
      throw DataError("rst_prf: token count mismatch at text " + std::to_string(s) + " (" +
                      std::to_string(gold[s].j) + " vs " + std::to_string(pred[s].j) + ")");
    std::map<std::pair<int, int>, std::string> gs, ps;
    collect_dt_spans(gold[s], gs);
    collect_dt_spans(pred[s], ps);
    n_gold += static_cast<long>(gs.size());
    n_pred += static_cast<long>(ps.size());
    for (const auto& [span, label] : gs) {
      auto it = ps.find(span);
      if (it == ps.end()) continue;
      ++m_span;
      if (nuclearity_of(label) == nuclearity_of(it->second)) ++m_nuc;
      if (relation_of(label) == relation_of(it->second)) ++m_rel;
    }
  }
  RstScores out;
  out.span = make_prf(m_span, n_gold, n_pred);
  out.nuclearity = make_prf(m_nuc, n_gold, n_pred);
  out.relation = make_prf(m_rel, n_gold, n_pred);
  return out;
}

}  // namespace splitparse

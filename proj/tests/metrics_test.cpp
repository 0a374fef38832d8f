#include "splitparse/metrics.hpp"

#include "doctest.h"
#include "splitparse/corpus.hpp"
#include "splitparse/error.hpp"
#include "splitparse/tree_codec.hpp"
#include "testutil.hpp"

using namespace splitparse;

namespace {

DiscourseTree relabel(const DiscourseTree& t, const std::string& from, const std::string& to) {
  DiscourseTree out = t;
  struct {
    void operator()(DiscourseTree& node, const std::string& from, const std::string& to) const {
      if (node.label == from) node.label = to;
      for (DiscourseTree& c : node.children) (*this)(c, from, to);
    }
  } walk;
  walk(out, from, to);
  return out;
}

}  // namespace

TEST_CASE("identical trees score 100 everywhere") {
  const std::vector<ParseTree> trees = testutil::toy_syntax_corpus(10, 3, 10, 55);
  const PRF prf = labeled_prf(trees, trees);
  CHECK(prf.precision == doctest::Approx(100.0));
  CHECK(prf.recall == doctest::Approx(100.0));
  CHECK(prf.f1 == doctest::Approx(100.0));
  CHECK(prf.matched == prf.gold_count);
}

TEST_CASE("two of three matching spans give 66.67") {
  const std::vector<ParseTree> gold =
      parse_ptb_string("(S (NP (A (T a)) (T b)) (T c))");
  const std::vector<ParseTree> pred =
      parse_ptb_string("(S (NP (B (T a)) (T b)) (T c))");
  const PRF prf = labeled_prf(gold, pred);
  CHECK(prf.matched == 2);
  CHECK(prf.gold_count == 3);
  CHECK(prf.pred_count == 3);
  CHECK(prf.precision == doctest::Approx(200.0 / 3.0).epsilon(1e-12));
  CHECK(prf.recall == doctest::Approx(200.0 / 3.0).epsilon(1e-12));
  CHECK(prf.f1 == doctest::Approx(200.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("binarization dummies do not affect the score") {
  const std::vector<ParseTree> gold = testutil::toy_syntax_corpus(10, 4, 10, 77);
  std::vector<ParseTree> pred;
  for (const ParseTree& t : gold) pred.push_back(binarize(t));
  const PRF prf = labeled_prf(gold, pred);
  CHECK(prf.f1 == doctest::Approx(100.0));
}

TEST_CASE("swapping gold and predicted swaps precision and recall") {
  const std::vector<ParseTree> a = parse_ptb_string("(S (NP (T x) (T y)) (T z))");
  const std::vector<ParseTree> b = parse_ptb_string("(S (Q (NP (T x) (T y))) (T z))");
  const PRF ab = labeled_prf(a, b);
  const PRF ba = labeled_prf(b, a);
  CHECK(ab.precision == doctest::Approx(ba.recall));
  CHECK(ab.recall == doctest::Approx(ba.precision));
  CHECK(ab.f1 == doctest::Approx(ba.f1));
}

TEST_CASE("the score is invariant to corpus order") {
  std::vector<ParseTree> gold = testutil::toy_syntax_corpus(8, 3, 9, 21);
  std::vector<ParseTree> pred = gold;
  pred[0] = parse_ptb_string("(S (NP (T a) (T b)) (NP (T c) (T d)))")[0];
  gold[0] = parse_ptb_string("(S (VP (T a) (T b)) (NP (T c) (T d)))")[0];
  const PRF forward = labeled_prf(gold, pred);
  std::vector<ParseTree> gold_r(gold.rbegin(), gold.rend());
  std::vector<ParseTree> pred_r(pred.rbegin(), pred.rend());
  const PRF backward = labeled_prf(gold_r, pred_r);
  CHECK(forward.f1 == doctest::Approx(backward.f1));
}

TEST_CASE("token count mismatches name the sentence") {
  const std::vector<ParseTree> gold = parse_ptb_string("(S (T a) (T b))");
  const std::vector<ParseTree> pred = parse_ptb_string("(S (T a) (T b) (T c))");
  CHECK_THROWS_WITH_AS(labeled_prf(gold, pred), doctest::Contains("sentence 0"), DataError);
  CHECK_THROWS_AS(labeled_prf(gold, {}), DataError);
}

TEST_CASE("identical discourse trees score 100 on all three metrics") {
  const std::vector<DiscourseDoc> docs = testutil::toy_discourse_corpus(10, 2, 4, 909);
  std::vector<DiscourseTree> trees;
  for (const DiscourseDoc& d : docs) trees.push_back(d.tree);
  const RstScores rs = rst_prf(trees, trees);
  CHECK(rs.span.f1 == doctest::Approx(100.0));
  CHECK(rs.nuclearity.f1 == doctest::Approx(100.0));
  CHECK(rs.relation.f1 == doctest::Approx(100.0));
}

TEST_CASE("one flipped nuclearity on two internal nodes gives span 100, nuclearity 50") {
  DiscourseTree gold = DiscourseTree::make_rel(
      "Same-Unit_NN",
      DiscourseTree::make_rel("Elaboration_NS", DiscourseTree::make_edu(0, 2),
                              DiscourseTree::make_edu(2, 4)),
      DiscourseTree::make_edu(4, 6));
  DiscourseTree pred = relabel(gold, "Elaboration_NS", "Elaboration_SN");
  const RstScores rs = rst_prf({gold}, {pred});
  CHECK(rs.span.f1 == doctest::Approx(100.0));
  CHECK(rs.nuclearity.f1 == doctest::Approx(50.0));
  CHECK(rs.relation.f1 == doctest::Approx(100.0));
}

TEST_CASE("wrong segmentation with the same topology lowers the span score") {
  DiscourseTree gold = DiscourseTree::make_rel("Joint_NN", DiscourseTree::make_edu(0, 3),
                                               DiscourseTree::make_edu(3, 6));
  DiscourseTree pred = DiscourseTree::make_rel("Joint_NN", DiscourseTree::make_edu(0, 4),
                                               DiscourseTree::make_edu(4, 6));
  const RstScores rs = rst_prf({gold}, {pred});
  CHECK(rs.span.f1 < 100.0);
}

TEST_CASE("relation and nuclearity scores never exceed the span score") {
  Rng rng(404);
  const std::vector<std::string> labels = {"Elaboration_NS", "Contrast_NN", "Attribution_SN",
                                           "Joint_NN", "Background_NS"};
  for (int iter = 0; iter < 300; ++iter) {
    const int n = rng.uniform_int(2, 10);
    const DiscourseTree gold = testutil::random_discourse_tree(rng, 0, n, labels);
    const DiscourseTree pred = testutil::random_discourse_tree(rng, 0, n, labels);
    const RstScores rs = rst_prf({gold}, {pred});
    CHECK(rs.relation.f1 <= rs.span.f1 + 1e-9);
    CHECK(rs.nuclearity.f1 <= rs.span.f1 + 1e-9);
  }
}

TEST_CASE("rst_prf rejects token count mismatches") {
  DiscourseTree a = DiscourseTree::make_edu(0, 3);
  DiscourseTree b = DiscourseTree::make_edu(0, 4);
  CHECK_THROWS_WITH_AS(rst_prf({a}, {b}), doctest::Contains("text 0"), DataError);
}

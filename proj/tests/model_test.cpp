#include "splitparse/model.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "splitparse/checkpoint.hpp"
#include "splitparse/error.hpp"
#include "splitparse/training.hpp"
#include "testutil.hpp"

using namespace splitparse;

namespace {

void zero_param(Model& m, const std::string& name) {
  Param* p = m.params().find(name);
  REQUIRE(p != nullptr);
  for (double& x : p->value.v) x = 0.0;
}

}  // namespace

TEST_CASE("default dimensions follow the published setup") {
  ModelConfig cfg;
  CHECK(cfg.word_emb_dim == 100);
  CHECK(cfg.char_emb_dim == 50);
  CHECK(cfg.encoder_hidden == 400);
  CHECK(cfg.encoder_layers == 3);
  CHECK(cfg.decoder_layers == 3);
  CHECK(cfg.mlp_dim == 500);
  CHECK(cfg.beam_width == 20);
  CHECK(cfg.token_feature_dim() == 150);  // 100 word + 2*25 char
  CHECK(cfg.boundary_dim() == 800);
}

TEST_CASE("token features concatenate char and word pathways") {
  Model m = testutil::tiny_syntax_model();
  const Sentence s = testutil::toy_sentence(m, {"the", "cat", "the"});
  ad::Tape t;
  Model::EncoderOutput enc = m.encode(t, s);
  CHECK(enc.n == 3);
  CHECK(enc.h.size() == 4);
  CHECK(t.val(enc.h[0]).dim(0) == m.config().boundary_dim());
  CHECK(t.val(enc.hp).dim(0) == 4);
  CHECK(t.val(enc.hp).dim(1) == m.config().mlp_dim);
}

TEST_CASE("identical tokens embed identically") {
  Model m = testutil::tiny_syntax_model();
  const Sentence s = testutil::toy_sentence(m, {"dog", "sees", "dog"});
  // compare the concrete embeddings of positions 1 and 3 (same token)
  Model::Encoding enc = m.encode_concrete(s);
  CHECK(enc.n == 3);
  // determinism of the whole encoding
  Model::Encoding enc2 = m.encode_concrete(s);
  CHECK(enc.h.v == enc2.h.v);
}

TEST_CASE("one-token sentences still have both boundaries") {
  Model m = testutil::tiny_syntax_model();
  const Sentence s = testutil::toy_sentence(m, {"cat"});
  Model::Encoding enc = m.encode_concrete(s);
  CHECK(enc.h.dim(0) == 2);
  CHECK(enc.h.dim(1) == m.config().boundary_dim());
}

TEST_CASE("permuting distinct tokens changes some boundary vector") {
  Model m = testutil::tiny_syntax_model();
  Model::Encoding a = m.encode_concrete(testutil::toy_sentence(m, {"the", "cat", "sees"}));
  Model::Encoding b = m.encode_concrete(testutil::toy_sentence(m, {"cat", "the", "sees"}));
  CHECK(a.h.v != b.h.v);
}

TEST_CASE("span_rep with identity weights is the sum of the endpoints") {
  Model m = testutil::tiny_syntax_model();
  const int d = m.config().boundary_dim();
  Param* w1 = m.params().find("span.W1");
  Param* w2 = m.params().find("span.W2");
  for (double& x : w1->value.v) x = 0.0;
  for (double& x : w2->value.v) x = 0.0;
  for (int i = 0; i < d; ++i) {
    w1->value.at(i, i) = 1.0;
    w2->value.at(i, i) = 1.0;
  }
  const Sentence s = testutil::toy_sentence(m, {"the", "cat", "sees", "bob"});
  ad::Tape t;
  Model::EncoderOutput enc = m.encode(t, s);
  const Tensor& rep = t.val(m.span_rep(t, enc, 0, 4));
  const Tensor& h0 = t.val(enc.h[0]);
  const Tensor& h4 = t.val(enc.h[4]);
  for (int i = 0; i < d; ++i)
    CHECK(rep.at(i) == doctest::Approx(h0.at(i) + h4.at(i)).epsilon(1e-12));
}

TEST_CASE("span_rep is linear in the span weights") {
  Model m = testutil::tiny_syntax_model();
  const Sentence s = testutil::toy_sentence(m, {"the", "cat", "sees"});
  ad::Tape t;
  Model::EncoderOutput enc = m.encode(t, s);
  const Tensor before = t.val(m.span_rep(t, enc, 0, 3));
  for (double& x : m.params().find("span.W1")->value.v) x *= 2.0;
  for (double& x : m.params().find("span.W2")->value.v) x *= 2.0;
  ad::Tape t2;
  Model::EncoderOutput enc2 = m.encode(t2, s);
  const Tensor after = t2.val(m.span_rep(t2, enc2, 0, 3));
  for (int i = 0; i < before.dim(0); ++i)
    CHECK(after.at(i) == doctest::Approx(2.0 * before.at(i)).epsilon(1e-9));
}

TEST_CASE("pointing supports exactly the valid syntax splits") {
  Model m = testutil::tiny_syntax_model();
  const Sentence s = testutil::toy_sentence(m, testutil::placeholder_tokens(5));
  Model::Encoding enc = m.encode_concrete(s);
  Model::PointDist dist = m.point_concrete(m.initial_state_concrete(), 1, 4, enc);
  const std::vector<double> probs = dist.full_probs(5);
  CHECK(probs.size() == 6);
  CHECK(probs[0] == 0.0);
  CHECK(probs[1] == 0.0);
  CHECK(probs[4] == 0.0);
  CHECK(probs[5] == 0.0);
  CHECK(probs[2] + probs[3] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("discourse pointing includes the terminal point k = j") {
  Model m = testutil::tiny_discourse_model();
  const Sentence s = testutil::toy_sentence(m, testutil::placeholder_tokens(11));
  Model::Encoding enc = m.encode_concrete(s);
  Model::PointDist dist = m.point_concrete(m.initial_state_concrete(), 8, 11, enc);
  const std::vector<double> probs = dist.full_probs(11);
  double support = 0.0;
  for (int k = 0; k <= 11; ++k) {
    if (k >= 9 && k <= 11)
      support += probs[static_cast<size_t>(k)];
    else
      CHECK(probs[static_cast<size_t>(k)] == 0.0);
  }
  CHECK(support == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("zero biaffine weights give a uniform pointing distribution") {
  Model m = testutil::tiny_syntax_model();
  zero_param(m, "point.W_dh");
  zero_param(m, "point.w_h");
  const Sentence s = testutil::toy_sentence(m, testutil::placeholder_tokens(6));
  Model::Encoding enc = m.encode_concrete(s);
  Model::PointDist dist = m.point_concrete(m.initial_state_concrete(), 0, 6, enc);
  for (double lp : dist.logp) CHECK(lp == doctest::Approx(std::log(1.0 / 5.0)).epsilon(1e-12));
}

TEST_CASE("point refuses spans without a valid split") {
  Model m = testutil::tiny_syntax_model();
  const Sentence s = testutil::toy_sentence(m, testutil::placeholder_tokens(4));
  Model::Encoding enc = m.encode_concrete(s);
  CHECK_THROWS_AS(m.point_concrete(m.initial_state_concrete(), 2, 3, enc), InvalidArgument);
}

TEST_CASE("zero labeler weights give a uniform label distribution") {
  Model m = testutil::tiny_syntax_model();
  for (const char* name : {"label_syn.W_lr", "label_syn.W_l", "label_syn.W_r", "label_syn.b"})
    zero_param(m, name);
  const Sentence s = testutil::toy_sentence(m, testutil::placeholder_tokens(4));
  Model::Encoding enc = m.encode_concrete(s);
  const std::vector<double> logits = m.syntax_label_logits(enc, 1, 3);
  for (double x : logits) CHECK(x == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("label scorers validate their spans") {
  Model syn = testutil::tiny_syntax_model();
  const Sentence s = testutil::toy_sentence(syn, testutil::placeholder_tokens(4));
  Model::Encoding enc = syn.encode_concrete(s);
  CHECK_THROWS_AS(syn.syntax_label_logits(enc, 3, 3), InvalidArgument);

  Model dis = testutil::tiny_discourse_model();
  const Sentence sd = testutil::toy_sentence(dis, testutil::placeholder_tokens(4));
  Model::Encoding encd = dis.encode_concrete(sd);
  CHECK_THROWS_AS(dis.discourse_label_logits(encd, 1, 4, 4), InvalidArgument);
  CHECK_NOTHROW(dis.discourse_label_logits(encd, 1, 2, 4));
}

TEST_CASE("label argmax is invariant under monotone rescaling") {
  Model m = testutil::tiny_syntax_model();
  const Sentence s = testutil::toy_sentence(m, testutil::placeholder_tokens(5));
  Model::Encoding enc = m.encode_concrete(s);
  const int before = m.argmax_syntax_label(enc, 0, 5, false);
  Param* bias = m.params().find("label_syn.b");
  for (double& x : bias->value.v) x += 3.25;  // adds a constant to every logit
  Model::Encoding enc2 = m.encode_concrete(s);
  CHECK(m.argmax_syntax_label(enc2, 0, 5, false) == before);
}

TEST_CASE("taped and concrete forwards agree bit for bit") {
  Model m = testutil::tiny_syntax_model(21);
  const Sentence s = testutil::toy_sentence(m, {"the", "cat", "sees", "bob", "."});
  ad::Tape t;
  Model::EncoderOutput enc = m.encode(t, s);
  Model::Encoding cenc = m.encode_concrete(s);
  for (int k = 0; k <= 5; ++k) {
    const Tensor& a = t.val(enc.h[static_cast<size_t>(k)]);
    const Tensor row = k_row(cenc.h, k);
    CHECK(a.v == row.v);
  }
  CHECK(t.val(enc.hp).v == cenc.hp.v);

  Model::DecoderState st = m.initial_state(t);
  Model::PointOutput po = m.point(t, st, 0, 5, enc);
  Model::PointDist pd = m.point_concrete(m.initial_state_concrete(), 0, 5, cenc);
  CHECK(t.val(po.logprobs).v == pd.logp);
  Model::PointOutput po2 = m.point(t, po.state, 1, 5, enc);
  Model::PointDist pd2 = m.point_concrete(pd.state, 1, 5, cenc);
  CHECK(t.val(po2.logprobs).v == pd2.logp);

  ad::Var lp = m.syntax_label_logprobs(t, enc, 1, 4);
  std::vector<double> logits = m.syntax_label_logits(cenc, 1, 4);
  ad::Tape t2;
  const Tensor ref = k_log_softmax(Tensor::from({static_cast<int>(logits.size())}, logits));
  CHECK(t.val(lp).v == ref.v);
}

TEST_CASE("embedding tables receive gradient from a short input") {
  Model m = testutil::tiny_syntax_model();
  Dataset ds = testutil::tiny_syntax_dataset();
  const std::vector<TrainingExample> ex = make_examples(ds, m.vocab());
  m.params().zero_grads();
  ad::Tape t;
  ExampleLoss loss = example_loss_graph(m, t, ex[0]);
  t.backward(loss.total);
  double word_norm = 0.0, char_norm = 0.0;
  for (double g : m.params().find("word_emb")->grad.v) word_norm += g * g;
  for (double g : m.params().find("char_emb")->grad.v) char_norm += g * g;
  CHECK(word_norm > 0.0);
  CHECK(char_norm > 0.0);
}

TEST_CASE("pretrained vectors replace the char pathway") {
  Dataset ds = testutil::tiny_syntax_dataset();
  Vocab vocab = build_vocab(ds, 1);
  ModelConfig cfg = testutil::tiny_config();
  cfg.pretrained_dim = 5;
  Model m(Mode::syntax, cfg, vocab, 3);
  CHECK(m.params().find("char_emb") == nullptr);
  CHECK(m.params().find("char.fwd.Wx") == nullptr);
  CHECK(cfg.token_feature_dim() == cfg.word_emb_dim + 5);

  const std::string path =
      (std::filesystem::temp_directory_path() / "sp_vectors.txt").string();
  {
    std::ofstream out(path);
    out << "cat 1 2 3 4 5\nunknownword 9 9 9 9 9\n";
  }
  m.load_pretrained(path);
  const Sentence s = testutil::toy_sentence(m, {"cat"});
  Model::Encoding enc = m.encode_concrete(s);
  CHECK(enc.h.dim(0) == 2);  // loads and encodes without the char tables
}

TEST_CASE("checkpoints round-trip exactly") {
  Model m = testutil::tiny_syntax_model(99);
  const std::string text = checkpoint_string(m);
  std::unique_ptr<Model> back = load_checkpoint_string(text);
  CHECK(back->mode() == m.mode());
  CHECK(back->config().encoder_hidden == m.config().encoder_hidden);
  CHECK(back->vocab().words() == m.vocab().words());
  for (size_t i = 0; i < m.params().items().size(); ++i) {
    CHECK(m.params().items()[i]->name == back->params().items()[i]->name);
    CHECK(m.params().items()[i]->value.v == back->params().items()[i]->value.v);
  }
  CHECK(checkpoint_string(*back) == text);
  CHECK_THROWS_AS(load_checkpoint_string("garbage"), DataError);
}

TEST_CASE("models with the same seed are identical, different seeds differ") {
  Model a = testutil::tiny_syntax_model(5);
  Model b = testutil::tiny_syntax_model(5);
  Model c = testutil::tiny_syntax_model(6);
  CHECK(checkpoint_string(a) == checkpoint_string(b));
  CHECK(checkpoint_string(a) != checkpoint_string(c));
}

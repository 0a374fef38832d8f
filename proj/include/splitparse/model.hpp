#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "splitparse/autodiff.hpp"
#include "splitparse/corpus.hpp"
#include "splitparse/params.hpp"
#include "splitparse/tree.hpp"

namespace splitparse {

struct ModelConfig {
  int word_emb_dim = 100;
  int char_emb_dim = 50;     // char embedding table width
  int char_rnn_hidden = 25;  // per direction; char feature = 2 * this
  int encoder_hidden = 400;  // per direction; also the decoder hidden size
  int encoder_layers = 3;
  int decoder_layers = 3;
  int mlp_dim = 500;
  double leaky_slope = 0.1;
  int beam_width = 20;
  int pretrained_dim = 0;  // > 0 replaces the char pathway by fixed vectors
  double dropout = 0.0;    // applied to token features during training

  void validate() const;
  int token_feature_dim() const {
    return word_emb_dim + (pretrained_dim > 0 ? pretrained_dim : 2 * char_rnn_hidden);
  }
  int boundary_dim() const { return 2 * encoder_hidden; }
};

// The parameterized map from a sentence to pointing distributions and label
// scores. Two forward implementations share the same kernels: a taped one
// that supports backward(), and a gradient-free one for decoding.
class Model {
 public:
  Model(Mode mode, ModelConfig cfg, Vocab vocab, std::uint64_t seed);

  Mode mode() const { return mode_; }
  const ModelConfig& config() const { return cfg_; }
  const Vocab& vocab() const { return vocab_; }
  ParamStore& params() { return params_; }
  const ParamStore& params() const { return params_; }
  int label_count() const;
  int empty_label_id() const { return empty_label_id_; }

  // Plain-text vectors, one "word v1 .. vd" line each; d = pretrained_dim.
  void load_pretrained(const std::string& path);

  static std::pair<int, int> valid_range(Mode mode, int i, int j);  // (lo, len)

  // ---- taped forward (training) ----
  struct EncoderOutput {
    int n = 0;
    std::vector<ad::Var> h;  // n+1 boundary vectors
    ad::Var hp;              // (n+1, mlp) transformed boundaries
  };
  struct DecoderState {
    std::vector<ad::Var> h, c;
  };
  struct PointOutput {
    DecoderState state;
    ad::Var logprobs;  // over the valid split points only
    int lo = 0;        // boundary index of logprobs[0]
  };

  EncoderOutput encode(ad::Tape& t, const Sentence& s, Rng* dropout_rng = nullptr) const;
  DecoderState initial_state(ad::Tape& t) const;
  ad::Var span_rep(ad::Tape& t, const EncoderOutput& enc, int i, int j) const;
  PointOutput point(ad::Tape& t, const DecoderState& state, int i, int j,
                    const EncoderOutput& enc) const;
  ad::Var syntax_label_logprobs(ad::Tape& t, const EncoderOutput& enc, int i, int j) const;
  ad::Var discourse_label_logprobs(ad::Tape& t, const EncoderOutput& enc, int i, int k,
                                   int j) const;

  // ---- concrete forward (inference) ----
  struct Encoding {
    int n = 0;
    Tensor h;   // (n+1, 2H)
    Tensor hp;  // (n+1, mlp)
  };
  struct State {
    std::vector<Tensor> h, c;
  };
  struct PointDist {
    State state;
    int lo = 0;
    std::vector<double> logp;  // over the valid split points
    // Full distribution over boundaries 0..n: exactly zero off the valid set.
    std::vector<double> full_probs(int n) const;
    double logp_at(int k) const;  // k is an absolute boundary index
  };

  Encoding encode_concrete(const Sentence& s) const;
  State initial_state_concrete() const;
  PointDist point_concrete(const State& state, int i, int j, const Encoding& enc) const;
  std::vector<double> syntax_label_logits(const Encoding& enc, int i, int j) const;
  std::vector<double> discourse_label_logits(const Encoding& enc, int i, int k, int j) const;
  int argmax_syntax_label(const Encoding& enc, int i, int j, bool exclude_empty) const;
  int argmax_discourse_label(const Encoding& enc, int i, int k, int j) const;

 private:
  struct LstmCell {
    Param* wx = nullptr;
    Param* wh = nullptr;
    Param* b = nullptr;
    int hidden = 0;
  };
  struct Mlp {
    Param* w = nullptr;
    Param* b = nullptr;
  };
  struct Labeler {
    Mlp left, right;
    Param* w_lr = nullptr;
    Param* w_l = nullptr;
    Param* w_r = nullptr;
    Param* b = nullptr;
  };

  LstmCell make_cell(const std::string& name, int in_dim, int hidden, Rng& rng);
  Mlp make_mlp(const std::string& name, int in_dim, int out_dim, Rng& rng);
  Labeler make_labeler(const std::string& name, int in_dim, int labels, Rng& rng);

  ad::Var embed_position(ad::Tape& t, const Sentence& s, int pos) const;
  Tensor embed_position_concrete(const Sentence& s, int pos) const;
  std::vector<double> label_logits_concrete(const Labeler& lab, const Tensor& hl,
                                            const Tensor& hr) const;

  Mode mode_;
  ModelConfig cfg_;
  Vocab vocab_;
  ParamStore params_;
  int empty_label_id_ = -1;

  Param* word_emb_ = nullptr;
  Param* char_emb_ = nullptr;
  LstmCell char_fwd_, char_bwd_;
  std::vector<LstmCell> enc_fwd_, enc_bwd_, dec_;
  std::vector<Param*> dec_init_h_, dec_init_c_;
  Param* w1_ = nullptr;
  Param* w2_ = nullptr;
  Mlp mlp_d_, mlp_h_;
  Param* w_dh_ = nullptr;
  Param* w_h_ = nullptr;
  Labeler syn_label_, dis_label_;
  Tensor pretrained_;  // (word_count, pretrained_dim), fixed
};

}  // namespace splitparse

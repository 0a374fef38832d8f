#include "splitparse/model.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "splitparse/error.hpp"

namespace splitparse {

void ModelConfig::validate() const {
  auto positive = [](int v, const char* name) {
    if (v <= 0) throw DataError(std::string("model config: ") + name + " must be positive");
  };
  positive(word_emb_dim, "word_emb_dim");
  positive(char_emb_dim, "char_emb_dim");
  positive(char_rnn_hidden, "char_rnn_hidden");
  positive(encoder_hidden, "encoder_hidden");
  positive(encoder_layers, "encoder_layers");
  positive(decoder_layers, "decoder_layers");
  positive(mlp_dim, "mlp_dim");
  positive(beam_width, "beam_width");
  if (pretrained_dim < 0) throw DataError("model config: pretrained_dim must be >= 0");
  if (dropout < 0.0 || dropout >= 1.0) throw DataError("model config: dropout must be in [0,1)");
}

std::pair<int, int> Model::valid_range(Mode mode, int i, int j) {
  return mode == Mode::syntax ? std::make_pair(i + 1, j - i - 1) : std::make_pair(i + 1, j - i);
}

Model::LstmCell Model::make_cell(const std::string& name, int in_dim, int hidden, Rng& rng) {
  LstmCell cell;
  cell.hidden = hidden;
  cell.wx = &params_.add(name + ".Wx", {4 * hidden, in_dim});
  cell.wh = &params_.add(name + ".Wh", {4 * hidden, hidden});
  cell.b = &params_.add(name + ".b", {4 * hidden});
  init_xavier_uniform(cell.wx->value, in_dim, hidden, rng);
  init_xavier_uniform(cell.wh->value, hidden, hidden, rng);
  // Forget gate bias starts at 1 so early training does not erase state.
  for (int u = hidden; u < 2 * hidden; ++u) cell.b->value.at(u) = 1.0;
  return cell;
}

Model::Mlp Model::make_mlp(const std::string& name, int in_dim, int out_dim, Rng& rng) {
  Mlp m;
  m.w = &params_.add(name + ".W", {out_dim, in_dim});
  m.b = &params_.add(name + ".b", {out_dim});
  init_xavier_uniform(m.w->value, in_dim, out_dim, rng);
  return m;
}

Model::Labeler Model::make_labeler(const std::string& name, int in_dim, int labels, Rng& rng) {
  Labeler lab;
  lab.left = make_mlp(name + ".mlp_l", in_dim, cfg_.mlp_dim, rng);
  lab.right = make_mlp(name + ".mlp_r", in_dim, cfg_.mlp_dim, rng);
  lab.w_lr = &params_.add(name + ".W_lr", {cfg_.mlp_dim, labels, cfg_.mlp_dim});
  lab.w_l = &params_.add(name + ".W_l", {cfg_.mlp_dim, labels});
  lab.w_r = &params_.add(name + ".W_r", {cfg_.mlp_dim, labels});
  lab.b = &params_.add(name + ".b", {labels});
  init_xavier_uniform(lab.w_lr->value, cfg_.mlp_dim, cfg_.mlp_dim, rng);
  init_xavier_uniform(lab.w_l->value, cfg_.mlp_dim, labels, rng);
  init_xavier_uniform(lab.w_r->value, cfg_.mlp_dim, labels, rng);
  return lab;
}

Model::Model(Mode mode, ModelConfig cfg, Vocab vocab, std::uint64_t seed)
    : mode_(mode), cfg_(cfg), vocab_(std::move(vocab)) {
  cfg_.validate();
  const int labels = mode_ == Mode::syntax ? vocab_.syn_label_count() : vocab_.dis_label_count();
  if (labels <= 0) throw DataError("model: vocabulary has no labels for mode " + mode_name(mode_));

  Rng rng(seed);
  word_emb_ = &params_.add("word_emb", {vocab_.word_count(), cfg_.word_emb_dim});
  init_uniform(word_emb_->value, 0.1, rng);
  if (cfg_.pretrained_dim == 0) {
    char_emb_ = &params_.add("char_emb", {vocab_.char_count(), cfg_.char_emb_dim});
    init_uniform(char_emb_->value, 0.1, rng);
    char_fwd_ = make_cell("char.fwd", cfg_.char_emb_dim, cfg_.char_rnn_hidden, rng);
    char_bwd_ = make_cell("char.bwd", cfg_.char_emb_dim, cfg_.char_rnn_hidden, rng);
  } else {
    pretrained_ = Tensor::zeros({vocab_.word_count(), cfg_.pretrained_dim});
  }

  int in_dim = cfg_.token_feature_dim();
  for (int l = 0; l < cfg_.encoder_layers; ++l) {
    const std::string base = "enc.l" + std::to_string(l);
    enc_fwd_.push_back(make_cell(base + ".fwd", in_dim, cfg_.encoder_hidden, rng));
    enc_bwd_.push_back(make_cell(base + ".bwd", in_dim, cfg_.encoder_hidden, rng));
    in_dim = 2 * cfg_.encoder_hidden;
  }

  in_dim = cfg_.boundary_dim();
  for (int l = 0; l < cfg_.decoder_layers; ++l) {
    dec_.push_back(make_cell("dec.l" + std::to_string(l), in_dim, cfg_.encoder_hidden, rng));
    in_dim = cfg_.encoder_hidden;
  }
  for (int l = 0; l < cfg_.decoder_layers; ++l) {
    dec_init_h_.push_back(&params_.add("dec.init.h" + std::to_string(l), {cfg_.encoder_hidden}));
    dec_init_c_.push_back(&params_.add("dec.init.c" + std::to_string(l), {cfg_.encoder_hidden}));
  }

  w1_ = &params_.add("span.W1", {cfg_.boundary_dim(), cfg_.boundary_dim()});
  w2_ = &params_.add("span.W2", {cfg_.boundary_dim(), cfg_.boundary_dim()});
  init_xavier_uniform(w1_->value, cfg_.boundary_dim(), cfg_.boundary_dim(), rng);
  init_xavier_uniform(w2_->value, cfg_.boundary_dim(), cfg_.boundary_dim(), rng);

  mlp_d_ = make_mlp("point.mlp_d", cfg_.encoder_hidden, cfg_.mlp_dim, rng);
  mlp_h_ = make_mlp("point.mlp_h", cfg_.boundary_dim(), cfg_.mlp_dim, rng);
  w_dh_ = &params_.add("point.W_dh", {cfg_.mlp_dim, cfg_.mlp_dim});
  w_h_ = &params_.add("point.w_h", {cfg_.mlp_dim});
  init_xavier_uniform(w_dh_->value, cfg_.mlp_dim, cfg_.mlp_dim, rng);
  init_uniform(w_h_->value, std::sqrt(3.0 / cfg_.mlp_dim), rng);

  if (mode_ == Mode::syntax) {
    syn_label_ = make_labeler("label_syn", cfg_.boundary_dim(), labels, rng);
    empty_label_id_ = vocab_.syn_label_id(kEmptyLabel);
  } else {
    dis_label_ = make_labeler("label_dis", 2 * cfg_.boundary_dim(), labels, rng);
  }
}

int Model::label_count() const {
  return mode_ == Mode::syntax ? vocab_.syn_label_count() : vocab_.dis_label_count();
}

void Model::load_pretrained(const std::string& path) {
  if (cfg_.pretrained_dim == 0)
    throw DataError("pretrained vectors supplied but pretrained_dim is 0");
  std::ifstream in(path);
  if (!in) throw DataError("cannot open embeddings file: " + path);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string word;
    ss >> word;
    std::vector<double> vals;
    double x;
    while (ss >> x) vals.push_back(x);
    if (static_cast<int>(vals.size()) != cfg_.pretrained_dim)
      throw DataError("embeddings line " + std::to_string(line_no) + " has " +
                      std::to_string(vals.size()) + " values, expected " +
                      std::to_string(cfg_.pretrained_dim));
    const int id = vocab_.word_id(word);
    if (id == Vocab::kUnk) continue;  // not in the training vocabulary
    for (int d = 0; d < cfg_.pretrained_dim; ++d) pretrained_.at(id, d) = vals[static_cast<size_t>(d)];
  }
}

// ---- shared LSTM step -------------------------------------------------------

namespace {

struct TapeLstm {
  ad::Tape& t;
  ad::Var wx, wh, b;
  int hidden;

  void step(ad::Var x, ad::Var& h, ad::Var& c) const {
    ad::Var gates = ad::add(t, ad::add(t, ad::matvec(t, wx, x), ad::matvec(t, wh, h)), b);
    ad::Var gi = ad::sigmoid(t, ad::slice(t, gates, 0, hidden));
    ad::Var gf = ad::sigmoid(t, ad::slice(t, gates, hidden, hidden));
    ad::Var gg = ad::tanh(t, ad::slice(t, gates, 2 * hidden, hidden));
    ad::Var go = ad::sigmoid(t, ad::slice(t, gates, 3 * hidden, hidden));
    c = ad::add(t, ad::mul(t, gi, gg), ad::mul(t, gf, c));
    h = ad::mul(t, go, ad::tanh(t, c));
  }
};

struct ConcreteLstm {
  const Tensor &wx, &wh, &b;
  int hidden;

  void step(const Tensor& x, Tensor& h, Tensor& c) const {
    Tensor gates = k_add(k_add(k_matvec(wx, x), k_matvec(wh, h)), b);
    Tensor gi = k_sigmoid(k_slice(gates, 0, hidden));
    Tensor gf = k_sigmoid(k_slice(gates, hidden, hidden));
    Tensor gg = k_tanh(k_slice(gates, 2 * hidden, hidden));
    Tensor go = k_sigmoid(k_slice(gates, 3 * hidden, hidden));
    c = k_add(k_mul(gi, gg), k_mul(gf, c));
    h = k_mul(go, k_tanh(c));
  }
};

}  // namespace

// ---- taped forward ----------------------------------------------------------

ad::Var Model::embed_position(ad::Tape& t, const Sentence& s, int pos) const {
  const int id = s.token_ids[static_cast<size_t>(pos)];
  ad::Var word = ad::lookup_row(t, t.param(word_emb_->value, word_emb_->grad), id);
  if (cfg_.pretrained_dim > 0) {
    ad::Var pre = t.constant(k_row(pretrained_, id));
    return ad::concat(t, {pre, word});
  }
  ad::Var table = t.param(char_emb_->value, char_emb_->grad);
  const std::vector<int>& chars = s.char_ids[static_cast<size_t>(pos)];
  TapeLstm fwd{t, t.param(char_fwd_.wx->value, char_fwd_.wx->grad),
               t.param(char_fwd_.wh->value, char_fwd_.wh->grad),
               t.param(char_fwd_.b->value, char_fwd_.b->grad), char_fwd_.hidden};
  TapeLstm bwd{t, t.param(char_bwd_.wx->value, char_bwd_.wx->grad),
               t.param(char_bwd_.wh->value, char_bwd_.wh->grad),
               t.param(char_bwd_.b->value, char_bwd_.b->grad), char_bwd_.hidden};
  ad::Var fh = t.constant(Tensor::zeros({char_fwd_.hidden}));
  ad::Var fc = fh;
  for (int c : chars) fwd.step(ad::lookup_row(t, table, c), fh, fc);
  ad::Var bh = t.constant(Tensor::zeros({char_bwd_.hidden}));
  ad::Var bc = bh;
  for (size_t p = chars.size(); p-- > 0;) bwd.step(ad::lookup_row(t, table, chars[p]), bh, bc);
  return ad::concat(t, {fh, bh, word});
}

Model::EncoderOutput Model::encode(ad::Tape& t, const Sentence& s, Rng* dropout_rng) const {
  const int n = s.n();
  const int positions = n + 2;
  std::vector<ad::Var> inputs(static_cast<size_t>(positions));
  for (int p = 0; p < positions; ++p) inputs[static_cast<size_t>(p)] = embed_position(t, s, p);
  if (cfg_.dropout > 0.0 && dropout_rng) {
    const int width = cfg_.token_feature_dim();
    for (int p = 0; p < positions; ++p) {
      Tensor mask({width});
      for (double& m : mask.v)
        m = dropout_rng->uniform() < cfg_.dropout ? 0.0 : 1.0 / (1.0 - cfg_.dropout);
      inputs[static_cast<size_t>(p)] =
          ad::mul(t, inputs[static_cast<size_t>(p)], t.constant(std::move(mask)));
    }
  }

  std::vector<ad::Var> fh_top, bh_top;
  for (int l = 0; l < cfg_.encoder_layers; ++l) {
    const LstmCell& cf = enc_fwd_[static_cast<size_t>(l)];
    const LstmCell& cb = enc_bwd_[static_cast<size_t>(l)];
    TapeLstm fwd{t, t.param(cf.wx->value, cf.wx->grad), t.param(cf.wh->value, cf.wh->grad),
                 t.param(cf.b->value, cf.b->grad), cf.hidden};
    TapeLstm bwd{t, t.param(cb.wx->value, cb.wx->grad), t.param(cb.wh->value, cb.wh->grad),
                 t.param(cb.b->value, cb.b->grad), cb.hidden};
    std::vector<ad::Var> fs(static_cast<size_t>(positions)), bs(static_cast<size_t>(positions));
    ad::Var h = t.constant(Tensor::zeros({cf.hidden}));
    ad::Var c = h;
    for (int p = 0; p < positions; ++p) {
      fwd.step(inputs[static_cast<size_t>(p)], h, c);
      fs[static_cast<size_t>(p)] = h;
    }
    h = t.constant(Tensor::zeros({cb.hidden}));
    c = h;
    for (int p = positions - 1; p >= 0; --p) {
      bwd.step(inputs[static_cast<size_t>(p)], h, c);
      bs[static_cast<size_t>(p)] = h;
    }
    for (int p = 0; p < positions; ++p)
      inputs[static_cast<size_t>(p)] =
          ad::concat(t, {fs[static_cast<size_t>(p)], bs[static_cast<size_t>(p)]});
    if (l + 1 == cfg_.encoder_layers) {
      fh_top = std::move(fs);
      bh_top = std::move(bs);
    }
  }

  EncoderOutput out;
  out.n = n;
  out.h.reserve(static_cast<size_t>(n + 1));
  for (int k = 0; k <= n; ++k)
    out.h.push_back(ad::concat(
        t, {fh_top[static_cast<size_t>(k)], bh_top[static_cast<size_t>(k + 1)]}));
  ad::Var hmat = ad::stack_rows(t, out.h);
  ad::Var pre = ad::add_rowwise(t, ad::matmul_nt(t, hmat, t.param(mlp_h_.w->value, mlp_h_.w->grad)),
                                t.param(mlp_h_.b->value, mlp_h_.b->grad));
  out.hp = ad::leaky_relu(t, pre, cfg_.leaky_slope);
  return out;
}

Model::DecoderState Model::initial_state(ad::Tape& t) const {
  DecoderState st;
  for (int l = 0; l < cfg_.decoder_layers; ++l) {
    st.h.push_back(t.param(dec_init_h_[static_cast<size_t>(l)]->value,
                           dec_init_h_[static_cast<size_t>(l)]->grad));
    st.c.push_back(t.param(dec_init_c_[static_cast<size_t>(l)]->value,
                           dec_init_c_[static_cast<size_t>(l)]->grad));
  }
  return st;
}

ad::Var Model::span_rep(ad::Tape& t, const EncoderOutput& enc, int i, int j) const {
  if (i < 0 || j > enc.n || i >= j)
    throw InvalidArgument("span_rep: bad span (" + std::to_string(i) + "," + std::to_string(j) +
                          ") for n=" + std::to_string(enc.n));
  return ad::add(t,
                 ad::matvec(t, t.param(w1_->value, w1_->grad), enc.h[static_cast<size_t>(i)]),
                 ad::matvec(t, t.param(w2_->value, w2_->grad), enc.h[static_cast<size_t>(j)]));
}

Model::PointOutput Model::point(ad::Tape& t, const DecoderState& state, int i, int j,
                                const EncoderOutput& enc) const {
  const auto [lo, len] = valid_range(mode_, i, j);
  if (len < 1)
    throw InvalidArgument("point: span (" + std::to_string(i) + "," + std::to_string(j) +
                          ") has no valid split point in mode " + mode_name(mode_));
  PointOutput out;
  out.state = state;
  ad::Var x = span_rep(t, enc, i, j);
  for (int l = 0; l < cfg_.decoder_layers; ++l) {
    const LstmCell& cell = dec_[static_cast<size_t>(l)];
    TapeLstm lstm{t, t.param(cell.wx->value, cell.wx->grad),
                  t.param(cell.wh->value, cell.wh->grad), t.param(cell.b->value, cell.b->grad),
                  cell.hidden};
    lstm.step(x, out.state.h[static_cast<size_t>(l)], out.state.c[static_cast<size_t>(l)]);
    x = out.state.h[static_cast<size_t>(l)];
  }
  ad::Var dp = ad::leaky_relu(
      t,
      ad::add(t, ad::matvec(t, t.param(mlp_d_.w->value, mlp_d_.w->grad), x),
              t.param(mlp_d_.b->value, mlp_d_.b->grad)),
      cfg_.leaky_slope);
  ad::Var u = ad::add(t, ad::tmatvec(t, t.param(w_dh_->value, w_dh_->grad), dp),
                      t.param(w_h_->value, w_h_->grad));
  ad::Var scores = ad::matvec(t, enc.hp, u);
  out.logprobs = ad::log_softmax(t, ad::slice(t, scores, lo, len));
  out.lo = lo;
  return out;
}

namespace {

void check_label_span(int i, int j, int n, const char* what) {
  if (i < 0 || j > n || i >= j)
    throw InvalidArgument(std::string(what) + ": bad span (" + std::to_string(i) + "," +
                          std::to_string(j) + ") for n=" + std::to_string(n));
}

}  // namespace

ad::Var Model::syntax_label_logprobs(ad::Tape& t, const EncoderOutput& enc, int i, int j) const {
  check_label_span(i, j, enc.n, "syntax_label");
  const Labeler& lab = syn_label_;
  ad::Var a = ad::leaky_relu(
      t,
      ad::add(t, ad::matvec(t, t.param(lab.left.w->value, lab.left.w->grad),
                            enc.h[static_cast<size_t>(i)]),
              t.param(lab.left.b->value, lab.left.b->grad)),
      cfg_.leaky_slope);
  ad::Var b = ad::leaky_relu(
      t,
      ad::add(t, ad::matvec(t, t.param(lab.right.w->value, lab.right.w->grad),
                            enc.h[static_cast<size_t>(j)]),
              t.param(lab.right.b->value, lab.right.b->grad)),
      cfg_.leaky_slope);
  ad::Var logits = ad::add(
      t,
      ad::add(t, ad::bilinear(t, a, t.param(lab.w_lr->value, lab.w_lr->grad), b),
              ad::tmatvec(t, t.param(lab.w_l->value, lab.w_l->grad), a)),
      ad::add(t, ad::tmatvec(t, t.param(lab.w_r->value, lab.w_r->grad), b),
              t.param(lab.b->value, lab.b->grad)));
  return ad::log_softmax(t, logits);
}

ad::Var Model::discourse_label_logprobs(ad::Tape& t, const EncoderOutput& enc, int i, int k,
                                        int j) const {
  if (!(i < k && k < j))
    throw InvalidArgument("discourse_label: need i < k < j, got (" + std::to_string(i) + "," +
                          std::to_string(k) + "," + std::to_string(j) + ")");
  check_label_span(i, j, enc.n, "discourse_label");
  const Labeler& lab = dis_label_;
  ad::Var hl = ad::concat(t, {enc.h[static_cast<size_t>(i)], enc.h[static_cast<size_t>(k)]});
  ad::Var hr = ad::concat(t, {enc.h[static_cast<size_t>(k)], enc.h[static_cast<size_t>(j)]});
  ad::Var a = ad::leaky_relu(
      t,
      ad::add(t, ad::matvec(t, t.param(lab.left.w->value, lab.left.w->grad), hl),
              t.param(lab.left.b->value, lab.left.b->grad)),
      cfg_.leaky_slope);
  ad::Var b = ad::leaky_relu(
      t,
      ad::add(t, ad::matvec(t, t.param(lab.right.w->value, lab.right.w->grad), hr),
              t.param(lab.right.b->value, lab.right.b->grad)),
      cfg_.leaky_slope);
  ad::Var logits = ad::add(
      t,
      ad::add(t, ad::bilinear(t, a, t.param(lab.w_lr->value, lab.w_lr->grad), b),
              ad::tmatvec(t, t.param(lab.w_l->value, lab.w_l->grad), a)),
      ad::add(t, ad::tmatvec(t, t.param(lab.w_r->value, lab.w_r->grad), b),
              t.param(lab.b->value, lab.b->grad)));
  return ad::log_softmax(t, logits);
}

// ---- concrete forward ---------------------------------------------------------

Tensor Model::embed_position_concrete(const Sentence& s, int pos) const {
  const int id = s.token_ids[static_cast<size_t>(pos)];
  Tensor word = k_row(word_emb_->value, id);
  if (cfg_.pretrained_dim > 0) {
    Tensor pre = k_row(pretrained_, id);
    return k_concat({&pre, &word});
  }
  const std::vector<int>& chars = s.char_ids[static_cast<size_t>(pos)];
  ConcreteLstm fwd{char_fwd_.wx->value, char_fwd_.wh->value, char_fwd_.b->value,
                   char_fwd_.hidden};
  ConcreteLstm bwd{char_bwd_.wx->value, char_bwd_.wh->value, char_bwd_.b->value,
                   char_bwd_.hidden};
  Tensor fh = Tensor::zeros({char_fwd_.hidden});
  Tensor fc = fh;
  for (int c : chars) {
    Tensor x = k_row(char_emb_->value, c);
    fwd.step(x, fh, fc);
  }
  Tensor bh = Tensor::zeros({char_bwd_.hidden});
  Tensor bc = bh;
  for (size_t p = chars.size(); p-- > 0;) {
    Tensor x = k_row(char_emb_->value, chars[p]);
    bwd.step(x, bh, bc);
  }
  return k_concat({&fh, &bh, &word});
}

Model::Encoding Model::encode_concrete(const Sentence& s) const {
  const int n = s.n();
  const int positions = n + 2;
  std::vector<Tensor> inputs(static_cast<size_t>(positions));
  for (int p = 0; p < positions; ++p)
    inputs[static_cast<size_t>(p)] = embed_position_concrete(s, p);

  std::vector<Tensor> fh_top, bh_top;
  for (int l = 0; l < cfg_.encoder_layers; ++l) {
    const LstmCell& cf = enc_fwd_[static_cast<size_t>(l)];
    const LstmCell& cb = enc_bwd_[static_cast<size_t>(l)];
    ConcreteLstm fwd{cf.wx->value, cf.wh->value, cf.b->value, cf.hidden};
    ConcreteLstm bwd{cb.wx->value, cb.wh->value, cb.b->value, cb.hidden};
    std::vector<Tensor> fs(static_cast<size_t>(positions)), bs(static_cast<size_t>(positions));
    Tensor h = Tensor::zeros({cf.hidden});
    Tensor c = h;
    for (int p = 0; p < positions; ++p) {
      fwd.step(inputs[static_cast<size_t>(p)], h, c);
      fs[static_cast<size_t>(p)] = h;
    }
    h = Tensor::zeros({cb.hidden});
    c = h;
    for (int p = positions - 1; p >= 0; --p) {
      bwd.step(inputs[static_cast<size_t>(p)], h, c);
      bs[static_cast<size_t>(p)] = h;
    }
    for (int p = 0; p < positions; ++p) {
      const Tensor& fp = fs[static_cast<size_t>(p)];
      const Tensor& bp = bs[static_cast<size_t>(p)];
      inputs[static_cast<size_t>(p)] = k_concat({&fp, &bp});
    }
    if (l + 1 == cfg_.encoder_layers) {
      fh_top = std::move(fs);
      bh_top = std::move(bs);
    }
  }

  Encoding enc;
  enc.n = n;
  std::vector<Tensor> boundary(static_cast<size_t>(n + 1));
  for (int k = 0; k <= n; ++k) {
    const Tensor& f = fh_top[static_cast<size_t>(k)];
    const Tensor& b = bh_top[static_cast<size_t>(k + 1)];
    boundary[static_cast<size_t>(k)] = k_concat({&f, &b});
  }
  std::vector<const Tensor*> rows;
  rows.reserve(boundary.size());
  for (const Tensor& t : boundary) rows.push_back(&t);
  enc.h = k_stack_rows(rows);
  enc.hp = k_leaky_relu(k_add_rowwise(k_matmul_nt(enc.h, mlp_h_.w->value), mlp_h_.b->value),
                        cfg_.leaky_slope);
  return enc;
}

Model::State Model::initial_state_concrete() const {
  State st;
  for (int l = 0; l < cfg_.decoder_layers; ++l) {
    st.h.push_back(dec_init_h_[static_cast<size_t>(l)]->value);
    st.c.push_back(dec_init_c_[static_cast<size_t>(l)]->value);
  }
  return st;
}

std::vector<double> Model::PointDist::full_probs(int n) const {
  std::vector<double> probs(static_cast<size_t>(n + 1), 0.0);
  for (size_t idx = 0; idx < logp.size(); ++idx)
    probs[static_cast<size_t>(lo) + idx] = std::exp(logp[idx]);
  return probs;
}

double Model::PointDist::logp_at(int k) const {
  const int idx = k - lo;
  if (idx < 0 || idx >= static_cast<int>(logp.size()))
    throw InvalidArgument("point: boundary " + std::to_string(k) + " outside the valid set");
  return logp[static_cast<size_t>(idx)];
}

Model::PointDist Model::point_concrete(const State& state, int i, int j,
                                       const Encoding& enc) const {
  const auto [lo, len] = valid_range(mode_, i, j);
  if (len < 1)
    throw InvalidArgument("point: span (" + std::to_string(i) + "," + std::to_string(j) +
                          ") has no valid split point in mode " + mode_name(mode_));
  PointDist out;
  out.state = state;
  Tensor hi = k_row(enc.h, i);
  Tensor hj = k_row(enc.h, j);
  Tensor x = k_add(k_matvec(w1_->value, hi), k_matvec(w2_->value, hj));
  for (int l = 0; l < cfg_.decoder_layers; ++l) {
    const LstmCell& cell = dec_[static_cast<size_t>(l)];
    ConcreteLstm lstm{cell.wx->value, cell.wh->value, cell.b->value, cell.hidden};
    lstm.step(x, out.state.h[static_cast<size_t>(l)], out.state.c[static_cast<size_t>(l)]);
    x = out.state.h[static_cast<size_t>(l)];
  }
  Tensor dp = k_leaky_relu(k_add(k_matvec(mlp_d_.w->value, x), mlp_d_.b->value), cfg_.leaky_slope);
  Tensor u = k_add(k_tmatvec(w_dh_->value, dp), w_h_->value);
  Tensor scores = k_matvec(enc.hp, u);
  Tensor lp = k_log_softmax(k_slice(scores, lo, len));
  out.lo = lo;
  out.logp = std::move(lp.v);
  return out;
}

std::vector<double> Model::label_logits_concrete(const Labeler& lab, const Tensor& hl,
                                                 const Tensor& hr) const {
  Tensor a =
      k_leaky_relu(k_add(k_matvec(lab.left.w->value, hl), lab.left.b->value), cfg_.leaky_slope);
  Tensor b =
      k_leaky_relu(k_add(k_matvec(lab.right.w->value, hr), lab.right.b->value), cfg_.leaky_slope);
  Tensor logits = k_add(k_add(k_bilinear(a, lab.w_lr->value, b), k_tmatvec(lab.w_l->value, a)),
                        k_add(k_tmatvec(lab.w_r->value, b), lab.b->value));
  return logits.v;
}

std::vector<double> Model::syntax_label_logits(const Encoding& enc, int i, int j) const {
  check_label_span(i, j, enc.n, "syntax_label");
  Tensor hi = k_row(enc.h, i);
  Tensor hj = k_row(enc.h, j);
  return label_logits_concrete(syn_label_, hi, hj);
}

std::vector<double> Model::discourse_label_logits(const Encoding& enc, int i, int k,
                                                  int j) const {
  if (!(i < k && k < j))
    throw InvalidArgument("discourse_label: need i < k < j, got (" + std::to_string(i) + "," +
                          std::to_string(k) + "," + std::to_string(j) + ")");
  check_label_span(i, j, enc.n, "discourse_label");
  Tensor hi = k_row(enc.h, i);
  Tensor hk = k_row(enc.h, k);
  Tensor hj = k_row(enc.h, j);
  Tensor hl = k_concat({&hi, &hk});
  Tensor hr = k_concat({&hk, &hj});
  return label_logits_concrete(dis_label_, hl, hr);
}

namespace {

int argmax_skip(const std::vector<double>& xs, int skip) {
  int best = -1;
  for (int i = 0; i < static_cast<int>(xs.size()); ++i) {
    if (i == skip) continue;
    if (best < 0 || xs[static_cast<size_t>(i)] > xs[static_cast<size_t>(best)]) best = i;
  }
  return best;
}

}  // namespace

int Model::argmax_syntax_label(const Encoding& enc, int i, int j, bool exclude_empty) const {
  return argmax_skip(syntax_label_logits(enc, i, j), exclude_empty ? empty_label_id_ : -1);
}

int Model::argmax_discourse_label(const Encoding& enc, int i, int k, int j) const {
  return argmax_skip(discourse_label_logits(enc, i, k, j), -1);
}

}  // namespace splitparse

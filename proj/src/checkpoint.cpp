#include "splitparse/checkpoint.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "splitparse/error.hpp"

namespace splitparse {

namespace {

constexpr const char* kMagic = "splitparse-checkpoint v1";

std::string fmt_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

}  // namespace

std::string checkpoint_string(const Model& model) {
  std::ostringstream os;
  const ModelConfig& c = model.config();
  os << kMagic << "\n";
  os << "mode " << mode_name(model.mode()) << "\n";
  os << "dims " << c.word_emb_dim << " " << c.char_emb_dim << " " << c.char_rnn_hidden << " "
     << c.encoder_hidden << " " << c.encoder_layers << " " << c.decoder_layers << " " << c.mlp_dim
     << " " << c.pretrained_dim << "\n";
  os << "leaky_slope " << fmt_double(c.leaky_slope) << "\n";
  os << "beam_width " << c.beam_width << "\n";
  const Vocab& v = model.vocab();
  os << "words " << v.words().size() << "\n";
  for (const std::string& w : v.words()) os << w << "\n";
  os << "chars " << v.chars().size() << "\n";
  for (unsigned char ch : v.chars()) os << static_cast<int>(ch) << "\n";
  os << "labels_syn " << v.syn_labels().size() << "\n";
  for (const std::string& l : v.syn_labels()) os << l << "\n";
  os << "labels_dis " << v.dis_labels().size() << "\n";
  for (const std::string& l : v.dis_labels()) os << l << "\n";
  os << "params " << model.params().items().size() << "\n";
  for (const auto& p : model.params().items()) {
    os << "param " << p->name << " " << p->value.rank();
    for (int d : p->value.shape) os << " " << d;
    os << "\n";
    for (size_t i = 0; i < p->value.v.size(); ++i)
      os << (i ? " " : "") << fmt_double(p->value.v[i]);
    os << "\n";
  }
  os << "end\n";
  return os.str();
}

void save_checkpoint(const std::string& path, const Model& model) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write checkpoint: " + path);
  out << checkpoint_string(model);
  if (!out) throw DataError("failed writing checkpoint: " + path);
}

namespace {

struct LineReader {
  std::istringstream in;
  int line_no = 0;
  explicit LineReader(const std::string& text) : in(text) {}

  std::string next() {
    std::string line;
    if (!std::getline(in, line)) throw DataError("checkpoint truncated at line " +
                                                 std::to_string(line_no + 1));
    ++line_no;
    return line;
  }

  std::string expect_key(const std::string& key) {
    std::string line = next();
    if (line.rfind(key + " ", 0) != 0 && line != key)
      throw DataError("checkpoint line " + std::to_string(line_no) + ": expected '" + key +
                      "', got '" + line + "'");
    return line.size() > key.size() ? line.substr(key.size() + 1) : std::string();
  }
};

}  // namespace

std::unique_ptr<Model> load_checkpoint_string(const std::string& text) {
  LineReader r(text);
  const std::string magic = r.next();
  if (magic != kMagic)
    throw DataError("not a splitparse checkpoint (bad header '" + magic + "')");
  const Mode mode = parse_mode(r.expect_key("mode"));
  ModelConfig cfg;
  {
    std::istringstream ss(r.expect_key("dims"));
    if (!(ss >> cfg.word_emb_dim >> cfg.char_emb_dim >> cfg.char_rnn_hidden >>
          cfg.encoder_hidden >> cfg.encoder_layers >> cfg.decoder_layers >> cfg.mlp_dim >>
          cfg.pretrained_dim))
      throw DataError("checkpoint: malformed dims line");
  }
  cfg.leaky_slope = std::stod(r.expect_key("leaky_slope"));
  cfg.beam_width = std::stoi(r.expect_key("beam_width"));

  Vocab vocab;
  auto read_strings = [&r](const std::string& key) {
    const size_t count = std::stoul(r.expect_key(key));
    std::vector<std::string> out;
    out.reserve(count);
    for (size_t i = 0; i < count; ++i) out.push_back(r.next());
    return out;
  };
  vocab.set_words(read_strings("words"));
  {
    const size_t count = std::stoul(r.expect_key("chars"));
    std::vector<unsigned char> cs;
    cs.reserve(count);
    for (size_t i = 0; i < count; ++i) cs.push_back(static_cast<unsigned char>(std::stoi(r.next())));
    vocab.set_chars(std::move(cs));
  }
  vocab.set_syn_labels(read_strings("labels_syn"));
  vocab.set_dis_labels(read_strings("labels_dis"));

  auto model = std::make_unique<Model>(mode, cfg, std::move(vocab), 0);
  const size_t param_count = std::stoul(r.expect_key("params"));
  if (param_count != model->params().items().size())
    throw DataError("checkpoint: has " + std::to_string(param_count) +
                    " parameters, model expects " +
                    std::to_string(model->params().items().size()));
  for (size_t p = 0; p < param_count; ++p) {
    std::istringstream head(r.expect_key("param"));
    std::string name;
    int rank = 0;
    head >> name >> rank;
    std::vector<int> shape(static_cast<size_t>(rank));
    for (int d = 0; d < rank; ++d) head >> shape[static_cast<size_t>(d)];
    Param* target = model->params().find(name);
    if (!target) throw DataError("checkpoint: unknown parameter '" + name + "'");
    if (target->value.shape != shape)
      throw DataError("checkpoint: parameter '" + name + "' has shape mismatch");
    std::istringstream vals(r.next());
    for (double& x : target->value.v)
      if (!(vals >> x)) throw DataError("checkpoint: short value line for '" + name + "'");
  }
  r.expect_key("end");
  return model;
}

std::unique_ptr<Model> load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open checkpoint: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return load_checkpoint_string(ss.str());
}

}  // namespace splitparse

#include "splitparse/run.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "splitparse/checkpoint.hpp"
#include "splitparse/error.hpp"
#include "splitparse/inference.hpp"
#include "splitparse/metrics.hpp"
#include "splitparse/tree_codec.hpp"

namespace splitparse {

std::string resolved_config_string(const RunConfig& cfg) {
  std::ostringstream os;
  os << "mode=" << mode_name(cfg.mode) << "\n";
  os << "train=" << cfg.train_path << "\n";
  os << "dev=" << cfg.dev_path << "\n";
  os << "test=" << cfg.test_path << "\n";
  os << "model=" << cfg.model_path << "\n";
  os << "out=" << cfg.out_path << "\n";
  os << "embeddings=" << cfg.embeddings_path << "\n";
  os << "format=" << cfg.format << "\n";
  os << "seed=" << cfg.train.seed << "\n";
  os << "epochs=" << cfg.train.max_epochs << "\n";
  os << "min-word-freq=" << cfg.min_word_freq << "\n";
  os << "beam=" << (cfg.beam > 0 ? cfg.beam : cfg.model.beam_width) << "\n";
  os << "oracle=" << (cfg.oracle ? 1 : 0) << "\n";
  os << "word-emb-dim=" << cfg.model.word_emb_dim << "\n";
  os << "char-emb-dim=" << cfg.model.char_emb_dim << "\n";
  os << "char-rnn-hidden=" << cfg.model.char_rnn_hidden << "\n";
  os << "hidden=" << cfg.model.encoder_hidden << "\n";
  os << "encoder-layers=" << cfg.model.encoder_layers << "\n";
  os << "decoder-layers=" << cfg.model.decoder_layers << "\n";
  os << "mlp-dim=" << cfg.model.mlp_dim << "\n";
  os << "dropout=" << cfg.model.dropout << "\n";
  os << "batch-tokens=" << cfg.train.batch_tokens << "\n";
  os << "lr=" << cfg.train.adam.base_lr << "\n";
  os << "decay=" << cfg.train.adam.decay_rate << "\n";
  os << "decay-every=" << cfg.train.adam.decay_every << "\n";
  os << "clip-norm=" << cfg.train.clip_norm << "\n";
  os << "weight-decay=" << cfg.train.adam.weight_decay << "\n";
  os << "early-stop=" << cfg.train.early_stop_metric << "\n";
  return os.str();
}

namespace {

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write file: " + path);
  out << content;
}

void write_provenance(const RunConfig& cfg, const std::string& primary_output) {
  if (primary_output.empty()) return;
  write_file(primary_output + ".config", resolved_config_string(cfg));
}

// Sentences to parse: bracketed lines are treebank entries (tokens plus gold
// preterminals for re-printing); anything else is whitespace-tokenized text.
struct ParseInput {
  std::vector<std::string> tokens;
  std::vector<std::string> preterminals;  // may be empty
};

std::vector<ParseInput> read_parse_inputs(Mode mode, std::istream& in) {
  std::vector<ParseInput> items;
  std::string line;
  while (std::getline(in, line)) {
    size_t first = line.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) continue;
    ParseInput item;
    if (line[first] == '(') {
      if (mode == Mode::syntax) {
        std::vector<ParseTree> trees = parse_ptb_string(line);
        if (trees.size() != 1)
          throw DataError("expected one tree per input line, got " +
                          std::to_string(trees.size()));
        item.tokens = trees[0].tokens();
        item.preterminals = trees[0].preterminals();
      } else {
        std::vector<DiscourseDoc> docs = parse_discourse_string(line);
        if (docs.size() != 1)
          throw DataError("expected one discourse tree per input line, got " +
                          std::to_string(docs.size()));
        item.tokens = docs[0].tokens;
      }
    } else {
      std::istringstream ss(line);
      std::string tok;
      while (ss >> tok) item.tokens.push_back(tok);
    }
    items.push_back(std::move(item));
  }
  return items;
}

}  // namespace

void run_train(const RunConfig& cfg, std::ostream& log) {
  if (cfg.train_path.empty()) throw UsageError("train: --train is required");
  if (cfg.model_path.empty()) throw UsageError("train: --model is required");

  Dataset train_data = read_dataset(cfg.mode, cfg.train_path);
  Vocab vocab = build_vocab(train_data, cfg.min_word_freq);

  ModelConfig mc = cfg.model;
  if (!cfg.embeddings_path.empty() && mc.pretrained_dim == 0) {
    std::ifstream probe(cfg.embeddings_path);
    if (!probe) throw DataError("cannot open embeddings file: " + cfg.embeddings_path);
    std::string first_line;
    std::getline(probe, first_line);
    std::istringstream ss(first_line);
    std::string word;
    ss >> word;
    double x;
    int dim = 0;
    while (ss >> x) ++dim;
    if (dim == 0) throw DataError("embeddings file has no vector values on line 1");
    mc.pretrained_dim = dim;
  }

  Model model(cfg.mode, mc, vocab, cfg.train.seed);
  if (!cfg.embeddings_path.empty()) model.load_pretrained(cfg.embeddings_path);

  std::vector<TrainingExample> examples = make_examples(train_data, vocab);
  Dataset dev;
  const Dataset* devp = nullptr;
  if (!cfg.dev_path.empty()) {
    dev = read_dataset(cfg.mode, cfg.dev_path);
    devp = &dev;
  }
  TrainResult result = train(model, examples, devp, cfg.train, &log);
  save_checkpoint(cfg.model_path, model);
  write_provenance(cfg, cfg.model_path);
  log << "done best_epoch=" << result.best_epoch << std::fixed << std::setprecision(4)
      << " best_metric=" << result.best_metric << " model=" << cfg.model_path << "\n";
}

void run_parse(const RunConfig& cfg, std::istream& fallback_input, std::ostream& out,
               std::ostream& err) {
  if (cfg.model_path.empty()) throw UsageError("parse: --model is required");
  std::unique_ptr<Model> model = load_checkpoint(cfg.model_path);

  std::vector<ParseInput> inputs;
  if (!cfg.test_path.empty()) {
    std::ifstream in(cfg.test_path);
    if (!in) throw DataError("cannot open input file: " + cfg.test_path);
    inputs = read_parse_inputs(model->mode(), in);
  } else {
    inputs = read_parse_inputs(model->mode(), fallback_input);
  }

  const int beam = cfg.beam > 0 ? cfg.beam : model->config().beam_width;
  long oracle_checked = 0, oracle_disagreements = 0;
  std::ostringstream buffer;

  for (size_t idx = 0; idx < inputs.size(); ++idx) {
    const ParseInput& item = inputs[idx];
    const Sentence s = numericalize(model->vocab(), item.tokens);
    if (model->mode() == Mode::syntax) {
      const std::vector<std::string>* tags =
          item.preterminals.empty() ? nullptr : &item.preterminals;
      ParseResult r = beam_parse(*model, s, beam, tags);
      if (cfg.format == "splits")
        buffer << format_sequence(r.splits) << "\n";
      else
        buffer << to_bracketed(r.tree) << "\n";
      if (cfg.oracle && s.n() <= 10) {
        OracleResult o = brute_force_parse(*model, s, Mode::syntax);
        ++oracle_checked;
        const bool agree =
            o.splits.decisions == r.splits.decisions && std::abs(o.logp - r.logp) < 1e-9;
        if (!agree) {
          ++oracle_disagreements;
          err << "oracle disagreement on sentence " << idx << ": beam " << r.logp << " {"
              << format_sequence(r.splits) << "} vs exhaustive " << o.logp << " {"
              << format_sequence(o.splits) << "}\n";
        }
      }
    } else {
      DiscourseResult r = cfg.beam > 1 ? beam_discourse_parse(*model, s, beam)
                                       : greedy_discourse_parse(*model, s);
      if (cfg.format == "splits") {
        buffer << format_sequence(r.splits) << "\n";
      } else {
        DiscourseDoc doc{item.tokens, r.tree};
        buffer << to_discourse_sexpr(doc) << "\n";
        buffer << "edus";
        buffer << " 0";
        for (const auto& [i, j] : r.edus) buffer << " " << j;
        buffer << "\n";
      }
      if (cfg.oracle && s.n() <= 10) {
        OracleResult o = brute_force_parse(*model, s, Mode::discourse);
        ++oracle_checked;
        const bool agree =
            o.splits.decisions == r.splits.decisions && std::abs(o.logp - r.logp) < 1e-9;
        if (!agree) {
          ++oracle_disagreements;
          err << "oracle disagreement on text " << idx << ": decoded " << r.logp << " {"
              << format_sequence(r.splits) << "} vs exhaustive " << o.logp << " {"
              << format_sequence(o.splits) << "}\n";
        }
      }
    }
  }

  out << buffer.str();
  if (cfg.oracle)
    err << "oracle_checked=" << oracle_checked
        << " oracle_disagreements=" << oracle_disagreements << "\n";
  if (!cfg.out_path.empty()) {
    write_file(cfg.out_path, buffer.str());
    write_provenance(cfg, cfg.out_path);
  }
}

void run_eval(const RunConfig& cfg, std::ostream& out) {
  if (cfg.model_path.empty()) throw UsageError("eval: --model is required");
  if (cfg.test_path.empty()) throw UsageError("eval: --test is required");
  std::unique_ptr<Model> model = load_checkpoint(cfg.model_path);
  Dataset gold = read_dataset(model->mode(), cfg.test_path);
  const int beam = cfg.beam > 0 ? cfg.beam : model->config().beam_width;

  std::ostringstream report;
  report << std::fixed << std::setprecision(2);
  if (model->mode() == Mode::syntax) {
    std::vector<ParseTree> preds;
    preds.reserve(gold.trees.size());
    for (const ParseTree& g : gold.trees) {
      const Sentence s = numericalize(model->vocab(), g.tokens());
      const std::vector<std::string> tags = g.preterminals();
      preds.push_back(beam_parse(*model, s, beam, &tags).tree);
    }
    PRF prf = labeled_prf(gold.trees, preds);
    report << "labeled_precision=" << prf.precision << "\n";
    report << "labeled_recall=" << prf.recall << "\n";
    report << "labeled_f1=" << prf.f1 << "\n";
    report << "matched=" << prf.matched << " gold=" << prf.gold_count
           << " predicted=" << prf.pred_count << "\n";
    report << "\n  metric     P      R      F1\n";
    report << "  labeled  " << std::setw(6) << prf.precision << " " << std::setw(6) << prf.recall
           << " " << std::setw(6) << prf.f1 << "\n";
  } else {
    std::vector<DiscourseTree> gs, ps;
    long exact_edus = 0;
    for (const DiscourseDoc& doc : gold.docs) {
      gs.push_back(doc.tree);
      const Sentence s = numericalize(model->vocab(), doc.tokens);
      DiscourseResult r = cfg.beam > 1 ? beam_discourse_parse(*model, s, beam)
                                       : greedy_discourse_parse(*model, s);
      ps.push_back(r.tree);
      std::vector<std::pair<int, int>> gold_edus;
      doc.tree.edu_spans(gold_edus);
      if (gold_edus == r.edus) ++exact_edus;
    }
    RstScores rs = rst_prf(gs, ps);
    report << "span_f1=" << rs.span.f1 << "\n";
    report << "nuclearity_f1=" << rs.nuclearity.f1 << "\n";
    report << "relation_f1=" << rs.relation.f1 << "\n";
    report << "edu_exact_match=" << exact_edus << "/" << gold.docs.size() << "\n";
    report << "\n  metric        P      R      F1\n";
    report << "  span       " << std::setw(6) << rs.span.precision << " " << std::setw(6)
           << rs.span.recall << " " << std::setw(6) << rs.span.f1 << "\n";
    report << "  nuclearity " << std::setw(6) << rs.nuclearity.precision << " " << std::setw(6)
           << rs.nuclearity.recall << " " << std::setw(6) << rs.nuclearity.f1 << "\n";
    report << "  relation   " << std::setw(6) << rs.relation.precision << " " << std::setw(6)
           << rs.relation.recall << " " << std::setw(6) << rs.relation.f1 << "\n";
  }
  out << report.str();
  if (!cfg.out_path.empty()) {
    write_file(cfg.out_path, report.str());
    write_provenance(cfg, cfg.out_path);
  }
}

namespace {

SplitSequence parse_splits_line(const std::string& line, Mode mode) {
  SplitSequence seq;
  seq.mode = mode;
  std::istringstream ss(line);
  std::string item;
  while (ss >> item) {
    SplitDecision d;
    if (std::sscanf(item.c_str(), "(%d,%d)->%d", &d.i, &d.j, &d.k) != 3)
      throw DataError("malformed split decision '" + item + "' (expected (i,j)->k)");
    seq.decisions.push_back(d);
  }
  if (seq.decisions.empty()) throw DataError("empty split sequence line");
  return seq;
}

ParseTree skeleton_with_tokens(const ParseTree& shape) {
  if (shape.is_leaf)
    return ParseTree::make_leaf(shape.token_index, "w" + std::to_string(shape.token_index),
                                "XX");
  std::vector<ParseTree> kids;
  for (const ParseTree& c : shape.children) kids.push_back(skeleton_with_tokens(c));
  return ParseTree::make_internal("X", std::move(kids));
}

}  // namespace

void run_codec(const RunConfig& cfg, std::istream& fallback_input, std::ostream& out) {
  std::string text;
  if (!cfg.test_path.empty()) {
    std::ifstream in(cfg.test_path, std::ios::binary);
    if (!in) throw DataError("cannot open input file: " + cfg.test_path);
    std::ostringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  } else {
    std::ostringstream ss;
    ss << fallback_input.rdbuf();
    text = ss.str();
  }

  if (cfg.format == "trees") {
    // Inverse direction: one split sequence per line back to a skeleton tree.
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line)) {
      if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
      SplitSequence seq = parse_splits_line(line, cfg.mode);
      const int n = seq.decisions.front().j;  // root decision covers (0,n)
      if (cfg.mode == Mode::syntax) {
        ParseTree t = from_splits(seq, n);
        out << to_bracketed(skeleton_with_tokens(t)) << "\n";
      } else {
        DiscourseTree t = from_splits_dt(seq, n);
        struct {
          void label_all(DiscourseTree& node) const {
            if (node.is_edu) return;
            node.label = "X_NN";
            for (DiscourseTree& c : node.children) label_all(c);
          }
        } fix;
        fix.label_all(t);
        std::vector<std::string> tokens;
        for (int p = 0; p < n; ++p) tokens.push_back("w" + std::to_string(p + 1));
        out << to_discourse_sexpr({tokens, t}) << "\n";
      }
    }
    return;
  }

  if (cfg.mode == Mode::syntax) {
    for (const ParseTree& tree : parse_ptb_string(text)) {
      const ParseTree prepared = collapse_unary(binarize(tree));
      SplitSequence seq = to_splits(prepared);
      if (tree.leaf_count() > 1) {
        const ParseTree back = from_splits(seq, tree.leaf_count());
        SplitSequence again = to_splits(back);
        if (!(again == seq)) throw DataError("codec: split round-trip mismatch");
      }
      out << format_sequence(seq) << "\n";
    }
  } else {
    for (const DiscourseDoc& doc : parse_discourse_string(text)) {
      SplitSequence seq = to_splits_dt(doc.tree);
      const DiscourseTree back = from_splits_dt(seq, static_cast<int>(doc.tokens.size()));
      SplitSequence again = to_splits_dt(back);
      if (!(again == seq)) throw DataError("codec: discourse split round-trip mismatch");
      out << format_sequence(seq) << "\n";
    }
  }
}

}  // namespace splitparse

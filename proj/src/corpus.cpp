#include "splitparse/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

#include "splitparse/error.hpp"
#include "splitparse/tree_codec.hpp"

namespace splitparse {

namespace {

struct Lexer {
  const std::string& text;
  size_t pos = 0;
  int line = 1, col = 1;

  explicit Lexer(const std::string& t) : text(t) {}

  std::string where() const {
    return "line " + std::to_string(line) + ", column " + std::to_string(col);
  }

  void advance() {
    if (text[pos] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    ++pos;
  }

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) advance();
  }

  bool eof() {
    skip_ws();
    return pos >= text.size();
  }

  char peek() const { return text[pos]; }

  void expect(char c) {
    skip_ws();
    if (pos >= text.size() || text[pos] != c)
      throw DataError(std::string("expected '") + c + "' at " + where());
    advance();
  }

  std::string atom() {
    skip_ws();
    const size_t start = pos;
    while (pos < text.size() && !std::isspace(static_cast<unsigned char>(text[pos])) &&
           text[pos] != '(' && text[pos] != ')')
      advance();
    if (pos == start) throw DataError("expected a token at " + where());
    return text.substr(start, pos - start);
  }
};

ParseTree parse_node(Lexer& lx) {
  lx.expect('(');
  lx.skip_ws();
  if (lx.pos >= lx.text.size()) throw DataError("unbalanced parentheses at " + lx.where());
  if (lx.peek() == '(' || lx.peek() == ')')
    throw DataError("empty label at " + lx.where());
  const std::string label = lx.atom();
  std::vector<ParseTree> children;
  std::vector<std::string> terminals;
  while (true) {
    lx.skip_ws();
    if (lx.pos >= lx.text.size()) throw DataError("unbalanced parentheses at " + lx.where());
    if (lx.peek() == ')') {
      lx.advance();
      break;
    }
    if (lx.peek() == '(') {
      children.push_back(parse_node(lx));
    } else {
      terminals.push_back(lx.atom());
    }
  }
  if (!terminals.empty()) {
    if (!children.empty())
      throw DataError("node '" + label + "' mixes tokens and subtrees near " + lx.where());
    if (terminals.size() > 1)
      throw DataError("preterminal '" + label + "' has " + std::to_string(terminals.size()) +
                      " tokens near " + lx.where());
    return ParseTree::make_leaf(0, terminals[0], label);
  }
  if (children.empty())
    throw DataError("node '" + label + "' has no children near " + lx.where());
  return ParseTree::make_internal(label, std::move(children));
}

}  // namespace

std::vector<ParseTree> parse_ptb_string(const std::string& text) {
  Lexer lx(text);
  std::vector<ParseTree> trees;
  while (!lx.eof()) {
    ParseTree t = parse_node(lx);
    renumber_leaves(t);
    trees.push_back(std::move(t));
  }
  return trees;
}

static std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<ParseTree> read_ptb(const std::string& path) {
  const std::string text = slurp(path);
  std::vector<ParseTree> trees = parse_ptb_string(text);
  if (trees.empty()) throw DataError("empty treebank file: " + path);
  return trees;
}

std::string to_bracketed(const ParseTree& tree) {
  std::ostringstream os;
  struct {
    void operator()(const ParseTree& t, std::ostringstream& out) const {
      if (t.is_leaf) {
        out << "(" << t.label << " " << t.token << ")";
        return;
      }
      out << "(" << t.label;
      for (const ParseTree& c : t.children) {
        out << " ";
        (*this)(c, out);
      }
      out << ")";
    }
  } print;
  print(tree, os);
  return os.str();
}

void write_ptb(std::ostream& os, const std::vector<ParseTree>& trees) {
  for (const ParseTree& t : trees) os << to_bracketed(t) << "\n";
}

namespace {

DiscourseTree parse_discourse_node(Lexer& lx, std::vector<std::string>& tokens) {
  lx.expect('(');
  lx.skip_ws();
  if (lx.pos >= lx.text.size()) throw DataError("unbalanced parentheses at " + lx.where());
  if (lx.peek() == '(' || lx.peek() == ')')
    throw DataError("empty label at " + lx.where());
  const std::string label = lx.atom();
  if (label == "EDU") {
    const int start = static_cast<int>(tokens.size());
    while (true) {
      lx.skip_ws();
      if (lx.pos >= lx.text.size()) throw DataError("unbalanced parentheses at " + lx.where());
      if (lx.peek() == ')') {
        lx.advance();
        break;
      }
      if (lx.peek() == '(')
        throw DataError("EDU may only contain tokens, found subtree at " + lx.where());
      tokens.push_back(lx.atom());
    }
    if (static_cast<int>(tokens.size()) == start)
      throw DataError("EDU with no tokens near " + lx.where());
    return DiscourseTree::make_edu(start, static_cast<int>(tokens.size()));
  }
  const std::string nuc = nuclearity_of(label);
  if (nuc != "NN" && nuc != "NS" && nuc != "SN")
    throw DataError("relation label '" + label + "' at " + lx.where() +
                    " must end in _NN, _NS or _SN");
  std::vector<DiscourseTree> kids;
  while (true) {
    lx.skip_ws();
    if (lx.pos >= lx.text.size()) throw DataError("unbalanced parentheses at " + lx.where());
    if (lx.peek() == ')') {
      lx.advance();
      break;
    }
    kids.push_back(parse_discourse_node(lx, tokens));
  }
  if (kids.size() != 2)
    throw DataError("relation node '" + label + "' near " + lx.where() + " has " +
                    std::to_string(kids.size()) + " children (need exactly 2)");
  return DiscourseTree::make_rel(label, std::move(kids[0]), std::move(kids[1]));
}

}  // namespace

std::vector<DiscourseDoc> parse_discourse_string(const std::string& text) {
  Lexer lx(text);
  std::vector<DiscourseDoc> docs;
  while (!lx.eof()) {
    DiscourseDoc doc;
    doc.tree = parse_discourse_node(lx, doc.tokens);
    docs.push_back(std::move(doc));
  }
  return docs;
}

std::vector<DiscourseDoc> read_discourse(const std::string& path) {
  const std::string text = slurp(path);
  std::vector<DiscourseDoc> docs = parse_discourse_string(text);
  if (docs.empty()) throw DataError("empty discourse file: " + path);
  return docs;
}

std::string to_discourse_sexpr(const DiscourseDoc& doc) {
  std::ostringstream os;
  struct {
    void operator()(const DiscourseTree& t, const std::vector<std::string>& tokens,
                    std::ostringstream& out) const {
      if (t.is_edu) {
        out << "(EDU";
        for (int p = t.i; p < t.j; ++p) out << " " << tokens[static_cast<size_t>(p)];
        out << ")";
        return;
      }
      out << "(" << t.label << " ";
      (*this)(t.children[0], tokens, out);
      out << " ";
      (*this)(t.children[1], tokens, out);
      out << ")";
    }
  } print;
  print(doc.tree, doc.tokens, os);
  return os.str();
}

void write_discourse(std::ostream& os, const std::vector<DiscourseDoc>& docs) {
  for (const DiscourseDoc& d : docs) os << to_discourse_sexpr(d) << "\n";
}

Dataset read_dataset(Mode mode, const std::string& path) {
  Dataset ds;
  ds.mode = mode;
  if (mode == Mode::syntax)
    ds.trees = read_ptb(path);
  else
    ds.docs = read_discourse(path);
  return ds;
}

// ---- Vocab ------------------------------------------------------------------

void Vocab::set_words(std::vector<std::string> ws) {
  words_ = std::move(ws);
  word_map_.clear();
  for (size_t i = 0; i < words_.size(); ++i)
    word_map_[words_[i]] = kReserved + static_cast<int>(i);
}

void Vocab::set_chars(std::vector<unsigned char> cs) {
  chars_ = std::move(cs);
  char_map_.clear();
  for (size_t i = 0; i < chars_.size(); ++i)
    char_map_[chars_[i]] = kReserved + static_cast<int>(i);
}

void Vocab::set_syn_labels(std::vector<std::string> ls) {
  syn_labels_ = std::move(ls);
  syn_map_.clear();
  for (size_t i = 0; i < syn_labels_.size(); ++i) syn_map_[syn_labels_[i]] = static_cast<int>(i);
}

void Vocab::set_dis_labels(std::vector<std::string> ls) {
  dis_labels_ = std::move(ls);
  dis_map_.clear();
  for (size_t i = 0; i < dis_labels_.size(); ++i) dis_map_[dis_labels_[i]] = static_cast<int>(i);
}

int Vocab::word_id(const std::string& w) const {
  auto it = word_map_.find(w);
  return it == word_map_.end() ? kUnk : it->second;
}

int Vocab::char_id(unsigned char c) const {
  auto it = char_map_.find(c);
  return it == char_map_.end() ? kUnk : it->second;
}

int Vocab::syn_label_id(const std::string& l) const {
  auto it = syn_map_.find(l);
  if (it == syn_map_.end()) throw DataError("unknown syntactic label: " + l);
  return it->second;
}

int Vocab::dis_label_id(const std::string& l) const {
  auto it = dis_map_.find(l);
  if (it == dis_map_.end()) throw DataError("unknown discourse label: " + l);
  return it->second;
}

const std::string& Vocab::syn_label(int id) const {
  if (id < 0 || id >= syn_label_count())
    throw InvalidArgument("syntactic label id out of range: " + std::to_string(id));
  return syn_labels_[static_cast<size_t>(id)];
}

const std::string& Vocab::dis_label(int id) const {
  if (id < 0 || id >= dis_label_count())
    throw InvalidArgument("discourse label id out of range: " + std::to_string(id));
  return dis_labels_[static_cast<size_t>(id)];
}

namespace {

void collect_internal_labels(const ParseTree& t, std::set<std::string>& out) {
  if (t.is_leaf) return;
  out.insert(t.label);
  for (const ParseTree& c : t.children) collect_internal_labels(c, out);
}

void collect_relation_labels(const DiscourseTree& t, std::set<std::string>& out) {
  if (t.is_edu) return;
  out.insert(t.label);
  for (const DiscourseTree& c : t.children) collect_relation_labels(c, out);
}

}  // namespace

Vocab build_vocab(const Dataset& train, int min_word_freq) {
  if (train.size() == 0) throw DataError("build_vocab: empty corpus");
  std::map<std::string, int> freq;
  std::set<unsigned char> chars;
  auto add_tokens = [&](const std::vector<std::string>& tokens) {
    for (const std::string& w : tokens) {
      ++freq[w];
      for (char c : w) chars.insert(static_cast<unsigned char>(c));
    }
  };

  Vocab vocab;
  if (train.mode == Mode::syntax) {
    std::set<std::string> labels;
    labels.insert(kEmptyLabel);
    for (const ParseTree& t : train.trees) {
      add_tokens(t.tokens());
      collect_internal_labels(collapse_unary(binarize(t)), labels);
    }
    vocab.set_syn_labels({labels.begin(), labels.end()});
  } else {
    std::set<std::string> labels;
    for (const DiscourseDoc& d : train.docs) {
      add_tokens(d.tokens);
      collect_relation_labels(d.tree, labels);
    }
    if (labels.empty()) throw DataError("build_vocab: no relation labels in corpus");
    vocab.set_dis_labels({labels.begin(), labels.end()});
  }

  std::vector<std::string> words;
  for (const auto& [w, f] : freq)
    if (f >= min_word_freq) words.push_back(w);
  vocab.set_words(std::move(words));
  vocab.set_chars({chars.begin(), chars.end()});
  return vocab;
}

Sentence numericalize(const Vocab& vocab, const std::vector<std::string>& tokens) {
  Sentence s;
  s.tokens = tokens;
  s.token_ids.reserve(tokens.size() + 2);
  s.char_ids.reserve(tokens.size() + 2);
  s.token_ids.push_back(Vocab::kSos);
  s.char_ids.push_back({Vocab::kSos});
  for (const std::string& w : tokens) {
    s.token_ids.push_back(vocab.word_id(w));
    std::vector<int> cs;
    cs.reserve(w.size());
    for (char c : w) cs.push_back(vocab.char_id(static_cast<unsigned char>(c)));
    if (cs.empty()) cs.push_back(Vocab::kUnk);
    s.char_ids.push_back(std::move(cs));
  }
  s.token_ids.push_back(Vocab::kEos);
  s.char_ids.push_back({Vocab::kEos});
  return s;
}

}  // namespace splitparse

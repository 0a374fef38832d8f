#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "splitparse/tree.hpp"

namespace splitparse {

// ---- bracketed treebank I/O -------------------------------------------------

// Reads whitespace-separated s-expression trees: (LABEL child+) with
// preterminals (TAG token). Errors carry line/column positions.
std::vector<ParseTree> parse_ptb_string(const std::string& text);
std::vector<ParseTree> read_ptb(const std::string& path);
std::string to_bracketed(const ParseTree& tree);
void write_ptb(std::ostream& os, const std::vector<ParseTree>& trees);  // one per line

// Discourse carrier format: node := "(" RELATION_NUC node node ")"
//                                 | "(EDU" token+ ")"
// RELATION_NUC must end in _NN, _NS or _SN. EDU boundaries are computed from
// left-to-right token counts.
struct DiscourseDoc {
  std::vector<std::string> tokens;
  DiscourseTree tree;
};

std::vector<DiscourseDoc> parse_discourse_string(const std::string& text);
std::vector<DiscourseDoc> read_discourse(const std::string& path);
std::string to_discourse_sexpr(const DiscourseDoc& doc);
void write_discourse(std::ostream& os, const std::vector<DiscourseDoc>& docs);

// A treebank in either mode. Exactly one of trees/docs is populated.
struct Dataset {
  Mode mode = Mode::syntax;
  std::vector<ParseTree> trees;
  std::vector<DiscourseDoc> docs;
  size_t size() const { return mode == Mode::syntax ? trees.size() : docs.size(); }
};

Dataset read_dataset(Mode mode, const std::string& path);

// ---- vocabulary -------------------------------------------------------------

// Word/char/label id maps with fixed reserved ids. Word and char ids are
// assigned in sorted order so rebuilding from the same corpus reproduces the
// same maps; label ids likewise.
class Vocab {
 public:
  static constexpr int kPad = 0;
  static constexpr int kUnk = 1;
  static constexpr int kSos = 2;
  static constexpr int kEos = 3;
  static constexpr int kReserved = 4;

  int word_id(const std::string& w) const;   // unknown -> kUnk
  int char_id(unsigned char c) const;        // unknown -> kUnk
  int syn_label_id(const std::string& l) const;
  int dis_label_id(const std::string& l) const;
  const std::string& syn_label(int id) const;
  const std::string& dis_label(int id) const;

  int word_count() const { return kReserved + static_cast<int>(words_.size()); }
  int char_count() const { return kReserved + static_cast<int>(chars_.size()); }
  int syn_label_count() const { return static_cast<int>(syn_labels_.size()); }
  int dis_label_count() const { return static_cast<int>(dis_labels_.size()); }

  const std::vector<std::string>& words() const { return words_; }
  const std::vector<unsigned char>& chars() const { return chars_; }
  const std::vector<std::string>& syn_labels() const { return syn_labels_; }
  const std::vector<std::string>& dis_labels() const { return dis_labels_; }

  void set_words(std::vector<std::string> ws);
  void set_chars(std::vector<unsigned char> cs);
  void set_syn_labels(std::vector<std::string> ls);
  void set_dis_labels(std::vector<std::string> ls);

 private:
  std::vector<std::string> words_;
  std::vector<unsigned char> chars_;
  std::vector<std::string> syn_labels_;
  std::vector<std::string> dis_labels_;
  std::map<std::string, int> word_map_;
  std::map<unsigned char, int> char_map_;
  std::map<std::string, int> syn_map_;
  std::map<std::string, int> dis_map_;
};

// Builds word/char/label vocabularies from training data. Words below
// min_word_freq are dropped (they numericalize to <unk>); their characters
// are still covered. Syntactic labels are collected after binarize +
// collapse_unary so the dummy label and collapsed chains are first-class.
Vocab build_vocab(const Dataset& train, int min_word_freq);

// ---- numericalization -------------------------------------------------------

// token_ids carry leading <sos> and trailing <eos>; char_ids has one entry
// per position including the markers (a single reserved char id each).
struct Sentence {
  std::vector<std::string> tokens;
  std::vector<int> token_ids;
  std::vector<std::vector<int>> char_ids;
  int n() const { return static_cast<int>(tokens.size()); }
};

Sentence numericalize(const Vocab& vocab, const std::vector<std::string>& tokens);

}  // namespace splitparse

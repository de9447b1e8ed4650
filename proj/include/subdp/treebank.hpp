#pragma once

#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "subdp/la.hpp"

namespace subdp {

// Error with a message that names the offending input line where applicable.
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Token {
  int index = 0;             // 1-based position within the sentence
  std::string form = "_";
  std::string lemma = "_";
  std::string upos = "_";
  std::string xpos = "_";
  std::string feats = "_";
  int head = -1;             // 0 = ROOT, -1 = unattached (partial trees only)
  std::string deprel = "_";
  std::string deps = "_";
  std::string misc = "_";
};

struct Sentence {
  std::vector<Token> tokens;
  std::vector<std::string> comments;  // verbatim "#..." lines
  std::string id;                     // from "# sent_id = ..." when present

  int size() const { return static_cast<int>(tokens.size()); }
  const Token& token(int i) const { return tokens[static_cast<size_t>(i) - 1]; }
  Token& token(int i) { return tokens[static_cast<size_t>(i) - 1]; }
};

// Ordered label inventory; lexicographic so indices are stable across runs.
class LabelSet {
 public:
  LabelSet() = default;
  explicit LabelSet(std::vector<std::string> labels);
  static LabelSet from_sentences(const std::vector<Sentence>& sentences);

  int index(const std::string& label) const;  // throws on unknown label
  bool contains(const std::string& label) const;
  const std::string& label(int idx) const { return labels_[static_cast<size_t>(idx)]; }
  int size() const { return static_cast<int>(labels_.size()); }
  const std::vector<std::string>& labels() const { return labels_; }
  bool operator==(const LabelSet& o) const { return labels_ == o.labels_; }
  bool operator!=(const LabelSet& o) const { return !(*this == o); }

 private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, int> index_;
};

// Parses CoNLL-U text. Multiword-token ranges and empty nodes are skipped;
// comment lines are kept verbatim. With allow_partial, "_" heads are accepted
// (head = -1) and the single-root/tree checks are relaxed to the attached part.
std::vector<Sentence> parse_conllu(const std::string& text, bool allow_partial = false);

std::string write_conllu(const std::vector<Sentence>& sentences);

std::vector<Sentence> read_conllu_file(const std::string& path, bool allow_partial = false);
void write_conllu_file(const std::string& path, const std::vector<Sentence>& sentences);

// (n+1)x(n+1); row i one-hot at the gold head, row 0 (ROOT as dependent) zero.
ArcMatrix gold_arc_matrix(const Sentence& s);

// (n+1)x(n+1)x|L| as |L| matrices: one-hot at gold (dependent, head) cells,
// uniform 1/|L| everywhere else.
LabelTensor gold_label_tensor(const Sentence& s, const LabelSet& labels);

}  // namespace subdp

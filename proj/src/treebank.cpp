#include "subdp/treebank.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

namespace subdp {

namespace {

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> fields;
  size_t start = 0;
  while (true) {
    size_t pos = line.find('\t', start);
    if (pos == std::string::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return fields;
}

bool parse_int_strict(const std::string& s, int* out) {
  if (s.empty()) return false;
  int v = 0;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
    v = v * 10 + (c - '0');
    if (v > 100000000) return false;
  }
  *out = v;
  return true;
}

void validate_sentence(const Sentence& s, bool allow_partial,
                       const std::vector<int>& token_lines) {
  const int n = s.size();
  int roots = 0;
  for (int i = 1; i <= n; ++i) {
    const Token& t = s.token(i);
    const int line = token_lines[static_cast<size_t>(i) - 1];
    if (t.head > n) {
      throw ParseError("line " + std::to_string(line) + ": head " +
                       std::to_string(t.head) + " out of range for sentence of length " +
                       std::to_string(n));
    }
    if (t.head == i) {
      throw ParseError("line " + std::to_string(line) + ": token is its own head");
    }
    if (t.head == 0) ++roots;
  }
  if (!allow_partial) {
    if (roots == 0) {
      throw ParseError("line " + std::to_string(token_lines.front()) +
                       ": sentence has no root");
    }
    if (roots > 1) {
      throw ParseError("line " + std::to_string(token_lines.front()) +
                       ": sentence has " + std::to_string(roots) + " roots");
    }
  }
  // Every attached token must reach ROOT; a walk longer than n means a cycle.
  for (int i = 1; i <= n; ++i) {
    int v = i;
    int steps = 0;
    while (v > 0) {
      v = s.token(v).head;
      if (v < 0) break;  // unattached ancestor (partial data)
      if (++steps > n) {
        throw ParseError("line " + std::to_string(token_lines[static_cast<size_t>(i) - 1]) +
                         ": cyclic tree");
      }
    }
  }
}

std::string sent_id_from_comments(const std::vector<std::string>& comments) {
  for (const std::string& c : comments) {
    const std::string key = "# sent_id = ";
    if (c.rfind(key, 0) == 0) return c.substr(key.size());
  }
  return "";
}

}  // namespace

LabelSet::LabelSet(std::vector<std::string> labels) : labels_(std::move(labels)) {
  std::sort(labels_.begin(), labels_.end());
  labels_.erase(std::unique(labels_.begin(), labels_.end()), labels_.end());
  for (size_t i = 0; i < labels_.size(); ++i) index_[labels_[i]] = static_cast<int>(i);
}

LabelSet LabelSet::from_sentences(const std::vector<Sentence>& sentences) {
  std::vector<std::string> labels;
  for (const Sentence& s : sentences) {
    for (const Token& t : s.tokens) {
      if (t.head >= 0) labels.push_back(t.deprel);
    }
  }
  return LabelSet(std::move(labels));
}

int LabelSet::index(const std::string& label) const {
  auto it = index_.find(label);
  if (it == index_.end()) throw std::runtime_error("unknown dependency label: " + label);
  return it->second;
}

bool LabelSet::contains(const std::string& label) const {
  return index_.count(label) > 0;
}

std::vector<Sentence> parse_conllu(const std::string& text, bool allow_partial) {
  std::vector<Sentence> out;
  Sentence cur;
  std::vector<int> token_lines;
  int line_no = 0;

  auto flush = [&]() {
    if (!cur.tokens.empty()) {
      validate_sentence(cur, allow_partial, token_lines);
      cur.id = sent_id_from_comments(cur.comments);
      out.push_back(std::move(cur));
    }
    cur = Sentence{};
    token_lines.clear();
  };

  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) {
      flush();
      continue;
    }
    if (line[0] == '#') {
      cur.comments.push_back(line);
      continue;
    }
    std::vector<std::string> f = split_tabs(line);
    if (f.size() != 10) {
      throw ParseError("line " + std::to_string(line_no) + ": expected 10 tab-separated columns, got " +
                       std::to_string(f.size()));
    }
    // Multiword token ranges ("2-3") and empty nodes ("2.1") carry no head
    // annotation; skip them.
    if (f[0].find('-') != std::string::npos || f[0].find('.') != std::string::npos) continue;

    Token t;
    if (!parse_int_strict(f[0], &t.index) || t.index != cur.size() + 1) {
      throw ParseError("line " + std::to_string(line_no) + ": bad token index '" + f[0] + "'");
    }
    t.form = f[1];
    t.lemma = f[2];
    t.upos = f[3];
    t.xpos = f[4];
    t.feats = f[5];
    if (f[6] == "_") {
      if (!allow_partial) {
        throw ParseError("line " + std::to_string(line_no) + ": non-integer head '" + f[6] + "'");
      }
      t.head = -1;
    } else if (!parse_int_strict(f[6], &t.head)) {
      throw ParseError("line " + std::to_string(line_no) + ": non-integer head '" + f[6] + "'");
    }
    t.deprel = f[7];
    t.deps = f[8];
    t.misc = f[9];
    cur.tokens.push_back(std::move(t));
    token_lines.push_back(line_no);
  }
  flush();
  return out;
}

std::string write_conllu(const std::vector<Sentence>& sentences) {
  std::string out;
  for (const Sentence& s : sentences) {
    for (const std::string& c : s.comments) {
      out += c;
      out += '\n';
    }
    for (const Token& t : s.tokens) {
      out += std::to_string(t.index);
      out += '\t';
      out += t.form;
      out += '\t';
      out += t.lemma;
      out += '\t';
      out += t.upos;
      out += '\t';
      out += t.xpos;
      out += '\t';
      out += t.feats;
      out += '\t';
      out += t.head < 0 ? std::string("_") : std::to_string(t.head);
      out += '\t';
      out += t.deprel;
      out += '\t';
      out += t.deps;
      out += '\t';
      out += t.misc;
      out += '\n';
    }
    out += '\n';
  }
  return out;
}

std::vector<Sentence> read_conllu_file(const std::string& path, bool allow_partial) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return parse_conllu(buf.str(), allow_partial);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

void write_conllu_file(const std::string& path, const std::vector<Sentence>& sentences) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << write_conllu(sentences);
  if (!out) throw std::runtime_error("failed writing " + path);
}

ArcMatrix gold_arc_matrix(const Sentence& s) {
  const int n = s.size();
  Mat m = Mat::Zero(n + 1, n + 1);
  for (int i = 1; i <= n; ++i) {
    const int h = s.token(i).head;
    if (h < 0) throw std::runtime_error("gold_arc_matrix: unattached token in sentence " + s.id);
    m(i, h) = 1.0;
  }
  return m;
}

LabelTensor gold_label_tensor(const Sentence& s, const LabelSet& labels) {
  const int n = s.size();
  const int L = labels.size();
  LabelTensor q(static_cast<size_t>(L), Mat::Constant(n + 1, n + 1, 1.0 / L));
  for (int i = 1; i <= n; ++i) {
    const Token& t = s.token(i);
    if (t.head < 0) throw std::runtime_error("gold_label_tensor: unattached token in sentence " + s.id);
    const int r = labels.index(t.deprel);
    for (int l = 0; l < L; ++l) q[static_cast<size_t>(l)](i, t.head) = (l == r) ? 1.0 : 0.0;
  }
  return q;
}

}  // namespace subdp

#include "subdp/projection.hpp"

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace subdp {

Mat project_arcs(const Mat& p1, const StochasticAlignment& al) {
  const int ns = al.n_src;
  if (p1.rows() != ns + 1 || p1.cols() != ns + 1) {
    throw std::invalid_argument("project_arcs: arc matrix does not match alignment size");
  }
  // P1 extended with an all-zero dummy row and column; the dummy row of the
  // source-to-target matrix is likewise zero, so no mass enters through it.
  Mat p1x = Mat::Zero(ns + 2, ns + 2);
  p1x.topLeftCorner(ns + 1, ns + 1) = p1;
  Mat ast = Mat::Zero(ns + 2, al.n_tgt + 2);
  ast.topRows(ns + 1) = al.a_st;
  return al.a_ts * p1x * ast;
}

LabelTensor project_labels(const LabelTensor& q1, const StochasticAlignment& al) {
  const int ns = al.n_src;
  if (q1.empty()) throw std::invalid_argument("project_labels: empty label tensor");
  const double uniform = 1.0 / static_cast<double>(q1.size());
  LabelTensor out;
  for (const Mat& ql : q1) {
    if (ql.rows() != ns + 1 || ql.cols() != ns + 1) {
      throw std::invalid_argument("project_labels: label tensor does not match alignment size");
    }
    Mat qx = Mat::Constant(ns + 2, ns + 2, uniform);
    qx.topLeftCorner(ns + 1, ns + 1) = ql;
    out.push_back(al.a_ts * qx * al.a_ts.transpose());
  }
  return out;
}

SoftTarget project_discrete_tree(const Sentence& s, const StochasticAlignment& al,
                                 const LabelSet& labels) {
  SoftTarget t;
  t.arcs = project_arcs(gold_arc_matrix(s), al);
  t.labels = project_labels(gold_label_tensor(s, labels), al);
  t.target_sentence_id = s.id;
  return t;
}

std::vector<HardArc> hard_project(const Sentence& s, const RawAlignment& a) {
  std::map<int, int> src_deg, tgt_deg;
  for (const auto& [i, j] : a.links) {
    ++src_deg[i];
    ++tgt_deg[j];
  }
  std::map<int, int> one_to_one;  // source position -> target position
  one_to_one[0] = 0;
  for (const auto& [i, j] : a.links) {
    if (src_deg[i] == 1 && tgt_deg[j] == 1) one_to_one[i] = j;
  }
  std::vector<HardArc> out;
  for (int i = 1; i <= s.size(); ++i) {
    const Token& tok = s.token(i);
    if (tok.head < 0) continue;
    auto dep_it = one_to_one.find(i);
    auto head_it = one_to_one.find(tok.head);
    if (dep_it != one_to_one.end() && head_it != one_to_one.end()) {
      out.push_back({dep_it->second, head_it->second, tok.deprel});
    }
  }
  return out;
}

NormalizedProjection project_arcs_normalized(const Mat& p1, const StochasticAlignment& al) {
  const int ns = al.n_src;
  const int nt = al.n_tgt;
  if (p1.rows() != ns + 1 || p1.cols() != ns + 1) {
    throw std::invalid_argument("project_arcs_normalized: arc matrix does not match alignment");
  }
  // Dropping the dummy column reproduces the row-normalized raw alignment with
  // zero rows kept for unaligned words.
  const Mat abar_ts = al.a_ts.leftCols(ns + 1);
  const Mat abar_st = al.a_st.leftCols(nt + 1);
  Mat pbar = abar_ts * p1 * abar_st;
  NormalizedProjection out;
  out.alpha = Vec::Zero(nt + 1);
  out.p2 = Mat::Zero(nt + 1, nt + 1);
  for (int p = 0; p <= nt; ++p) {
    const double mass = pbar.row(p).sum();
    out.alpha(p) = mass;
    if (mass > 0.0) out.p2.row(p) = pbar.row(p) / mass;
  }
  return out;
}

// --- soft-target corpus files ---

namespace {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

void write_soft_corpus(std::ostream& out, const SoftCorpus& corpus) {
  out << "SUBDP-SOFT 1\n";
  out << "LABELS";
  for (const std::string& l : corpus.labels.labels()) out << ' ' << l;
  out << '\n';
  const int L = corpus.labels.size();
  const double uniform = 1.0 / L;
  for (const SoftRecord& r : corpus.records) {
    const int n = r.target.n_tgt();
    out << "S " << r.id << '\n';
    out << "N " << n << ' ' << L << ' ' << fmt_double(uniform) << '\n';
    out << "T";
    for (const std::string& f : r.forms) out << ' ' << f;
    out << '\n';
    for (int p = 0; p <= n; ++p) {
      for (int q = 0; q <= n + 1; ++q) {
        const double v = r.target.arcs(p, q);
        if (v > 0.0 && v >= corpus.threshold) {
          out << "A " << p << ' ' << q << ' ' << fmt_double(v) << '\n';
        }
      }
    }
    for (int p = 0; p <= n; ++p) {
      for (int q = 0; q <= n; ++q) {
        const double v = r.target.arcs(p, q);
        if (!(v > 0.0 && v >= corpus.threshold)) continue;
        out << "L " << p << ' ' << q;
        for (int l = 0; l < L; ++l) out << ' ' << fmt_double(r.target.labels[static_cast<size_t>(l)](p, q));
        out << '\n';
      }
    }
    out << '\n';
  }
}

void write_soft_corpus_file(const std::string& path, const SoftCorpus& corpus) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  write_soft_corpus(out, corpus);
  if (!out) throw std::runtime_error("failed writing " + path);
}

SoftCorpus read_soft_corpus(std::istream& in) {
  SoftCorpus corpus;
  std::string line;
  int line_no = 0;
  auto fail = [&](const std::string& msg) -> void {
    throw std::runtime_error("soft corpus line " + std::to_string(line_no) + ": " + msg);
  };

  if (!std::getline(in, line)) throw std::runtime_error("empty soft corpus file");
  ++line_no;
  if (line.rfind("SUBDP-SOFT 1", 0) != 0) fail("bad header");
  if (!std::getline(in, line)) fail("missing LABELS line");
  ++line_no;
  {
    std::istringstream ls(line);
    std::string tag;
    ls >> tag;
    if (tag != "LABELS") fail("missing LABELS line");
    std::vector<std::string> labels;
    std::string l;
    while (ls >> l) labels.push_back(l);
    if (labels.empty()) fail("empty label set");
    corpus.labels = LabelSet(labels);
    if (corpus.labels.size() != static_cast<int>(labels.size())) fail("duplicate labels");
  }
  const int L = corpus.labels.size();

  SoftRecord rec;
  bool open = false;
  int n = -1;
  auto flush = [&]() {
    if (!open) return;
    if (n < 0) fail("record without N line");
    corpus.records.push_back(std::move(rec));
    rec = SoftRecord{};
    open = false;
    n = -1;
  };

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) {
      flush();
      continue;
    }
    std::istringstream ls(line);
    std::string tag;
    ls >> tag;
    if (tag == "S") {
      if (open) flush();
      open = true;
      ls >> rec.id;
    } else if (tag == "N") {
      if (!open) fail("N line outside record");
      int l_count = 0;
      double uniform = 0.0;
      if (!(ls >> n >> l_count >> uniform) || n < 0) fail("bad N line");
      if (l_count != L) fail("record label count differs from corpus label set");
      rec.target.arcs = Mat::Zero(n + 1, n + 2);
      rec.target.labels.assign(static_cast<size_t>(L), Mat::Constant(n + 1, n + 1, 1.0 / L));
      rec.target.target_sentence_id = rec.id;
    } else if (tag == "T") {
      if (!open || n < 0) fail("T line outside record");
      std::string f;
      while (ls >> f) rec.forms.push_back(f);
      if (static_cast<int>(rec.forms.size()) != n) fail("token count differs from N");
    } else if (tag == "A") {
      if (!open || n < 0) fail("A line outside record");
      int p = -1, q = -1;
      double v = 0.0;
      if (!(ls >> p >> q >> v) || p < 0 || p > n || q < 0 || q > n + 1) fail("bad A line");
      rec.target.arcs(p, q) = v;
    } else if (tag == "L") {
      if (!open || n < 0) fail("L line outside record");
      int p = -1, q = -1;
      if (!(ls >> p >> q) || p < 0 || p > n || q < 0 || q > n) fail("bad L line");
      for (int l = 0; l < L; ++l) {
        double v = 0.0;
        if (!(ls >> v)) fail("short L line");
        rec.target.labels[static_cast<size_t>(l)](p, q) = v;
      }
    } else {
      fail("unknown record tag '" + tag + "'");
    }
  }
  flush();
  return corpus;
}

SoftCorpus read_soft_corpus_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  try {
    return read_soft_corpus(in);
  } catch (const std::exception& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

}  // namespace subdp

#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "subdp/alignment.hpp"
#include "subdp/la.hpp"
#include "subdp/treebank.hpp"

namespace subdp {

// Projected soft silver labels for one target sentence. Arc rows include the
// dummy null column; a row is all zero exactly when the dependent is aligned
// only to the source dummy.
struct SoftTarget {
  Mat arcs;                  // (n_t+1) x (n_t+2), last column = dummy
  LabelTensor labels;        // |L| of (n_t+1) x (n_t+1)
  std::string target_sentence_id;

  int n_tgt() const { return static_cast<int>(arcs.rows()) - 1; }
};

// A^{t->s} * P1' * A^{s->t} with P1 extended by an all-zero dummy row/column.
Mat project_arcs(const Mat& p1, const StochasticAlignment& al);

// Both mixing matrices are A^{t->s}; dummy source positions carry uniform
// label distributions.
LabelTensor project_labels(const LabelTensor& q1, const StochasticAlignment& al);

SoftTarget project_discrete_tree(const Sentence& s, const StochasticAlignment& al,
                                 const LabelSet& labels);

// One hard-projected arc on the target side (head 0 = ROOT).
struct HardArc {
  int dep = 0;
  int head = 0;
  std::string label;
  bool operator==(const HardArc& o) const {
    return dep == o.dep && head == o.head && label == o.label;
  }
};

// Arcs whose endpoints are both one-to-one aligned (ROOT counts as aligned to
// ROOT); the result is a partial tree, possibly empty.
std::vector<HardArc> hard_project(const Sentence& s, const RawAlignment& a);

struct NormalizedProjection {
  Mat p2;     // (n_t+1) x (n_t+1), rows normalized (zero rows kept zero)
  Vec alpha;  // pre-normalization row mass per target position
};

// The no-dummy alternative: project through row-normalized alignment matrices
// without dummy columns, then normalize each nonzero row separately.
NormalizedProjection project_arcs_normalized(const Mat& p1, const StochasticAlignment& al);

// --- soft-target corpus files ---

struct SoftRecord {
  std::string id;
  std::vector<std::string> forms;
  SoftTarget target;
};

struct SoftCorpus {
  LabelSet labels;
  double threshold = 1e-6;
  std::vector<SoftRecord> records;
};

// Sparse text format: arc cells at or above the write threshold, label cells
// only where arc mass was written, uniform 1/|L| elsewhere (lossy by design).
void write_soft_corpus(std::ostream& out, const SoftCorpus& corpus);
void write_soft_corpus_file(const std::string& path, const SoftCorpus& corpus);
SoftCorpus read_soft_corpus(std::istream& in);
SoftCorpus read_soft_corpus_file(const std::string& path);

}  // namespace subdp

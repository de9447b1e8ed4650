#pragma once

#include <vector>

#include "subdp/biaffine.hpp"
#include "subdp/la.hpp"
#include "subdp/treebank.hpp"

namespace subdp {

struct DecodedTree {
  std::vector<int> heads;   // 0-based head per position 1..n (0 = ROOT)
  std::vector<int> labels;  // label indices per position 1..n
};

// Maximum-weight spanning arborescence rooted at 0. log_p(i, j) is the
// log-score of head j for dependent i; the diagonal and arcs into ROOT are
// never used. Ties break toward the lowest head index. With single_root,
// exactly one dependent of ROOT (decoded once per candidate root).
std::vector<int> mst_decode(const Mat& log_p, bool single_root);

// Exhaustive oracle over all head vectors, n <= 8; same tie-break (first
// maximum in lexicographic enumeration order).
std::vector<int> brute_force_decode(const Mat& log_p, bool single_root);

double tree_weight(const Mat& log_p, const std::vector<int>& heads);

// label[i] = argmax_l q2[l](i, head[i]); ties break toward the lowest index.
std::vector<int> assign_labels(const std::vector<int>& heads, const LabelTensor& q2);

DecodedTree parse_sentence(const ParserModel& m, const Sentence& s, bool single_root);

// Writes a decoded tree back into a copy of the sentence.
Sentence apply_tree(const Sentence& s, const DecodedTree& t, const LabelSet& labels);

}  // namespace subdp

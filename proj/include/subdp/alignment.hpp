#pragma once

#include <set>
#include <string>
#include <utility>
#include <vector>

#include "subdp/la.hpp"

namespace subdp {

// Word alignment links over real words, 1-based on both sides (0 is reserved
// for ROOT internally; the Pharaoh text format is 0-based).
struct RawAlignment {
  int n_src = 0;
  int n_tgt = 0;
  std::set<std::pair<int, int>> links;
};

// The pair of right-stochastic projection matrices. Index 0 on each side is
// ROOT, the last column of each matrix is the dummy null word.
struct StochasticAlignment {
  Mat a_st;  // (n_src+1) x (n_tgt+2)
  Mat a_ts;  // (n_tgt+1) x (n_src+2)
  int n_src = 0;
  int n_tgt = 0;
};

// One Pharaoh line: space-separated "i-j" pairs, 0-based word indices.
RawAlignment parse_pharaoh(const std::string& line, int n_src, int n_tgt);
std::string write_pharaoh_line(const RawAlignment& a);

std::vector<RawAlignment> read_pharaoh_file(const std::string& path,
                                            const std::vector<int>& n_src,
                                            const std::vector<int>& n_tgt);
void write_pharaoh_file(const std::string& path, const std::vector<RawAlignment>& as);

// Appends a column that is 1 exactly where the row sums to 0, else 0.
Mat add_dummy_column(const Mat& m);

// Divides each row by its sum; rows must sum to > 0.
Mat row_normalize(const Mat& m);

// a_st = rownorm(dummy(A')), a_ts = rownorm(dummy(A'^T)), where A' extends the
// link matrix with a ROOT row/column linked ROOT<->ROOT only.
StochasticAlignment build_projection_matrices(const RawAlignment& a);

// Keeps exactly the links whose source and target index each occur once.
RawAlignment filter_one_to_one(const RawAlignment& a);

// Links (i, j) where S(i-1, j-1) is the strict maximum of its row and column.
RawAlignment argmax_align(const Mat& similarity);

}  // namespace subdp

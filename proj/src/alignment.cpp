#include "subdp/alignment.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace subdp {

RawAlignment parse_pharaoh(const std::string& line, int n_src, int n_tgt) {
  RawAlignment a;
  a.n_src = n_src;
  a.n_tgt = n_tgt;
  std::istringstream in(line);
  std::string tok;
  while (in >> tok) {
    const size_t dash = tok.find('-');
    if (dash == std::string::npos || dash == 0 || dash + 1 >= tok.size()) {
      throw std::runtime_error("malformed alignment token '" + tok + "'");
    }
    int i = -1, j = -1;
    try {
      size_t used = 0;
      i = std::stoi(tok.substr(0, dash), &used);
      if (used != dash) throw std::invalid_argument(tok);
      j = std::stoi(tok.substr(dash + 1), &used);
      if (used != tok.size() - dash - 1) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw std::runtime_error("malformed alignment token '" + tok + "'");
    }
    if (i < 0 || i >= n_src || j < 0 || j >= n_tgt) {
      throw std::runtime_error("alignment token '" + tok + "' out of range for lengths " +
                               std::to_string(n_src) + "x" + std::to_string(n_tgt));
    }
    a.links.insert({i + 1, j + 1});
  }
  return a;
}

std::string write_pharaoh_line(const RawAlignment& a) {
  std::string out;
  for (const auto& [i, j] : a.links) {
    if (!out.empty()) out += ' ';
    out += std::to_string(i - 1) + "-" + std::to_string(j - 1);
  }
  return out;
}

std::vector<RawAlignment> read_pharaoh_file(const std::string& path,
                                            const std::vector<int>& n_src,
                                            const std::vector<int>& n_tgt) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<RawAlignment> out;
  std::string line;
  size_t k = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (k >= n_src.size()) {
      throw std::runtime_error(path + ": more alignment lines than sentence pairs");
    }
    try {
      out.push_back(parse_pharaoh(line, n_src[k], n_tgt[k]));
    } catch (const std::exception& e) {
      throw std::runtime_error(path + ": line " + std::to_string(k + 1) + ": " + e.what());
    }
    ++k;
  }
  if (k != n_src.size()) {
    throw std::runtime_error(path + ": " + std::to_string(k) + " alignment lines for " +
                             std::to_string(n_src.size()) + " sentence pairs");
  }
  return out;
}

void write_pharaoh_file(const std::string& path, const std::vector<RawAlignment>& as) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  for (const RawAlignment& a : as) out << write_pharaoh_line(a) << '\n';
  if (!out) throw std::runtime_error("failed writing " + path);
}

Mat add_dummy_column(const Mat& m) {
  Mat out(m.rows(), m.cols() + 1);
  out.leftCols(m.cols()) = m;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    double sum = 0.0;
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (m(i, j) < 0.0) throw std::invalid_argument("add_dummy_column: negative entry");
      sum += m(i, j);
    }
    out(i, m.cols()) = (sum == 0.0) ? 1.0 : 0.0;
  }
  return out;
}

Mat row_normalize(const Mat& m) {
  Mat out(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    const double sum = m.row(i).sum();
    if (!(sum > 0.0)) {
      throw std::runtime_error("row_normalize: row " + std::to_string(i) +
                               " sums to zero; apply add_dummy_column first");
    }
    out.row(i) = m.row(i) / sum;
  }
  return out;
}

StochasticAlignment build_projection_matrices(const RawAlignment& a) {
  // Link matrix over positions 0..n on each side; ROOT is linked ROOT<->ROOT
  // only, so root arcs project with weight 1.
  Mat links = Mat::Zero(a.n_src + 1, a.n_tgt + 1);
  links(0, 0) = 1.0;
  for (const auto& [i, j] : a.links) links(i, j) = 1.0;
  StochasticAlignment out;
  out.n_src = a.n_src;
  out.n_tgt = a.n_tgt;
  out.a_st = row_normalize(add_dummy_column(links));
  out.a_ts = row_normalize(add_dummy_column(links.transpose()));
  return out;
}

RawAlignment filter_one_to_one(const RawAlignment& a) {
  std::map<int, int> src_deg, tgt_deg;
  for (const auto& [i, j] : a.links) {
    ++src_deg[i];
    ++tgt_deg[j];
  }
  RawAlignment out;
  out.n_src = a.n_src;
  out.n_tgt = a.n_tgt;
  for (const auto& [i, j] : a.links) {
    if (src_deg[i] == 1 && tgt_deg[j] == 1) out.links.insert({i, j});
  }
  return out;
}

RawAlignment argmax_align(const Mat& similarity) {
  if (!similarity.allFinite()) throw std::invalid_argument("argmax_align: non-finite similarity");
  RawAlignment out;
  out.n_src = static_cast<int>(similarity.rows());
  out.n_tgt = static_cast<int>(similarity.cols());
  for (Eigen::Index i = 0; i < similarity.rows(); ++i) {
    for (Eigen::Index j = 0; j < similarity.cols(); ++j) {
      const double v = similarity(i, j);
      bool strict = true;
      for (Eigen::Index k = 0; k < similarity.cols() && strict; ++k) {
        if (k != j && similarity(i, k) >= v) strict = false;
      }
      for (Eigen::Index k = 0; k < similarity.rows() && strict; ++k) {
        if (k != i && similarity(k, j) >= v) strict = false;
      }
      if (strict) out.links.insert({static_cast<int>(i) + 1, static_cast<int>(j) + 1});
    }
  }
  return out;
}

}  // namespace subdp

#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "subdp/autodiff.hpp"
#include "subdp/la.hpp"
#include "subdp/treebank.hpp"

namespace subdp {

struct EncoderConfig {
  int vocab_hash_buckets = 65536;
  int embed_dim = 64;
  int hidden_dim = 128;
  int head_dim = 128;
  int dep_dim = 128;
  bool use_recurrent = true;
  uint64_t seed = 1;
};

// Bi-affine parser. The encoder stands in for a pretrained cross-lingual
// feature extractor: hashed character-trigram embeddings are summed per word
// (the hash space is shared across languages), passed through a ReLU layer and
// a bidirectional LSTM, then through separate head/dependent ReLU MLPs.
// Position 0 is a learned ROOT vector. A constant feature column is appended
// before bi-affine scoring, so w_arc is (dep_dim+1) x (head_dim+1).
class ParserModel {
 public:
  EncoderConfig config;
  LabelSet label_set;

  Mat embed_table;             // buckets x embed
  Mat w_feat, b_feat;          // embed -> hidden
  Mat w_lstm_f, b_lstm_f;      // (hidden+hidden) x 4*hidden (empty if no recurrent)
  Mat w_lstm_b, b_lstm_b;
  Mat root_vec;                // 1 x rec_dim
  Mat w_head, b_head;          // rec_dim -> head_dim
  Mat w_dep, b_dep;            // rec_dim -> dep_dim
  Mat w_arc;                   // (dep_dim+1) x (head_dim+1)
  std::vector<Mat> w_label;    // |L| of (dep_dim+1) x (head_dim+1)

  static ParserModel random_init(const EncoderConfig& cfg, const LabelSet& labels);

  int rec_dim() const { return config.use_recurrent ? 2 * config.hidden_dim : config.hidden_dim; }
  std::vector<Mat*> params();
  std::vector<const Mat*> params() const;
  long param_count() const;
  void round_to_float32();  // keeps every parameter exactly representable in the file format
};

// Gradient buffers aligned with ParserModel::params().
struct ModelGrads {
  std::vector<Mat> g;
  explicit ModelGrads(const ParserModel& m);
  void zero();
  void add(const ModelGrads& o);
  double squared_norm() const;
  void scale(double s);
};

std::vector<int> trigram_buckets(const std::string& word, int buckets);
std::vector<std::vector<int>> word_buckets(const std::vector<std::string>& forms, int buckets);

struct ForwardNodes {
  int n = 0;                  // word count (positions 1..n)
  int feats_h = -1;           // node id: (n+1) x head_dim
  int feats_d = -1;           // node id: (n+1) x dep_dim
  int arc_scores = -1;        // node id: (n+1) x (n+1)
  int label_scores = -1;      // node id: (n+1)^2 x |L|, row-major cells
};

// Builds the full differentiable forward pass. grads may be null (inference).
ForwardNodes build_forward(ad::Graph& g, const ParserModel& m, ModelGrads* grads,
                           const std::vector<std::vector<int>>& buckets);

// Head/dependent feature matrices, (n+1) x head_dim and (n+1) x dep_dim.
std::pair<Mat, Mat> encode(const Sentence& s, const ParserModel& m);

// [D 1] W [H 1]^T, or the plain bi-linear form when constant_column is false.
Mat biaffine_scores(const Mat& w, const Mat& d_feats, const Mat& h_feats, bool constant_column);

Mat arc_scores(const Mat& h_feats, const Mat& d_feats, const ParserModel& m);

// Row-wise softmax over candidate heads for rows 1..n; row 0 zeroed. With
// mask_self, diagonal cells are excluded before the softmax.
ArcMatrix arc_probs(const Mat& s_arc, bool mask_self);

LabelTensor label_probs(const Mat& h_feats, const Mat& d_feats, const ParserModel& m);

// Versioned binary model file; tensors are little-endian float32, row-major.
void save_model(const ParserModel& m, const std::string& path);
ParserModel load_model(const std::string& path);

}  // namespace subdp

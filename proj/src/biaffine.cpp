#include "subdp/biaffine.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <random>
#include <stdexcept>

namespace subdp {

namespace {

uint64_t fnv1a(const unsigned char* data, size_t len) {
  uint64_t h = 1469598103934665603ULL;
  for (size_t i = 0; i < len; ++i) {
    h ^= data[i];
    h *= 1099511628211ULL;
  }
  return h;
}

Mat glorot(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols) {
  const double r = std::sqrt(6.0 / static_cast<double>(rows + cols));
  std::uniform_real_distribution<double> dist(-r, r);
  Mat m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) {
      m(i, j) = static_cast<double>(static_cast<float>(dist(rng)));
    }
  }
  return m;
}

void softmax_row_inplace(Eigen::Ref<Eigen::RowVectorXd> row) {
  const double mx = row.maxCoeff();
  row = (row.array() - mx).exp();
  row /= row.sum();
}

}  // namespace

std::vector<int> trigram_buckets(const std::string& word, int buckets) {
  std::string padded = "^" + word + "$";
  std::vector<int> out;
  for (size_t i = 0; i + 3 <= padded.size(); ++i) {
    const uint64_t h = fnv1a(reinterpret_cast<const unsigned char*>(padded.data() + i), 3);
    out.push_back(static_cast<int>(h % static_cast<uint64_t>(buckets)));
  }
  return out;
}

std::vector<std::vector<int>> word_buckets(const std::vector<std::string>& forms, int buckets) {
  std::vector<std::vector<int>> out;
  out.reserve(forms.size());
  for (const std::string& f : forms) out.push_back(trigram_buckets(f, buckets));
  return out;
}

ParserModel ParserModel::random_init(const EncoderConfig& cfg, const LabelSet& labels) {
  if (cfg.vocab_hash_buckets <= 0 || cfg.embed_dim <= 0 || cfg.hidden_dim <= 0 ||
      cfg.head_dim <= 0 || cfg.dep_dim <= 0) {
    throw std::invalid_argument("encoder dimensions must be positive");
  }
  ParserModel m;
  m.config = cfg;
  m.label_set = labels;
  std::mt19937_64 rng(cfg.seed);
  const int hid = cfg.hidden_dim;
  m.embed_table = glorot(rng, cfg.vocab_hash_buckets, cfg.embed_dim);
  m.w_feat = glorot(rng, cfg.embed_dim, hid);
  m.b_feat = Mat::Zero(1, hid);
  if (cfg.use_recurrent) {
    m.w_lstm_f = glorot(rng, 2 * hid, 4 * hid);
    m.b_lstm_f = Mat::Zero(1, 4 * hid);
    m.w_lstm_b = glorot(rng, 2 * hid, 4 * hid);
    m.b_lstm_b = Mat::Zero(1, 4 * hid);
  } else {
    m.w_lstm_f = m.b_lstm_f = m.w_lstm_b = m.b_lstm_b = Mat(0, 0);
  }
  const int rec = m.rec_dim();
  m.root_vec = glorot(rng, 1, rec);
  m.w_head = glorot(rng, rec, cfg.head_dim);
  m.b_head = Mat::Zero(1, cfg.head_dim);
  m.w_dep = glorot(rng, rec, cfg.dep_dim);
  m.b_dep = Mat::Zero(1, cfg.dep_dim);
  m.w_arc = glorot(rng, cfg.dep_dim + 1, cfg.head_dim + 1);
  for (int l = 0; l < labels.size(); ++l) {
    m.w_label.push_back(glorot(rng, cfg.dep_dim + 1, cfg.head_dim + 1));
  }
  return m;
}

std::vector<Mat*> ParserModel::params() {
  std::vector<Mat*> p = {&embed_table, &w_feat, &b_feat, &w_lstm_f, &b_lstm_f,
                         &w_lstm_b,    &b_lstm_b, &root_vec, &w_head, &b_head,
                         &w_dep,       &b_dep,  &w_arc};
  for (Mat& w : w_label) p.push_back(&w);
  return p;
}

std::vector<const Mat*> ParserModel::params() const {
  std::vector<const Mat*> p = {&embed_table, &w_feat, &b_feat, &w_lstm_f, &b_lstm_f,
                               &w_lstm_b,    &b_lstm_b, &root_vec, &w_head, &b_head,
                               &w_dep,       &b_dep,  &w_arc};
  for (const Mat& w : w_label) p.push_back(&w);
  return p;
}

long ParserModel::param_count() const {
  long n = 0;
  for (const Mat* p : params()) n += static_cast<long>(p->size());
  return n;
}

void ParserModel::round_to_float32() {
  for (Mat* p : params()) {
    *p = p->unaryExpr([](double v) { return static_cast<double>(static_cast<float>(v)); });
  }
}

ModelGrads::ModelGrads(const ParserModel& m) {
  for (const Mat* p : m.params()) g.push_back(Mat::Zero(p->rows(), p->cols()));
}

void ModelGrads::zero() {
  for (Mat& m : g) m.setZero();
}

void ModelGrads::add(const ModelGrads& o) {
  for (size_t i = 0; i < g.size(); ++i) g[i] += o.g[i];
}

double ModelGrads::squared_norm() const {
  double s = 0.0;
  for (const Mat& m : g) s += m.squaredNorm();
  return s;
}

void ModelGrads::scale(double s) {
  for (Mat& m : g) m *= s;
}

namespace {

enum ParamIdx {
  kEmbed = 0, kWFeat, kBFeat, kWLstmF, kBLstmF, kWLstmB, kBLstmB,
  kRoot, kWHead, kBHead, kWDep, kBDep, kWArc, kWLabel0
};

Mat* gptr(ModelGrads* grads, int idx) {
  return grads ? &grads->g[static_cast<size_t>(idx)] : nullptr;
}

// One LSTM direction over the rows of `feat`; returns per-row output nodes in
// row order.
std::vector<int> lstm_direction(ad::Graph& g, const ParserModel& m, ModelGrads* grads,
                                int feat, int n, bool backward_dir) {
  const int hid = m.config.hidden_dim;
  const Mat* w = backward_dir ? &m.w_lstm_b : &m.w_lstm_f;
  const Mat* b = backward_dir ? &m.b_lstm_b : &m.b_lstm_f;
  Mat* gw = gptr(grads, backward_dir ? kWLstmB : kWLstmF);
  Mat* gb = gptr(grads, backward_dir ? kBLstmB : kBLstmF);

  std::vector<int> rows(static_cast<size_t>(n), -1);
  int h_prev = g.input(Mat::Zero(1, hid));
  int c_prev = g.input(Mat::Zero(1, hid));
  for (int step = 0; step < n; ++step) {
    const int t = backward_dir ? n - 1 - step : step;
    const int x = g.slice_rows(feat, t, 1);
    const int z = g.concat_cols(x, h_prev);
    const int gates = g.param_add_rowvec(g.param_matmul(z, w, gw), b, gb);
    const int in_g = g.sigmoid_op(g.slice_cols(gates, 0, hid));
    const int fg_g = g.sigmoid_op(g.slice_cols(gates, hid, hid));
    const int out_g = g.sigmoid_op(g.slice_cols(gates, 2 * hid, hid));
    const int upd = g.tanh_op(g.slice_cols(gates, 3 * hid, hid));
    const int c = g.add(g.cmul(fg_g, c_prev), g.cmul(in_g, upd));
    const int h = g.cmul(out_g, g.tanh_op(c));
    rows[static_cast<size_t>(t)] = h;
    h_prev = h;
    c_prev = c;
  }
  return rows;
}

}  // namespace

ForwardNodes build_forward(ad::Graph& g, const ParserModel& m, ModelGrads* grads,
                           const std::vector<std::vector<int>>& buckets) {
  const int n = static_cast<int>(buckets.size());
  if (n == 0) throw std::invalid_argument("build_forward: empty sentence");

  const int emb = g.embed_rows_sum(&m.embed_table, gptr(grads, kEmbed), buckets);
  const int feat = g.relu(g.param_add_rowvec(
      g.param_matmul(emb, &m.w_feat, gptr(grads, kWFeat)), &m.b_feat, gptr(grads, kBFeat)));

  int seq;
  if (m.config.use_recurrent) {
    const std::vector<int> fwd = lstm_direction(g, m, grads, feat, n, false);
    const std::vector<int> bwd = lstm_direction(g, m, grads, feat, n, true);
    seq = g.concat_cols(g.concat_rows(fwd), g.concat_rows(bwd));
  } else {
    seq = feat;
  }

  const int root = g.param(&m.root_vec, gptr(grads, kRoot));
  const int all = g.concat_rows({root, seq});  // (n+1) x rec_dim

  const int feats_h = g.relu(g.param_add_rowvec(
      g.param_matmul(all, &m.w_head, gptr(grads, kWHead)), &m.b_head, gptr(grads, kBHead)));
  const int feats_d = g.relu(g.param_add_rowvec(
      g.param_matmul(all, &m.w_dep, gptr(grads, kWDep)), &m.b_dep, gptr(grads, kBDep)));

  const int ones = g.input(Mat::Ones(n + 1, 1));
  const int hn = g.concat_cols(feats_h, ones);
  const int dn = g.concat_cols(feats_d, ones);
  const int hn_t = g.transpose(hn);

  ForwardNodes out;
  out.n = n;
  out.feats_h = feats_h;
  out.feats_d = feats_d;
  out.arc_scores = g.matmul(g.param_matmul(dn, &m.w_arc, gptr(grads, kWArc)), hn_t);

  std::vector<int> label_mats;
  for (size_t l = 0; l < m.w_label.size(); ++l) {
    label_mats.push_back(g.matmul(
        g.param_matmul(dn, &m.w_label[l], gptr(grads, kWLabel0 + static_cast<int>(l))), hn_t));
  }
  out.label_scores = g.stack_vec_cols(label_mats);
  return out;
}

std::pair<Mat, Mat> encode(const Sentence& s, const ParserModel& m) {
  std::vector<std::string> forms;
  for (const Token& t : s.tokens) forms.push_back(t.form);
  ad::Graph g(false);
  const ForwardNodes fw =
      build_forward(g, m, nullptr, word_buckets(forms, m.config.vocab_hash_buckets));
  return {g.value(fw.feats_h), g.value(fw.feats_d)};
}

Mat biaffine_scores(const Mat& w, const Mat& d_feats, const Mat& h_feats, bool constant_column) {
  Mat d = d_feats;
  Mat h = h_feats;
  if (constant_column) {
    d.conservativeResize(d.rows(), d.cols() + 1);
    d.col(d.cols() - 1).setOnes();
    h.conservativeResize(h.rows(), h.cols() + 1);
    h.col(h.cols() - 1).setOnes();
  }
  if (d.cols() != w.rows() || h.cols() != w.cols()) {
    throw std::invalid_argument("biaffine_scores: shape mismatch");
  }
  return d * w * h.transpose();
}

Mat arc_scores(const Mat& h_feats, const Mat& d_feats, const ParserModel& m) {
  return biaffine_scores(m.w_arc, d_feats, h_feats, true);
}

ArcMatrix arc_probs(const Mat& s_arc, bool mask_self) {
  if (!s_arc.allFinite()) throw std::invalid_argument("arc_probs: non-finite scores");
  const Eigen::Index n1 = s_arc.rows();
  Mat p = Mat::Zero(n1, n1);
  for (Eigen::Index i = 1; i < n1; ++i) {
    double mx = -std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < n1; ++j) {
      if (mask_self && j == i) continue;
      mx = std::max(mx, s_arc(i, j));
    }
    double z = 0.0;
    for (Eigen::Index j = 0; j < n1; ++j) {
      if (mask_self && j == i) continue;
      p(i, j) = std::exp(s_arc(i, j) - mx);
      z += p(i, j);
    }
    p.row(i) /= z;
    if (mask_self) p(i, i) = 0.0;
  }
  return p;
}

LabelTensor label_probs(const Mat& h_feats, const Mat& d_feats, const ParserModel& m) {
  LabelTensor q;
  for (const Mat& w : m.w_label) q.push_back(biaffine_scores(w, d_feats, h_feats, true));
  const Eigen::Index n1 = d_feats.rows();
  Eigen::RowVectorXd cell(static_cast<Eigen::Index>(q.size()));
  for (Eigen::Index i = 0; i < n1; ++i) {
    for (Eigen::Index j = 0; j < n1; ++j) {
      for (size_t l = 0; l < q.size(); ++l) cell(static_cast<Eigen::Index>(l)) = q[l](i, j);
      softmax_row_inplace(cell);
      for (size_t l = 0; l < q.size(); ++l) q[l](i, j) = cell(static_cast<Eigen::Index>(l));
    }
  }
  return q;
}

// --- serialization ---

namespace {

constexpr char kMagic[4] = {'S', 'D', 'P', 'M'};
constexpr uint32_t kVersion = 1;

void put_u32(std::ostream& out, uint32_t v) {
  unsigned char b[4] = {static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
                        static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
  out.write(reinterpret_cast<const char*>(b), 4);
}

void put_u64(std::ostream& out, uint64_t v) {
  put_u32(out, static_cast<uint32_t>(v));
  put_u32(out, static_cast<uint32_t>(v >> 32));
}

uint32_t get_u32(std::istream& in) {
  unsigned char b[4];
  if (!in.read(reinterpret_cast<char*>(b), 4)) throw std::runtime_error("truncated model file");
  return static_cast<uint32_t>(b[0]) | (static_cast<uint32_t>(b[1]) << 8) |
         (static_cast<uint32_t>(b[2]) << 16) | (static_cast<uint32_t>(b[3]) << 24);
}

uint64_t get_u64(std::istream& in) {
  const uint64_t lo = get_u32(in);
  const uint64_t hi = get_u32(in);
  return lo | (hi << 32);
}

void put_tensor(std::ostream& out, const Mat& m) {
  put_u32(out, static_cast<uint32_t>(m.rows()));
  put_u32(out, static_cast<uint32_t>(m.cols()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      const float f = static_cast<float>(m(i, j));
      uint32_t u;
      std::memcpy(&u, &f, 4);
      put_u32(out, u);
    }
  }
}

Mat get_tensor(std::istream& in) {
  const uint32_t rows = get_u32(in);
  const uint32_t cols = get_u32(in);
  if (rows > (1u << 24) || cols > (1u << 24)) throw std::runtime_error("corrupt model file");
  Mat m(rows, cols);
  for (uint32_t i = 0; i < rows; ++i) {
    for (uint32_t j = 0; j < cols; ++j) {
      const uint32_t u = get_u32(in);
      float f;
      std::memcpy(&f, &u, 4);
      m(i, j) = static_cast<double>(f);
    }
  }
  return m;
}

void check_shape(const Mat& m, Eigen::Index rows, Eigen::Index cols, const char* name) {
  if (m.rows() != rows || m.cols() != cols) {
    throw std::runtime_error(std::string("model file dimension mismatch for ") + name);
  }
}

}  // namespace

void save_model(const ParserModel& m, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out.write(kMagic, 4);
  put_u32(out, kVersion);
  put_u32(out, static_cast<uint32_t>(m.config.vocab_hash_buckets));
  put_u32(out, static_cast<uint32_t>(m.config.embed_dim));
  put_u32(out, static_cast<uint32_t>(m.config.hidden_dim));
  put_u32(out, static_cast<uint32_t>(m.config.head_dim));
  put_u32(out, static_cast<uint32_t>(m.config.dep_dim));
  put_u32(out, m.config.use_recurrent ? 1 : 0);
  put_u64(out, m.config.seed);
  put_u32(out, static_cast<uint32_t>(m.label_set.size()));
  for (const std::string& l : m.label_set.labels()) {
    put_u32(out, static_cast<uint32_t>(l.size()));
    out.write(l.data(), static_cast<std::streamsize>(l.size()));
  }
  for (const Mat* p : m.params()) put_tensor(out, *p);
  if (!out) throw std::runtime_error("failed writing " + path);
}

ParserModel load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0) {
    throw std::runtime_error(path + ": not a parser model file (bad magic)");
  }
  const uint32_t version = get_u32(in);
  if (version != kVersion) {
    throw std::runtime_error(path + ": unsupported model format version " + std::to_string(version));
  }
  ParserModel m;
  m.config.vocab_hash_buckets = static_cast<int>(get_u32(in));
  m.config.embed_dim = static_cast<int>(get_u32(in));
  m.config.hidden_dim = static_cast<int>(get_u32(in));
  m.config.head_dim = static_cast<int>(get_u32(in));
  m.config.dep_dim = static_cast<int>(get_u32(in));
  m.config.use_recurrent = get_u32(in) != 0;
  m.config.seed = get_u64(in);
  const uint32_t n_labels = get_u32(in);
  if (n_labels > (1u << 20)) throw std::runtime_error(path + ": corrupt model file");
  std::vector<std::string> labels;
  for (uint32_t i = 0; i < n_labels; ++i) {
    const uint32_t len = get_u32(in);
    if (len > (1u << 20)) throw std::runtime_error(path + ": corrupt model file");
    std::string l(len, '\0');
    if (!in.read(l.data(), len)) throw std::runtime_error("truncated model file");
    labels.push_back(std::move(l));
  }
  m.label_set = LabelSet(labels);
  if (m.label_set.size() != static_cast<int>(n_labels)) {
    throw std::runtime_error(path + ": duplicate labels in model file");
  }

  m.embed_table = get_tensor(in);
  m.w_feat = get_tensor(in);
  m.b_feat = get_tensor(in);
  m.w_lstm_f = get_tensor(in);
  m.b_lstm_f = get_tensor(in);
  m.w_lstm_b = get_tensor(in);
  m.b_lstm_b = get_tensor(in);
  m.root_vec = get_tensor(in);
  m.w_head = get_tensor(in);
  m.b_head = get_tensor(in);
  m.w_dep = get_tensor(in);
  m.b_dep = get_tensor(in);
  m.w_arc = get_tensor(in);
  for (uint32_t l = 0; l < n_labels; ++l) m.w_label.push_back(get_tensor(in));

  char extra;
  if (in.read(&extra, 1)) throw std::runtime_error(path + ": trailing bytes in model file");

  const EncoderConfig& c = m.config;
  const int hid = c.hidden_dim;
  check_shape(m.embed_table, c.vocab_hash_buckets, c.embed_dim, "embed_table");
  check_shape(m.w_feat, c.embed_dim, hid, "w_feat");
  check_shape(m.b_feat, 1, hid, "b_feat");
  if (c.use_recurrent) {
    check_shape(m.w_lstm_f, 2 * hid, 4 * hid, "w_lstm_f");
    check_shape(m.b_lstm_f, 1, 4 * hid, "b_lstm_f");
    check_shape(m.w_lstm_b, 2 * hid, 4 * hid, "w_lstm_b");
    check_shape(m.b_lstm_b, 1, 4 * hid, "b_lstm_b");
  }
  check_shape(m.root_vec, 1, m.rec_dim(), "root_vec");
  check_shape(m.w_head, m.rec_dim(), c.head_dim, "w_head");
  check_shape(m.b_head, 1, c.head_dim, "b_head");
  check_shape(m.w_dep, m.rec_dim(), c.dep_dim, "w_dep");
  check_shape(m.b_dep, 1, c.dep_dim, "b_dep");
  check_shape(m.w_arc, c.dep_dim + 1, c.head_dim + 1, "w_arc");
  for (const Mat& w : m.w_label) check_shape(w, c.dep_dim + 1, c.head_dim + 1, "w_label");
  return m;
}

}  // namespace subdp

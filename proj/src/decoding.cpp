#include "subdp/decoding.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace subdp {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Greedy-best-incoming plus cycle contraction; w[d][h] is the weight of arc
// h -> d over nodes 0..m-1 with 0 the root. Returns the head of each node
// (head[0] = -1). Every argmax prefers the lowest index on ties.
std::vector<int> chu_liu_edmonds(const std::vector<std::vector<double>>& w) {
  const int m = static_cast<int>(w.size());
  std::vector<int> par(m, -1);
  for (int d = 1; d < m; ++d) {
    int best = -1;
    for (int h = 0; h < m; ++h) {
      if (h == d) continue;
      if (best < 0 || w[d][h] > w[d][best]) best = h;
    }
    par[d] = best;
  }

  // Find one cycle among the greedy edges, if any.
  std::vector<int> cycle;
  std::vector<int> color(m, 0);  // 0 new, 1 on current walk, 2 done
  color[0] = 2;
  for (int s = 1; s < m && cycle.empty(); ++s) {
    if (color[s] != 0) continue;
    std::vector<int> walk;
    int v = s;
    while (v > 0 && color[v] == 0) {
      color[v] = 1;
      walk.push_back(v);
      v = par[v];
    }
    if (v > 0 && color[v] == 1) {
      auto it = std::find(walk.begin(), walk.end(), v);
      cycle.assign(it, walk.end());
    }
    for (int u : walk) color[u] = 2;
  }
  if (cycle.empty()) return par;

  std::vector<char> in_cycle(m, 0);
  for (int v : cycle) in_cycle[v] = 1;

  // Contract: non-cycle nodes keep their relative order, the cycle becomes
  // node `cnode`.
  std::vector<int> nid(m, -1), old_of(m, -1);
  int k = 0;
  for (int v = 0; v < m; ++v) {
    if (!in_cycle[v]) {
      nid[v] = k;
      old_of[k] = v;
      ++k;
    }
  }
  const int cnode = k;
  const int m2 = k + 1;

  std::vector<std::vector<double>> w2(m2, std::vector<double>(m2, kNegInf));
  std::vector<int> enter_dep(m2, -1);   // per outside head: cycle node whose edge is replaced
  std::vector<int> leave_head(m2, -1);  // per outside dependent: cycle node acting as head

  for (int v = 0; v < m; ++v) {
    if (in_cycle[v]) continue;
    const int nv = nid[v];
    // Outside-to-outside arcs copy over; v as dependent of cycle nodes takes
    // the best cycle head.
    if (v != 0) {
      for (int h = 0; h < m; ++h) {
        if (h == v) continue;
        if (!in_cycle[h]) {
          w2[nv][nid[h]] = w[v][h];
        } else if (w[v][h] > w2[nv][cnode]) {
          w2[nv][cnode] = w[v][h];
          leave_head[nv] = h;
        }
      }
    }
    // v as a head entering the cycle: breaking d's cycle edge costs its greedy
    // weight, so the entering score is w[d][v] - w[d][par[d]].
    for (int d : cycle) {
      const double score = w[d][v] - w[d][par[d]];
      if (score > w2[cnode][nv]) {
        w2[cnode][nv] = score;
        enter_dep[nv] = d;
      }
    }
  }

  const std::vector<int> par2 = chu_liu_edmonds(w2);

  std::vector<int> out(m, -1);
  for (int v = 0; v < m; ++v) {
    if (v == 0 || in_cycle[v]) continue;
    const int p2 = par2[nid[v]];
    out[v] = (p2 == cnode) ? leave_head[nid[v]] : old_of[p2];
  }
  const int enter_h = par2[cnode];
  const int broken = enter_dep[enter_h];
  for (int v : cycle) out[v] = (v == broken) ? old_of[enter_h] : par[v];
  return out;
}

std::vector<std::vector<double>> weights_from(const Mat& log_p) {
  const int m = static_cast<int>(log_p.rows());
  std::vector<std::vector<double>> w(static_cast<size_t>(m),
                                     std::vector<double>(static_cast<size_t>(m), kNegInf));
  for (int d = 1; d < m; ++d) {
    for (int h = 0; h < m; ++h) {
      if (h == d) continue;
      w[static_cast<size_t>(d)][static_cast<size_t>(h)] = log_p(d, h);
    }
  }
  return w;
}

bool is_arborescence(const std::vector<int>& heads, int n, bool single_root) {
  int roots = 0;
  for (int i = 1; i <= n; ++i) {
    if (heads[static_cast<size_t>(i) - 1] == 0) ++roots;
  }
  if (single_root && roots != 1) return false;
  for (int i = 1; i <= n; ++i) {
    int v = i, steps = 0;
    while (v != 0) {
      v = heads[static_cast<size_t>(v) - 1];
      if (++steps > n) return false;
    }
  }
  return true;
}

}  // namespace

double tree_weight(const Mat& log_p, const std::vector<int>& heads) {
  double w = 0.0;
  for (size_t i = 0; i < heads.size(); ++i) {
    w += log_p(static_cast<Eigen::Index>(i) + 1, heads[i]);
  }
  return w;
}

std::vector<int> mst_decode(const Mat& log_p, bool single_root) {
  const int n = static_cast<int>(log_p.rows()) - 1;
  if (n < 1) throw std::invalid_argument("mst_decode: empty sentence");
  if (log_p.rows() != log_p.cols()) throw std::invalid_argument("mst_decode: matrix not square");

  auto heads_of = [&](const std::vector<std::vector<double>>& w) {
    const std::vector<int> par = chu_liu_edmonds(w);
    return std::vector<int>(par.begin() + 1, par.end());
  };

  if (!single_root) return heads_of(weights_from(log_p));

  std::vector<int> best;
  double best_w = kNegInf;
  for (int r = 1; r <= n; ++r) {
    std::vector<std::vector<double>> w = weights_from(log_p);
    for (int d = 1; d <= n; ++d) {
      if (d != r) w[static_cast<size_t>(d)][0] = kNegInf;
    }
    for (int h = 1; h <= n; ++h) w[static_cast<size_t>(r)][static_cast<size_t>(h)] = kNegInf;
    const std::vector<int> heads = heads_of(w);
    const double tw = tree_weight(log_p, heads);
    if (best.empty() || tw > best_w) {
      best = heads;
      best_w = tw;
    }
  }
  return best;
}

std::vector<int> brute_force_decode(const Mat& log_p, bool single_root) {
  const int n = static_cast<int>(log_p.rows()) - 1;
  if (n < 1) throw std::invalid_argument("brute_force_decode: empty sentence");
  if (n > 8) throw std::invalid_argument("brute_force_decode: sentence too long (n > 8)");

  std::vector<int> heads(static_cast<size_t>(n), 0);
  std::vector<int> best;
  double best_w = kNegInf;
  // Odometer in lexicographic order; the first maximum found is the
  // lexicographically smallest maximal tree.
  while (true) {
    bool self_arc = false;
    for (int i = 1; i <= n; ++i) {
      if (heads[static_cast<size_t>(i) - 1] == i) self_arc = true;
    }
    if (!self_arc && is_arborescence(heads, n, single_root)) {
      const double w = tree_weight(log_p, heads);
      if (best.empty() || w > best_w) {
        best = heads;
        best_w = w;
      }
    }
    int pos = n - 1;
    while (pos >= 0 && heads[static_cast<size_t>(pos)] == n) {
      heads[static_cast<size_t>(pos)] = 0;
      --pos;
    }
    if (pos < 0) break;
    ++heads[static_cast<size_t>(pos)];
  }
  return best;
}

std::vector<int> assign_labels(const std::vector<int>& heads, const LabelTensor& q2) {
  std::vector<int> labels(heads.size(), 0);
  for (size_t i = 0; i < heads.size(); ++i) {
    const Eigen::Index d = static_cast<Eigen::Index>(i) + 1;
    int best = 0;
    for (size_t l = 1; l < q2.size(); ++l) {
      if (q2[l](d, heads[i]) > q2[static_cast<size_t>(best)](d, heads[i])) {
        best = static_cast<int>(l);
      }
    }
    labels[i] = best;
  }
  return labels;
}

DecodedTree parse_sentence(const ParserModel& m, const Sentence& s, bool single_root) {
  const auto [h, d] = encode(s, m);
  const Mat probs = arc_probs(arc_scores(h, d, m), /*mask_self=*/true);
  const Mat log_p = probs.array().log().matrix();
  DecodedTree t;
  t.heads = mst_decode(log_p, single_root);
  t.labels = assign_labels(t.heads, label_probs(h, d, m));
  return t;
}

Sentence apply_tree(const Sentence& s, const DecodedTree& t, const LabelSet& labels) {
  Sentence out = s;
  for (int i = 1; i <= out.size(); ++i) {
    out.token(i).head = t.heads[static_cast<size_t>(i) - 1];
    out.token(i).deprel = labels.label(t.labels[static_cast<size_t>(i) - 1]);
  }
  return out;
}

}  // namespace subdp

#include "subdp/training.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <random>
#include <stdexcept>
#include <thread>

#include "subdp/decoding.hpp"

namespace subdp {

namespace {

std::vector<std::string> sentence_forms(const Sentence& s) {
  std::vector<std::string> forms;
  forms.reserve(static_cast<size_t>(s.size()));
  for (const Token& t : s.tokens) forms.push_back(t.form);
  return forms;
}

double clamped_log(double v, double floor) {
  return std::log(std::max(v, floor));
}

}  // namespace

TrainInstance make_supervised_instance(const Sentence& s, const LabelSet& labels) {
  const int n = s.size();
  const int L = labels.size();
  TrainInstance inst;
  inst.id = s.id;
  inst.forms = sentence_forms(s);
  inst.arc_target = gold_arc_matrix(s);
  inst.label_target = Mat::Zero((n + 1) * (n + 1), L);
  for (int i = 1; i <= n; ++i) {
    const Token& t = s.token(i);
    inst.label_target(i * (n + 1) + t.head, labels.index(t.deprel)) = 1.0;
    inst.ref_heads.push_back(t.head);
    inst.ref_labels.push_back(labels.index(t.deprel));
    inst.ref_upos.push_back(t.upos);
  }
  return inst;
}

TrainInstance make_partial_instance(const Sentence& s, const LabelSet& labels) {
  const int n = s.size();
  const int L = labels.size();
  TrainInstance inst;
  inst.id = s.id;
  inst.forms = sentence_forms(s);
  inst.arc_target = Mat::Zero(n + 1, n + 1);
  inst.label_target = Mat::Zero((n + 1) * (n + 1), L);
  for (int i = 1; i <= n; ++i) {
    const Token& t = s.token(i);
    inst.ref_upos.push_back(t.upos);
    if (t.head < 0) {
      inst.ref_heads.push_back(-1);
      inst.ref_labels.push_back(-1);
      continue;
    }
    if (!labels.contains(t.deprel)) {
      throw std::runtime_error("label-set mismatch: '" + t.deprel + "' not in the model label set");
    }
    inst.arc_target(i, t.head) = 1.0;
    inst.label_target(i * (n + 1) + t.head, labels.index(t.deprel)) = 1.0;
    inst.ref_heads.push_back(t.head);
    inst.ref_labels.push_back(labels.index(t.deprel));
  }
  return inst;
}

TrainInstance make_soft_instance(const std::vector<std::string>& forms, const SoftTarget& t) {
  const int n = t.n_tgt();
  if (static_cast<int>(forms.size()) != n) {
    throw std::invalid_argument("make_soft_instance: form count does not match target size");
  }
  const int L = static_cast<int>(t.labels.size());
  TrainInstance inst;
  inst.id = t.target_sentence_id;
  inst.forms = forms;
  inst.arc_target = t.arcs.leftCols(n + 1);
  inst.label_target = Mat::Zero((n + 1) * (n + 1), L);
  for (int p = 0; p <= n; ++p) {
    for (int q = 0; q <= n; ++q) {
      for (int l = 0; l < L; ++l) {
        inst.label_target(p * (n + 1) + q, l) = t.labels[static_cast<size_t>(l)](p, q);
      }
    }
  }
  return inst;
}

double partial_arc_ce(const ArcMatrix& p2, const SoftTarget& target, double floor) {
  const int n = target.n_tgt();
  if (p2.rows() != n + 1 || p2.cols() != n + 1) {
    throw std::invalid_argument("partial_arc_ce: shape mismatch");
  }
  double loss = 0.0;
  for (int p = 1; p <= n; ++p) {
    for (int q = 0; q <= n; ++q) {  // dummy column excluded
      const double t = target.arcs(p, q);
      if (t > 0.0) loss -= t * clamped_log(p2(p, q), floor);
    }
  }
  return loss;
}

double partial_label_ce(const LabelTensor& q2, const SoftTarget& target, double floor) {
  const int n = target.n_tgt();
  if (q2.size() != target.labels.size()) {
    throw std::invalid_argument("partial_label_ce: label count mismatch");
  }
  double loss = 0.0;
  for (int p = 0; p <= n; ++p) {
    for (int q = 0; q <= n; ++q) {
      for (size_t l = 0; l < q2.size(); ++l) {
        const double t = target.labels[l](p, q);
        if (t > 0.0) loss -= t * clamped_log(q2[l](p, q), floor);
      }
    }
  }
  return loss;
}

double total_loss(const ParserModel& m,
                  const std::vector<std::pair<Sentence, SoftTarget>>& batch) {
  double loss = 0.0;
  for (const auto& [sentence, target] : batch) {
    const auto [h, d] = encode(sentence, m);
    loss += partial_arc_ce(arc_probs(arc_scores(h, d, m), /*mask_self=*/false), target);
    loss += partial_label_ce(label_probs(h, d, m), target);
  }
  return loss;
}

double supervised_loss(const ParserModel& m, const std::vector<Sentence>& batch) {
  double loss = 0.0;
  for (const Sentence& s : batch) {
    const auto [h, d] = encode(s, m);
    const Mat p2 = arc_probs(arc_scores(h, d, m), /*mask_self=*/false);
    const LabelTensor q2 = label_probs(h, d, m);
    for (int i = 1; i <= s.size(); ++i) {
      const Token& t = s.token(i);
      loss -= clamped_log(p2(i, t.head), 1e-12);
      loss -= clamped_log(q2[static_cast<size_t>(m.label_set.index(t.deprel))](i, t.head), 1e-12);
    }
  }
  return loss;
}

namespace {

double instance_loss_traced(const ParserModel& m, const TrainInstance& inst, ModelGrads* grads,
                            std::vector<unsigned char>* relu_trace) {
  ad::Graph g(grads != nullptr);
  g.set_relu_trace(relu_trace);
  const ForwardNodes fw =
      build_forward(g, m, grads, word_buckets(inst.forms, m.config.vocab_hash_buckets));
  const int arc_loss = g.neg_dot(g.log_softmax_rows(fw.arc_scores), inst.arc_target);
  const int lab_loss = g.neg_dot(g.log_softmax_rows(fw.label_scores), inst.label_target);
  const int loss = g.add(arc_loss, lab_loss);
  if (grads != nullptr) g.backward(loss);
  return g.scalar(loss);
}

}  // namespace

double instance_loss(const ParserModel& m, const TrainInstance& inst, ModelGrads* grads) {
  return instance_loss_traced(m, inst, grads, nullptr);
}

namespace {

double dev_metric(const ParserModel& m, const std::vector<TrainInstance>& dev,
                  EarlyStopMetric metric) {
  if (metric == EarlyStopMetric::kDevLoss) {
    double loss = 0.0;
    for (const TrainInstance& inst : dev) loss += instance_loss(m, inst, nullptr);
    return loss;
  }
  // Dev LAS against the reference (possibly partial) trees, punctuation
  // excluded the same way evaluate() does it.
  long counted = 0, correct = 0;
  for (const TrainInstance& inst : dev) {
    Sentence s;
    for (size_t i = 0; i < inst.forms.size(); ++i) {
      Token t;
      t.index = static_cast<int>(i) + 1;
      t.form = inst.forms[i];
      s.tokens.push_back(std::move(t));
    }
    const DecodedTree tree = parse_sentence(m, s, /*single_root=*/true);
    for (size_t i = 0; i < inst.forms.size(); ++i) {
      if (inst.ref_heads.empty() || inst.ref_heads[i] < 0) continue;
      if (i < inst.ref_upos.size() && inst.ref_upos[i] == "PUNCT") continue;
      ++counted;
      if (tree.heads[i] == inst.ref_heads[i] && tree.labels[i] == inst.ref_labels[i]) ++correct;
    }
  }
  return counted == 0 ? 0.0 : 100.0 * static_cast<double>(correct) / static_cast<double>(counted);
}

// Accumulates loss and gradients for data[first..last) into per-thread
// buffers; reduction happens in thread order so results do not depend on
// scheduling.
void accumulate_range(const ParserModel& m, const std::vector<TrainInstance>& data,
                      const std::vector<size_t>& order, size_t first, size_t last,
                      ModelGrads* grads, double* loss) {
  for (size_t k = first; k < last; ++k) {
    *loss += instance_loss(m, data[order[k]], grads);
  }
}

}  // namespace

ParserModel train(const TrainConfig& cfg, ParserModel model,
                  const std::vector<TrainInstance>& data,
                  const std::vector<TrainInstance>& dev) {
  if (data.empty()) throw std::invalid_argument("train: empty training data");
  if (cfg.learning_rate <= 0.0) throw std::invalid_argument("train: learning_rate must be > 0");
  if (cfg.epochs < 1) throw std::invalid_argument("train: epochs must be >= 1");
  const int threads = std::max(1, cfg.n_threads);

  std::mt19937_64 rng(cfg.seed);
  std::vector<size_t> order(data.size());
  std::iota(order.begin(), order.end(), 0);

  std::vector<ModelGrads> grads(static_cast<size_t>(threads), ModelGrads(model));
  ParserModel best = model;
  double best_metric = 0.0;
  bool have_best = false;
  const bool lower_better = cfg.early_stop == EarlyStopMetric::kDevLoss;

  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double epoch_loss = 0.0;
    const size_t bs = cfg.batch_size < 1 ? data.size() : static_cast<size_t>(cfg.batch_size);
    for (size_t start = 0; start < data.size(); start += bs) {
      const size_t end = std::min(data.size(), start + bs);
      for (ModelGrads& g : grads) g.zero();
      double batch_loss = 0.0;
      if (threads == 1 || end - start == 1) {
        accumulate_range(model, data, order, start, end, &grads[0], &batch_loss);
      } else {
        const size_t count = end - start;
        const size_t chunk = (count + static_cast<size_t>(threads) - 1) / static_cast<size_t>(threads);
        std::vector<double> losses(static_cast<size_t>(threads), 0.0);
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t) {
          const size_t lo = start + std::min(count, static_cast<size_t>(t) * chunk);
          const size_t hi = start + std::min(count, static_cast<size_t>(t + 1) * chunk);
          if (lo >= hi) break;
          pool.emplace_back(accumulate_range, std::cref(model), std::cref(data),
                            std::cref(order), lo, hi, &grads[static_cast<size_t>(t)],
                            &losses[static_cast<size_t>(t)]);
        }
        for (std::thread& th : pool) th.join();
        for (int t = 1; t < threads; ++t) grads[0].add(grads[static_cast<size_t>(t)]);
        for (double l : losses) batch_loss += l;
      }
      if (!std::isfinite(batch_loss)) {
        throw std::runtime_error("training diverged: non-finite loss at epoch " +
                                 std::to_string(epoch));
      }
      epoch_loss += batch_loss;

      const double norm = std::sqrt(grads[0].squared_norm());
      if (cfg.gradient_clip > 0.0 && norm > cfg.gradient_clip) {
        grads[0].scale(cfg.gradient_clip / norm);
      }
      std::vector<Mat*> params = model.params();
      for (size_t p = 0; p < params.size(); ++p) {
        if (params[p]->size() == 0) continue;
        *params[p] -= cfg.learning_rate * grads[0].g[p];
      }
      // Keep parameters exactly representable in the float32 model format so
      // checkpoints round-trip bit-exactly.
      model.round_to_float32();
    }

    const double metric =
        dev.empty() ? epoch_loss : dev_metric(model, dev, cfg.early_stop);
    const bool lower = dev.empty() || lower_better;
    if (!have_best || (lower ? metric < best_metric : metric > best_metric)) {
      best = model;
      best_metric = metric;
      have_best = true;
    }
    if (cfg.log != nullptr) {
      (*cfg.log) << epoch << '\t' << epoch_loss << '\t' << metric << '\n';
    }
  }
  return best;
}

double gradient_check(const ParserModel& m, const std::vector<TrainInstance>& batch,
                      double epsilon) {
  if (m.param_count() > 10000) {
    throw std::invalid_argument("gradient_check: model too large (> 1e4 parameters)");
  }
  ModelGrads analytic(m);
  for (const TrainInstance& inst : batch) instance_loss(m, inst, &analytic);

  ParserModel probe = m;
  std::vector<Mat*> params = probe.params();
  std::vector<unsigned char> sig_up, sig_down;
  auto batch_loss = [&](std::vector<unsigned char>* sig) {
    double loss = 0.0;
    for (const TrainInstance& inst : batch) loss += instance_loss_traced(probe, inst, nullptr, sig);
    return loss;
  };

  // Coordinates whose perturbation flips a ReLU activation are excluded: the
  // loss is not differentiable inside that interval, so a central difference
  // does not estimate the gradient there.
  double max_rel = 0.0;
  for (size_t p = 0; p < params.size(); ++p) {
    Mat& w = *params[p];
    for (Eigen::Index i = 0; i < w.rows(); ++i) {
      for (Eigen::Index j = 0; j < w.cols(); ++j) {
        const double saved = w(i, j);
        sig_up.clear();
        sig_down.clear();
        w(i, j) = saved + epsilon;
        const double up = batch_loss(&sig_up);
        w(i, j) = saved - epsilon;
        const double down = batch_loss(&sig_down);
        w(i, j) = saved;
        if (sig_up != sig_down) continue;
        const double fd = (up - down) / (2.0 * epsilon);
        const double an = analytic.g[p](i, j);
        const double rel = std::abs(an - fd) / std::max({1.0, std::abs(an), std::abs(fd)});
        max_rel = std::max(max_rel, rel);
      }
    }
  }
  return max_rel;
}

}  // namespace subdp

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "subdp/biaffine.hpp"
#include "subdp/projection.hpp"
#include "subdp/treebank.hpp"

namespace subdp {

enum class EarlyStopMetric { kDevLoss, kDevLas };

struct TrainConfig {
  double learning_rate = 2e-3;
  int epochs = 100;
  int batch_size = 32;
  uint64_t seed = 1;
  EarlyStopMetric early_stop = EarlyStopMetric::kDevLas;
  double gradient_clip = 5.0;
  int n_threads = 1;
  std::ostream* log = nullptr;  // one line per epoch: epoch, train loss, dev metric
};

// One training example: word forms plus dense cross-entropy targets. Arc rows
// and label cells that are all zero are unsupervised and contribute nothing.
struct TrainInstance {
  std::vector<std::string> forms;    // words 1..n
  Mat arc_target;                    // (n+1) x (n+1)
  Mat label_target;                  // (n+1)^2 x |L|, row-major cells
  std::vector<int> ref_heads;  // reference tree for dev LAS; -1 = none
  std::vector<int> ref_labels;
  std::vector<std::string> ref_upos;
  std::string id;

  int n_words() const { return static_cast<int>(forms.size()); }
};

// Gold tree: one-hot arcs, labels supervised on gold arcs only.
TrainInstance make_supervised_instance(const Sentence& s, const LabelSet& labels);

// Partial tree (e.g. hard projection): unattached tokens are unsupervised.
TrainInstance make_partial_instance(const Sentence& s, const LabelSet& labels);

// Projected soft distributions; the dummy arc column is dropped (partial CE).
TrainInstance make_soft_instance(const std::vector<std::string>& forms, const SoftTarget& t);

// -sum_{p,q} target(q|p) log p2(q|p) over real positions, dummy column
// excluded; logs are clamped at `floor` so mass on a zero-probability cell
// stays finite.
double partial_arc_ce(const ArcMatrix& p2, const SoftTarget& target, double floor = 1e-12);

// Triple sum over labels and all real position pairs.
double partial_label_ce(const LabelTensor& q2, const SoftTarget& target, double floor = 1e-12);

double total_loss(const ParserModel& m,
                  const std::vector<std::pair<Sentence, SoftTarget>>& batch);

// Log-likelihood loss on gold trees; labels scored on gold arcs only.
double supervised_loss(const ParserModel& m, const std::vector<Sentence>& batch);

// Differentiable loss for one instance; used by train() and gradient_check().
double instance_loss(const ParserModel& m, const TrainInstance& inst, ModelGrads* grads);

// Gradient descent with global-norm clipping; returns the checkpoint with the
// best dev metric. Deterministic given config.seed and n_threads.
ParserModel train(const TrainConfig& cfg, ParserModel model,
                  const std::vector<TrainInstance>& data,
                  const std::vector<TrainInstance>& dev);

// Max relative error between analytic and central-difference gradients of the
// summed instance loss; models must have at most 1e4 parameters.
double gradient_check(const ParserModel& m, const std::vector<TrainInstance>& batch,
                      double epsilon);

}  // namespace subdp

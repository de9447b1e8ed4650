#pragma once

#include <cstdint>
#include <vector>

#include "subdp/alignment.hpp"
#include "subdp/treebank.hpp"

namespace subdp {

struct SynthConfig {
  uint64_t grammar_seed = 1;
  int n_sentences = 100;
  int max_len = 12;
  int reorder_rule = 1;      // 0 = identity, 1 = verb-final with postpositions
  double fusion_rate = 0.0;  // chance an adjacent modifier-head pair fuses
};

struct SynthCorpus {
  std::vector<Sentence> source;
  std::vector<Sentence> target;
  std::vector<RawAlignment> alignments;
};

// Deterministic bilingual corpus with gold trees on both sides and gold
// alignments. Source sentences depend only on grammar_seed and the sentence
// index, so corpora generated with different fusion rates or reorder rules
// share their source side.
SynthCorpus generate(const SynthConfig& cfg);

}  // namespace subdp

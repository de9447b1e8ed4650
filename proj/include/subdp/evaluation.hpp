#pragma once

#include <map>
#include <string>
#include <vector>

#include "subdp/treebank.hpp"

namespace subdp {

struct EvalOptions {
  std::vector<std::string> punct_tags = {"PUNCT"};  // gold upos values to exclude
  bool strip_subtypes = false;                      // compare deprels up to ":"
};

struct EvalResult {
  double uas = 0.0;
  double las = 0.0;
  long counted_tokens = 0;
  long excluded_tokens = 0;
};

// Attachment scores over aligned treebanks; tokens whose gold upos is a
// punctuation tag are excluded from numerator and denominator.
EvalResult evaluate(const std::vector<Sentence>& pred, const std::vector<Sentence>& gold,
                    const EvalOptions& options = {});

// Aligned plain-text table, one system per row, sorted by name.
std::string report(const std::map<std::string, EvalResult>& results);

}  // namespace subdp

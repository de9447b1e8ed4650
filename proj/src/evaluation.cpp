#include "subdp/evaluation.hpp"

#include <algorithm>
#include <cstdio>
#include <stdexcept>

namespace subdp {

namespace {

std::string base_label(const std::string& deprel, bool strip) {
  if (!strip) return deprel;
  const size_t pos = deprel.find(':');
  return pos == std::string::npos ? deprel : deprel.substr(0, pos);
}

}  // namespace

EvalResult evaluate(const std::vector<Sentence>& pred, const std::vector<Sentence>& gold,
                    const EvalOptions& options) {
  if (pred.size() != gold.size()) {
    throw std::runtime_error("evaluate: " + std::to_string(pred.size()) + " predicted vs " +
                             std::to_string(gold.size()) + " gold sentences");
  }
  EvalResult r;
  long correct_heads = 0, correct_both = 0;
  for (size_t k = 0; k < gold.size(); ++k) {
    const Sentence& p = pred[k];
    const Sentence& g = gold[k];
    if (p.size() != g.size()) {
      throw std::runtime_error("evaluate: length mismatch in sentence " + std::to_string(k + 1) +
                               (g.id.empty() ? "" : " (" + g.id + ")"));
    }
    for (int i = 1; i <= g.size(); ++i) {
      const Token& gt = g.token(i);
      if (std::find(options.punct_tags.begin(), options.punct_tags.end(), gt.upos) !=
          options.punct_tags.end()) {
        ++r.excluded_tokens;
        continue;
      }
      ++r.counted_tokens;
      const Token& pt = p.token(i);
      if (pt.head == gt.head) {
        ++correct_heads;
        if (base_label(pt.deprel, options.strip_subtypes) ==
            base_label(gt.deprel, options.strip_subtypes)) {
          ++correct_both;
        }
      }
    }
  }
  if (r.counted_tokens > 0) {
    r.uas = 100.0 * static_cast<double>(correct_heads) / static_cast<double>(r.counted_tokens);
    r.las = 100.0 * static_cast<double>(correct_both) / static_cast<double>(r.counted_tokens);
  }
  return r;
}

std::string report(const std::map<std::string, EvalResult>& results) {
  size_t width = 6;  // "system"
  for (const auto& [name, res] : results) width = std::max(width, name.size());
  std::string out = "system";
  out.append(width - 6, ' ');
  out += "    UAS    LAS\n";
  char buf[64];
  for (const auto& [name, res] : results) {
    out += name;
    out.append(width - name.size(), ' ');
    std::snprintf(buf, sizeof(buf), "  %5.1f  %5.1f\n", res.uas, res.las);
    out += buf;
  }
  return out;
}

}  // namespace subdp

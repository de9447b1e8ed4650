#pragma once

#include <string>
#include <vector>

#include "subdp/alignment.hpp"
#include "subdp/biaffine.hpp"
#include "subdp/projection.hpp"
#include "subdp/training.hpp"
#include "subdp/treebank.hpp"

namespace subdp {

// Parallel corpus: sentence-aligned treebanks plus word alignments.
struct Bitext {
  std::vector<Sentence> src, tgt;
  std::vector<RawAlignment> align;
  size_t size() const { return src.size(); }
};

Bitext load_bitext(const std::string& src_path, const std::string& tgt_path,
                   const std::string& align_path, bool one_to_one);

// Soft silver labels for one pair: model distributions by default, gold-tree
// distributions when discrete is set.
SoftRecord project_pair(const ParserModel& m, const Sentence& src, const Sentence& tgt,
                        const RawAlignment& align, bool discrete);

std::vector<TrainInstance> instances_from_soft(const SoftCorpus& corpus);
std::vector<TrainInstance> instances_from_partial(const std::vector<Sentence>& sentences,
                                                  const LabelSet& labels);

// Partial target treebank from hard projection of the source trees.
std::vector<Sentence> hard_project_bitext(const Bitext& bt);

namespace cli {

// Runs one subcommand; args exclude the program name. Returns the process
// exit code and reports errors as a single diagnostic line on stderr.
int run_cli(const std::vector<std::string>& args);

}  // namespace cli

}  // namespace subdp

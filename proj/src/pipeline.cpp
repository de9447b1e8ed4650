#include "subdp/pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "subdp/decoding.hpp"
#include "subdp/evaluation.hpp"
#include "subdp/synthdata.hpp"

namespace subdp {

Bitext load_bitext(const std::string& src_path, const std::string& tgt_path,
                   const std::string& align_path, bool one_to_one) {
  Bitext bt;
  bt.src = read_conllu_file(src_path, /*allow_partial=*/true);
  bt.tgt = read_conllu_file(tgt_path, /*allow_partial=*/true);
  if (bt.src.size() != bt.tgt.size()) {
    throw std::runtime_error("sentence-count mismatch between files: " + src_path + " has " +
                             std::to_string(bt.src.size()) + ", " + tgt_path + " has " +
                             std::to_string(bt.tgt.size()));
  }
  std::vector<int> n_src, n_tgt;
  for (const Sentence& s : bt.src) n_src.push_back(s.size());
  for (const Sentence& s : bt.tgt) n_tgt.push_back(s.size());
  bt.align = read_pharaoh_file(align_path, n_src, n_tgt);
  if (one_to_one) {
    for (RawAlignment& a : bt.align) a = filter_one_to_one(a);
  }
  return bt;
}

SoftRecord project_pair(const ParserModel& m, const Sentence& src, const Sentence& tgt,
                        const RawAlignment& align, bool discrete) {
  const StochasticAlignment al = build_projection_matrices(align);
  SoftRecord rec;
  rec.id = tgt.id.empty() ? src.id : tgt.id;
  for (const Token& t : tgt.tokens) rec.forms.push_back(t.form);
  if (discrete) {
    rec.target = project_discrete_tree(src, al, m.label_set);
  } else {
    const auto [h, d] = encode(src, m);
    rec.target.arcs = project_arcs(arc_probs(arc_scores(h, d, m), /*mask_self=*/false), al);
    rec.target.labels = project_labels(label_probs(h, d, m), al);
  }
  rec.target.target_sentence_id = rec.id;
  return rec;
}

std::vector<TrainInstance> instances_from_soft(const SoftCorpus& corpus) {
  std::vector<TrainInstance> out;
  out.reserve(corpus.records.size());
  for (const SoftRecord& r : corpus.records) out.push_back(make_soft_instance(r.forms, r.target));
  return out;
}

std::vector<TrainInstance> instances_from_partial(const std::vector<Sentence>& sentences,
                                                  const LabelSet& labels) {
  std::vector<TrainInstance> out;
  out.reserve(sentences.size());
  for (const Sentence& s : sentences) out.push_back(make_partial_instance(s, labels));
  return out;
}

std::vector<Sentence> hard_project_bitext(const Bitext& bt) {
  std::vector<Sentence> out;
  for (size_t k = 0; k < bt.size(); ++k) {
    Sentence t = bt.tgt[k];
    for (Token& tok : t.tokens) {
      tok.head = -1;
      tok.deprel = "_";
    }
    for (const HardArc& arc : hard_project(bt.src[k], bt.align[k])) {
      if (arc.dep < 1) continue;  // ROOT is never a dependent
      t.token(arc.dep).head = arc.head;
      t.token(arc.dep).deprel = arc.label;
    }
    out.push_back(std::move(t));
  }
  return out;
}

namespace cli {

namespace {

struct DimOpts {
  int buckets = 65536;
  int embed = 64;
  int hidden = 128;
  int arc_dim = 128;
  bool no_recurrent = false;

  EncoderConfig config(uint64_t seed) const {
    EncoderConfig c;
    c.vocab_hash_buckets = buckets;
    c.embed_dim = embed;
    c.hidden_dim = hidden;
    c.head_dim = arc_dim;
    c.dep_dim = arc_dim;
    c.use_recurrent = !no_recurrent;
    c.seed = seed;
    return c;
  }
};

struct TrainOpts {
  uint64_t seed = 1;
  int epochs = 0;  // set per command
  double lr = 0.0;
  int batch = 32;
  double clip = 5.0;
  int threads = 1;

  TrainConfig config(EarlyStopMetric metric, std::ostream* log) const {
    TrainConfig c;
    c.seed = seed;
    c.epochs = epochs;
    c.learning_rate = lr;
    c.batch_size = batch;
    c.gradient_clip = clip;
    c.n_threads = threads;
    c.early_stop = metric;
    c.log = log;
    return c;
  }
};

void add_dim_opts(CLI::App* cmd, DimOpts* d) {
  cmd->add_option("--buckets", d->buckets, "trigram hash buckets");
  cmd->add_option("--embed", d->embed, "trigram embedding size");
  cmd->add_option("--hidden", d->hidden, "encoder hidden size");
  cmd->add_option("--arc-dim", d->arc_dim, "head/dependent feature size");
  cmd->add_flag("--no-recurrent", d->no_recurrent, "drop the BiLSTM layer");
}

void add_train_opts(CLI::App* cmd, TrainOpts* t, int epochs, double lr) {
  t->epochs = epochs;
  t->lr = lr;
  cmd->add_option("--seed", t->seed, "random seed");
  cmd->add_option("--epochs", t->epochs, "training epochs");
  cmd->add_option("--lr", t->lr, "learning rate");
  cmd->add_option("--batch", t->batch, "batch size (loss is summed per batch)");
  cmd->add_option("--clip", t->clip, "global gradient-norm clip");
  cmd->add_option("--threads", t->threads, "sentence-level worker threads");
}

ParserModel train_and_log(const TrainOpts& topts, EarlyStopMetric metric, ParserModel init,
                          const std::vector<TrainInstance>& data,
                          const std::vector<TrainInstance>& dev, const std::string& log_path) {
  std::ofstream log;
  if (!log_path.empty()) {
    log.open(log_path, std::ios::binary);
    if (!log) throw std::runtime_error("cannot open " + log_path + " for writing");
  }
  const TrainConfig cfg = topts.config(metric, log.is_open() ? &log : nullptr);
  return train(cfg, std::move(init), data, dev);
}

LabelSet require_same_labels(const std::vector<SoftCorpus>& corpora) {
  for (size_t i = 1; i < corpora.size(); ++i) {
    if (corpora[i].labels != corpora[0].labels) {
      throw std::runtime_error("projected corpora carry different label sets");
    }
  }
  return corpora[0].labels;
}

// --- subcommands ---

int cmd_synth(const std::string& out, uint64_t seed, int n, int max_len, double fusion,
              int reorder) {
  SynthConfig cfg;
  cfg.grammar_seed = seed;
  cfg.n_sentences = n;
  cfg.max_len = max_len;
  cfg.fusion_rate = fusion;
  cfg.reorder_rule = reorder;
  const SynthCorpus corpus = generate(cfg);
  write_conllu_file(out + ".src.conllu", corpus.source);
  write_conllu_file(out + ".tgt.conllu", corpus.target);
  write_pharaoh_file(out + ".align", corpus.alignments);
  std::cerr << "wrote " << corpus.source.size() << " sentence pairs to " << out
            << ".{src.conllu,tgt.conllu,align}\n";
  return 0;
}

int cmd_train_source(const std::string& train_path, const std::string& dev_path,
                     const std::string& model_path, const DimOpts& dims, const TrainOpts& topts,
                     const std::string& metric_name) {
  const std::vector<Sentence> train_data = read_conllu_file(train_path);
  const std::vector<Sentence> dev_data = read_conllu_file(dev_path);
  std::vector<Sentence> all = train_data;
  all.insert(all.end(), dev_data.begin(), dev_data.end());
  const LabelSet labels = LabelSet::from_sentences(all);

  std::vector<TrainInstance> data, dev;
  for (const Sentence& s : train_data) data.push_back(make_supervised_instance(s, labels));
  for (const Sentence& s : dev_data) dev.push_back(make_supervised_instance(s, labels));

  ParserModel model = ParserModel::random_init(dims.config(topts.seed), labels);
  const EarlyStopMetric metric =
      metric_name == "loss" ? EarlyStopMetric::kDevLoss : EarlyStopMetric::kDevLas;
  model = train_and_log(topts, metric, std::move(model), data, dev, model_path + ".log");
  save_model(model, model_path);
  std::cerr << "wrote " << model_path << " (" << model.param_count() << " parameters)\n";
  return 0;
}

int cmd_project(const std::string& model_path, const std::string& src_path,
                const std::string& tgt_path, const std::string& align_path,
                const std::string& out_path, double threshold, const std::string& align_mode,
                const std::string& mode, bool discrete) {
  const Bitext bt = load_bitext(src_path, tgt_path, align_path, align_mode == "one_to_one");

  if (mode == "hard") {
    for (const Sentence& s : bt.src) {
      for (const Token& t : s.tokens) {
        if (t.head < 0) {
          throw std::runtime_error("hard projection needs source trees; " + src_path +
                                   " has unattached tokens (sentence " + s.id + ")");
        }
      }
    }
    write_conllu_file(out_path, hard_project_bitext(bt));
    std::cerr << "wrote hard-projected treebank " << out_path << "\n";
    return 0;
  }

  LabelSet labels;
  ParserModel model;
  bool have_model = false;
  if (!model_path.empty()) {
    model = load_model(model_path);
    labels = model.label_set;
    have_model = true;
  } else if (discrete) {
    labels = LabelSet::from_sentences(bt.src);
  } else {
    throw std::runtime_error("--model is required unless --discrete or --mode hard is given");
  }
  if (!have_model) {
    // Gold-tree projection does not evaluate the parser; a label set is all
    // project_pair needs from the model.
    model.label_set = labels;
  }

  SoftCorpus corpus;
  corpus.labels = labels;
  corpus.threshold = threshold;
  for (size_t k = 0; k < bt.size(); ++k) {
    corpus.records.push_back(project_pair(model, bt.src[k], bt.tgt[k], bt.align[k], discrete));
  }
  write_soft_corpus_file(out_path, corpus);
  std::cerr << "wrote " << corpus.records.size() << " soft-target records to " << out_path << "\n";
  return 0;
}

int cmd_train_target(const std::vector<std::string>& proj_paths, const std::string& dev_path,
                     const std::string& model_path, const std::string& init,
                     const std::string& mode, const DimOpts& dims, const TrainOpts& topts) {
  std::vector<TrainInstance> data, dev;
  LabelSet labels;

  if (mode == "hard") {
    std::vector<Sentence> sentences;
    for (const std::string& p : proj_paths) {
      const std::vector<Sentence> part = read_conllu_file(p, /*allow_partial=*/true);
      sentences.insert(sentences.end(), part.begin(), part.end());
    }
    if (init != "random") {
      labels = load_model(init).label_set;
    } else {
      labels = LabelSet::from_sentences(sentences);
    }
    data = instances_from_partial(sentences, labels);
    if (!dev_path.empty()) {
      dev = instances_from_partial(read_conllu_file(dev_path, /*allow_partial=*/true), labels);
    }
  } else {
    std::vector<SoftCorpus> corpora;
    for (const std::string& p : proj_paths) corpora.push_back(read_soft_corpus_file(p));
    labels = require_same_labels(corpora);
    for (const SoftCorpus& c : corpora) {
      std::vector<TrainInstance> part = instances_from_soft(c);
      data.insert(data.end(), std::make_move_iterator(part.begin()),
                  std::make_move_iterator(part.end()));
    }
    if (!dev_path.empty()) {
      const SoftCorpus dc = read_soft_corpus_file(dev_path);
      if (dc.labels != labels) throw std::runtime_error("dev corpus label set differs from training");
      dev = instances_from_soft(dc);
    }
  }

  ParserModel model;
  if (init == "random") {
    model = ParserModel::random_init(dims.config(topts.seed), labels);
  } else {
    model = load_model(init);
    if (model.label_set != labels) {
      throw std::runtime_error("label-set mismatch between init model " + init +
                               " (" + std::to_string(model.label_set.size()) +
                               " labels) and training data (" + std::to_string(labels.size()) +
                               " labels)");
    }
  }

  const EarlyStopMetric metric =
      mode == "hard" ? EarlyStopMetric::kDevLas : EarlyStopMetric::kDevLoss;
  model = train_and_log(topts, metric, std::move(model), data, dev, model_path + ".log");
  save_model(model, model_path);
  std::cerr << "wrote " << model_path << "\n";
  return 0;
}

int cmd_parse(const std::string& model_path, const std::string& test_path,
              const std::string& out_path, bool single_root) {
  const ParserModel model = load_model(model_path);
  std::vector<Sentence> sentences = read_conllu_file(test_path, /*allow_partial=*/true);
  for (Sentence& s : sentences) {
    s = apply_tree(s, parse_sentence(model, s, single_root), model.label_set);
  }
  write_conllu_file(out_path, sentences);
  std::cerr << "parsed " << sentences.size() << " sentences into " << out_path << "\n";
  return 0;
}

int cmd_eval(const std::string& pred_path, const std::string& gold_path, bool strip_subtypes,
             const std::string& punct_tags) {
  EvalOptions opts;
  opts.strip_subtypes = strip_subtypes;
  opts.punct_tags.clear();
  std::istringstream tags(punct_tags);
  std::string tag;
  while (std::getline(tags, tag, ',')) {
    if (!tag.empty()) opts.punct_tags.push_back(tag);
  }
  const EvalResult r = evaluate(read_conllu_file(pred_path, /*allow_partial=*/true),
                                read_conllu_file(gold_path), opts);
  std::printf("UAS: %.1f  LAS: %.1f  (counted %ld, excluded %ld)\n", r.uas, r.las,
              r.counted_tokens, r.excluded_tokens);
  std::printf("uas=%.6f las=%.6f counted=%ld excluded=%ld\n", r.uas, r.las, r.counted_tokens,
              r.excluded_tokens);
  return 0;
}

int cmd_compare(const std::string& train_path, const std::string& dev_path,
                const std::string& src_path, const std::string& tgt_path,
                const std::string& align_path, const std::string& test_path,
                std::vector<std::string> modes, const std::string& source_model_path,
                const std::string& out_path, const DimOpts& dims, const TrainOpts& topts,
                int source_epochs, double source_lr, double threshold,
                const std::string& align_mode) {
  if (modes.empty()) modes = {"subdp", "hard", "dt"};
  for (const std::string& m : modes) {
    if (m != "subdp" && m != "hard" && m != "dt" && m != "st") {
      throw std::runtime_error("unknown compare mode '" + m + "'");
    }
  }

  const Bitext bt = load_bitext(src_path, tgt_path, align_path, align_mode == "one_to_one");
  const std::vector<Sentence> test_gold = read_conllu_file(test_path);

  ParserModel source;
  if (!source_model_path.empty()) {
    source = load_model(source_model_path);
  } else {
    if (train_path.empty() || dev_path.empty()) {
      throw std::runtime_error("compare needs --train and --dev, or a --source-model");
    }
    const std::vector<Sentence> train_data = read_conllu_file(train_path);
    const std::vector<Sentence> dev_data = read_conllu_file(dev_path);
    std::vector<Sentence> all = train_data;
    all.insert(all.end(), dev_data.begin(), dev_data.end());
    const LabelSet labels = LabelSet::from_sentences(all);
    std::vector<TrainInstance> data, dev;
    for (const Sentence& s : train_data) data.push_back(make_supervised_instance(s, labels));
    for (const Sentence& s : dev_data) dev.push_back(make_supervised_instance(s, labels));
    TrainOpts sopts = topts;
    sopts.epochs = source_epochs;
    sopts.lr = source_lr;
    std::cerr << "[compare] training source parser (" << data.size() << " sentences)\n";
    source = train_and_log(sopts, EarlyStopMetric::kDevLas,
                           ParserModel::random_init(dims.config(topts.seed), labels), data, dev,
                           "");
  }

  // Last tenth of the bitext is held out for target-side early stopping.
  const size_t n_pairs = bt.size();
  const size_t dev_count = n_pairs >= 10 ? n_pairs / 10 : (n_pairs >= 2 ? 1 : 0);
  const size_t train_count = n_pairs - dev_count;

  auto eval_model = [&](const ParserModel& m) {
    std::vector<Sentence> pred = test_gold;
    for (Sentence& s : pred) s = apply_tree(s, parse_sentence(m, s, true), m.label_set);
    return evaluate(pred, test_gold);
  };

  std::map<std::string, EvalResult> results;
  for (const std::string& mode : modes) {
    if (results.count(mode) > 0) continue;
    std::cerr << "[compare] system " << mode << "\n";
    if (mode == "dt") {
      results["dt"] = eval_model(source);
      continue;
    }
    std::vector<TrainInstance> data, dev;
    EarlyStopMetric metric = EarlyStopMetric::kDevLoss;
    if (mode == "subdp") {
      // Round-trip through the corpus format so the write threshold applies
      // exactly as in the file-based pipeline.
      SoftCorpus corpus;
      corpus.labels = source.label_set;
      corpus.threshold = threshold;
      for (size_t k = 0; k < n_pairs; ++k) {
        corpus.records.push_back(project_pair(source, bt.src[k], bt.tgt[k], bt.align[k], false));
      }
      std::stringstream buf;
      write_soft_corpus(buf, corpus);
      const SoftCorpus lossy = read_soft_corpus(buf);
      for (size_t k = 0; k < n_pairs; ++k) {
        const SoftRecord& rec = lossy.records[k];
        (k < train_count ? data : dev).push_back(make_soft_instance(rec.forms, rec.target));
      }
    } else if (mode == "hard") {
      const std::vector<Sentence> partial = hard_project_bitext(bt);
      for (size_t k = 0; k < n_pairs; ++k) {
        (k < train_count ? data : dev)
            .push_back(make_partial_instance(partial[k], source.label_set));
      }
      metric = EarlyStopMetric::kDevLas;
    } else {  // st: fit the direct-transfer parser's own predictions, one round
      for (size_t k = 0; k < n_pairs; ++k) {
        const Sentence pred = apply_tree(
            bt.tgt[k], parse_sentence(source, bt.tgt[k], true), source.label_set);
        (k < train_count ? data : dev).push_back(make_supervised_instance(pred, source.label_set));
      }
      metric = EarlyStopMetric::kDevLas;
    }
    ParserModel target = train_and_log(topts, metric, source, data, dev, "");
    results[mode] = eval_model(target);
  }

  const std::string table = report(results);
  std::cout << table;
  if (!out_path.empty()) {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + out_path + " for writing");
    out << table;
  }
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"substructure distribution projection for cross-lingual dependency parsing"};
  app.require_subcommand(1);

  // synth
  auto* synth = app.add_subcommand("synth", "generate a synthetic bilingual treebank");
  std::string synth_out;
  uint64_t synth_seed = 1;
  int synth_n = 100, synth_max_len = 12, synth_reorder = 1;
  double synth_fusion = 0.0;
  synth->add_option("--out", synth_out, "output path prefix")->required();
  synth->add_option("--seed", synth_seed, "grammar seed");
  synth->add_option("--n", synth_n, "number of sentence pairs");
  synth->add_option("--max-len", synth_max_len, "maximum source length");
  synth->add_option("--fusion", synth_fusion, "modifier-head fusion probability");
  synth->add_option("--reorder", synth_reorder, "reorder rule (0 identity, 1 verb-final)");

  // train-source
  auto* ts = app.add_subcommand("train-source", "train a parser on gold trees");
  std::string ts_train, ts_dev, ts_model, ts_metric = "las";
  DimOpts ts_dims;
  TrainOpts ts_opts;
  ts->add_option("--train", ts_train, "training treebank (CoNLL-U)")->required();
  ts->add_option("--dev", ts_dev, "development treebank")->required();
  ts->add_option("--model", ts_model, "output model path")->required();
  ts->add_option("--early-stop", ts_metric, "dev metric: las or loss")
      ->check(CLI::IsMember({"las", "loss"}));
  add_dim_opts(ts, &ts_dims);
  add_train_opts(ts, &ts_opts, 100, 2e-3);

  // project
  auto* pj = app.add_subcommand("project", "project source distributions through alignments");
  std::string pj_model, pj_src, pj_tgt, pj_align, pj_out;
  std::string pj_align_mode = "raw", pj_mode = "subdp";
  double pj_threshold = 1e-6;
  bool pj_discrete = false;
  pj->add_option("--model", pj_model, "source parser model");
  pj->add_option("--bitext-src", pj_src, "source side of the bitext (CoNLL-U)")->required();
  pj->add_option("--bitext-tgt", pj_tgt, "target side of the bitext (CoNLL-U)")->required();
  pj->add_option("--align", pj_align, "word alignments (Pharaoh)")->required();
  pj->add_option("--out", pj_out, "output path")->required();
  pj->add_option("--threshold", pj_threshold, "arc write threshold (lossy)");
  pj->add_option("--align-mode", pj_align_mode, "raw or one_to_one")
      ->check(CLI::IsMember({"raw", "one_to_one"}));
  pj->add_option("--mode", pj_mode, "subdp (soft targets) or hard (partial trees)")
      ->check(CLI::IsMember({"subdp", "hard"}));
  pj->add_flag("--discrete", pj_discrete, "project gold trees instead of model distributions");

  // train-target
  auto* tt = app.add_subcommand("train-target", "train a parser on projected targets");
  std::vector<std::string> tt_proj;
  std::string tt_dev, tt_model, tt_init, tt_mode = "subdp";
  DimOpts tt_dims;
  TrainOpts tt_opts;
  tt->add_option("--proj", tt_proj, "projected corpus (repeatable)")->required();
  tt->add_option("--dev", tt_dev, "projected dev corpus for early stopping");
  tt->add_option("--model", tt_model, "output model path")->required();
  tt->add_option("--init", tt_init, "init model path, or 'random'")->required();
  tt->add_option("--mode", tt_mode, "subdp (soft corpus) or hard (partial CoNLL-U)")
      ->check(CLI::IsMember({"subdp", "hard"}));
  add_dim_opts(tt, &tt_dims);
  add_train_opts(tt, &tt_opts, 30, 5e-4);

  // parse
  auto* pr = app.add_subcommand("parse", "parse sentences with a trained model");
  std::string pr_model, pr_test, pr_out;
  bool pr_single_root = true;
  pr->add_option("--model", pr_model, "model path")->required();
  pr->add_option("--test", pr_test, "input CoNLL-U")->required();
  pr->add_option("--out", pr_out, "output CoNLL-U")->required();
  pr->add_option("--single-root", pr_single_root, "enforce a unique ROOT dependent (default 1)");

  // eval
  auto* ev = app.add_subcommand("eval", "attachment scores of predictions against gold");
  std::string ev_pred, ev_gold, ev_punct = "PUNCT";
  bool ev_strip = false;
  ev->add_option("pred", ev_pred, "predicted CoNLL-U")->required();
  ev->add_option("gold", ev_gold, "gold CoNLL-U")->required();
  ev->add_flag("--strip-subtypes", ev_strip, "compare labels up to ':'");
  ev->add_option("--punct-tags", ev_punct, "comma-separated upos tags to exclude");

  // compare
  auto* cp = app.add_subcommand("compare", "run the transfer baseline battery on one corpus");
  std::string cp_train, cp_dev, cp_src, cp_tgt, cp_align, cp_test, cp_source_model, cp_out;
  std::vector<std::string> cp_modes;
  std::string cp_align_mode = "raw";
  double cp_threshold = 1e-6;
  int cp_source_epochs = 100;
  double cp_source_lr = 2e-3;
  DimOpts cp_dims;
  TrainOpts cp_opts;
  cp->add_option("--train", cp_train, "source-language training treebank");
  cp->add_option("--dev", cp_dev, "source-language dev treebank");
  cp->add_option("--bitext-src", cp_src, "source side of the bitext")->required();
  cp->add_option("--bitext-tgt", cp_tgt, "target side of the bitext")->required();
  cp->add_option("--align", cp_align, "word alignments (Pharaoh)")->required();
  cp->add_option("--test", cp_test, "target-language gold test treebank")->required();
  cp->add_option("--mode", cp_modes, "systems to run (subdp, hard, dt, st); repeatable");
  cp->add_option("--source-model", cp_source_model, "reuse a trained source model");
  cp->add_option("--out", cp_out, "also write the report here");
  cp->add_option("--source-epochs", cp_source_epochs, "source training epochs");
  cp->add_option("--source-lr", cp_source_lr, "source learning rate");
  cp->add_option("--threshold", cp_threshold, "arc write threshold");
  cp->add_option("--align-mode", cp_align_mode, "raw or one_to_one")
      ->check(CLI::IsMember({"raw", "one_to_one"}));
  add_dim_opts(cp, &cp_dims);
  add_train_opts(cp, &cp_opts, 30, 5e-4);

  std::vector<const char*> argv;
  argv.push_back("subdp");
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (synth->parsed()) {
      return cmd_synth(synth_out, synth_seed, synth_n, synth_max_len, synth_fusion, synth_reorder);
    }
    if (ts->parsed()) {
      return cmd_train_source(ts_train, ts_dev, ts_model, ts_dims, ts_opts, ts_metric);
    }
    if (pj->parsed()) {
      return cmd_project(pj_model, pj_src, pj_tgt, pj_align, pj_out, pj_threshold, pj_align_mode,
                         pj_mode, pj_discrete);
    }
    if (tt->parsed()) {
      return cmd_train_target(tt_proj, tt_dev, tt_model, tt_init, tt_mode, tt_dims, tt_opts);
    }
    if (pr->parsed()) return cmd_parse(pr_model, pr_test, pr_out, pr_single_root);
    if (ev->parsed()) return cmd_eval(ev_pred, ev_gold, ev_strip, ev_punct);
    if (cp->parsed()) {
      return cmd_compare(cp_train, cp_dev, cp_src, cp_tgt, cp_align, cp_test, cp_modes,
                         cp_source_model, cp_out, cp_dims, cp_opts, cp_source_epochs,
                         cp_source_lr, cp_threshold, cp_align_mode);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace cli

}  // namespace subdp

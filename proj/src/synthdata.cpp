#include "subdp/synthdata.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <stdexcept>
#include <string>

namespace subdp {

namespace {

uint64_t splitmix64(uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

uint64_t mix(uint64_t seed, uint64_t idx, uint64_t salt) {
  return splitmix64(splitmix64(seed ^ salt) ^ idx);
}

enum class Pos { kNoun, kVerb, kAdj, kAdv, kDet, kAdp, kPunct };

const char* kSrcDet[] = {"da", "di", "do"};
const char* kTgtDet[] = {"ga", "gi", "go"};
const char* kSrcAdp[] = {"pa", "pe", "pi", "po"};
const char* kTgtAdp[] = {"ka", "ke", "ki", "ko"};

struct Lexicon {
  std::vector<std::string> noun, verb, adj, adv;  // stems

  static Lexicon build(uint64_t seed) {
    std::mt19937_64 rng(splitmix64(seed ^ 0x5EEDF00DULL));
    const std::string cons = "bdgklmnprstvz";
    const std::string vowel = "aeiou";
    std::set<std::string> used;
    auto stem = [&]() {
      std::uniform_int_distribution<size_t> ci(0, cons.size() - 1);
      std::uniform_int_distribution<size_t> vi(0, vowel.size() - 1);
      std::uniform_int_distribution<int> extra(0, 2);
      while (true) {
        std::string s;
        const int syllables = 2 + (extra(rng) == 0 ? 1 : 0);
        for (int k = 0; k < syllables; ++k) {
          s += cons[ci(rng)];
          s += vowel[vi(rng)];
        }
        if (used.insert(s).second) return s;
      }
    };
    Lexicon lex;
    for (int i = 0; i < 40; ++i) lex.noun.push_back(stem());
    for (int i = 0; i < 24; ++i) lex.verb.push_back(stem());
    for (int i = 0; i < 16; ++i) lex.adj.push_back(stem());
    for (int i = 0; i < 10; ++i) lex.adv.push_back(stem());
    return lex;
  }
};

struct SrcToken {
  Pos pos;
  int lex = -1;      // stem or closed-class index
  int head = 0;      // source head position, 0 = root
  std::string deprel;
};

struct NounPhrase {
  std::vector<int> members;  // source positions in order: [det] adj* noun
  int noun = -1;
  int last_adj = -1;  // source position of the adjective adjacent to the noun
};

struct ClausePlan {
  std::vector<SrcToken> tokens;  // 1-based via index+1
  NounPhrase subj, obj, obl;
  int verb = -1, adv = -1, adp = -1, punct = -1;
  bool has_obj = false, has_obl = false;
};

std::string src_form(const Lexicon& lex, const SrcToken& t) {
  switch (t.pos) {
    case Pos::kNoun: return lex.noun[static_cast<size_t>(t.lex)] + "a";
    case Pos::kVerb: return lex.verb[static_cast<size_t>(t.lex)] + "en";
    case Pos::kAdj: return lex.adj[static_cast<size_t>(t.lex)] + "ol";
    case Pos::kAdv: return lex.adv[static_cast<size_t>(t.lex)] + "ik";
    case Pos::kDet: return kSrcDet[t.lex];
    case Pos::kAdp: return kSrcAdp[t.lex];
    case Pos::kPunct: return ".";
  }
  return "?";
}

std::string tgt_form(const Lexicon& lex, const SrcToken& t) {
  switch (t.pos) {
    case Pos::kNoun: return lex.noun[static_cast<size_t>(t.lex)] + "u";
    case Pos::kVerb: return lex.verb[static_cast<size_t>(t.lex)] + "in";
    case Pos::kAdj: return lex.adj[static_cast<size_t>(t.lex)] + "ul";
    case Pos::kAdv: return lex.adv[static_cast<size_t>(t.lex)] + "uk";
    case Pos::kDet: return kTgtDet[t.lex];
    case Pos::kAdp: return kTgtAdp[t.lex];
    case Pos::kPunct: return "\xE3\x80\x82";  // 。
  }
  return "?";
}

const char* upos_of(Pos p) {
  switch (p) {
    case Pos::kNoun: return "NOUN";
    case Pos::kVerb: return "VERB";
    case Pos::kAdj: return "ADJ";
    case Pos::kAdv: return "ADV";
    case Pos::kDet: return "DET";
    case Pos::kAdp: return "ADP";
    case Pos::kPunct: return "PUNCT";
  }
  return "X";
}

ClausePlan sample_clause(const Lexicon& lex, std::mt19937_64& rng, int max_len) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto pick = [&](size_t count) {
    return static_cast<int>(std::uniform_int_distribution<size_t>(0, count - 1)(rng));
  };

  while (true) {
    ClausePlan plan;
    auto add = [&](Pos pos, int lex_idx) {
      plan.tokens.push_back({pos, lex_idx, 0, ""});
      return static_cast<int>(plan.tokens.size());  // 1-based position
    };
    auto sample_np = [&](NounPhrase* np) {
      if (u(rng) < 0.6) np->members.push_back(add(Pos::kDet, pick(3)));
      const double a = u(rng);
      const int n_adj = a < 0.55 ? 0 : (a < 0.85 ? 1 : 2);
      for (int k = 0; k < n_adj; ++k) {
        const int p = add(Pos::kAdj, pick(lex.adj.size()));
        np->members.push_back(p);
        np->last_adj = p;
      }
      np->noun = add(Pos::kNoun, pick(lex.noun.size()));
      np->members.push_back(np->noun);
    };

    sample_np(&plan.subj);
    plan.verb = add(Pos::kVerb, pick(lex.verb.size()));
    if (u(rng) < 0.35) plan.adv = add(Pos::kAdv, pick(lex.adv.size()));
    if (u(rng) < 0.75) {
      plan.has_obj = true;
      sample_np(&plan.obj);
    }
    if (u(rng) < 0.45) {
      plan.has_obl = true;
      plan.adp = add(Pos::kAdp, pick(4));
      sample_np(&plan.obl);
    }
    if (u(rng) < 0.9) plan.punct = add(Pos::kPunct, 0);

    if (static_cast<int>(plan.tokens.size()) > max_len) continue;

    auto& toks = plan.tokens;
    auto set_np_heads = [&](const NounPhrase& np, const std::string& noun_rel) {
      toks[static_cast<size_t>(np.noun) - 1].head = plan.verb;
      toks[static_cast<size_t>(np.noun) - 1].deprel = noun_rel;
      for (int p : np.members) {
        if (p == np.noun) continue;
        SrcToken& t = toks[static_cast<size_t>(p) - 1];
        t.head = np.noun;
        t.deprel = t.pos == Pos::kDet ? "det" : "amod";
      }
    };
    toks[static_cast<size_t>(plan.verb) - 1].head = 0;
    toks[static_cast<size_t>(plan.verb) - 1].deprel = "root";
    set_np_heads(plan.subj, "nsubj");
    if (plan.has_obj) set_np_heads(plan.obj, "obj");
    if (plan.has_obl) {
      set_np_heads(plan.obl, "obl");
      toks[static_cast<size_t>(plan.adp) - 1].head = plan.obl.noun;
      toks[static_cast<size_t>(plan.adp) - 1].deprel = "case";
    }
    if (plan.adv > 0) {
      toks[static_cast<size_t>(plan.adv) - 1].head = plan.verb;
      toks[static_cast<size_t>(plan.adv) - 1].deprel = "advmod";
    }
    if (plan.punct > 0) {
      toks[static_cast<size_t>(plan.punct) - 1].head = plan.verb;
      toks[static_cast<size_t>(plan.punct) - 1].deprel = "punct";
    }
    return plan;
  }
}

}  // namespace

SynthCorpus generate(const SynthConfig& cfg) {
  if (cfg.fusion_rate < 0.0 || cfg.fusion_rate > 1.0) {
    throw std::invalid_argument("fusion_rate must be in [0, 1]");
  }
  if (cfg.max_len < 2) throw std::invalid_argument("max_len must be >= 2");
  if (cfg.reorder_rule != 0 && cfg.reorder_rule != 1) {
    throw std::invalid_argument("unknown reorder rule " + std::to_string(cfg.reorder_rule));
  }

  const Lexicon lex = Lexicon::build(cfg.grammar_seed);
  SynthCorpus corpus;

  for (int k = 0; k < cfg.n_sentences; ++k) {
    std::mt19937_64 rng_s(mix(cfg.grammar_seed, static_cast<uint64_t>(k), 0xA11CEULL));
    std::mt19937_64 rng_f(mix(cfg.grammar_seed, static_cast<uint64_t>(k), 0xF05EULL));
    std::uniform_real_distribution<double> u(0.0, 1.0);

    const ClausePlan plan = sample_clause(lex, rng_s, cfg.max_len);
    const std::string sent_id =
        "synth-" + std::to_string(cfg.grammar_seed) + "-" + std::to_string(k);

    // Source sentence.
    Sentence src;
    src.comments.push_back("# sent_id = " + sent_id);
    src.id = sent_id;
    for (size_t i = 0; i < plan.tokens.size(); ++i) {
      const SrcToken& st = plan.tokens[i];
      Token t;
      t.index = static_cast<int>(i) + 1;
      t.form = src_form(lex, st);
      t.upos = upos_of(st.pos);
      t.head = st.head;
      t.deprel = st.deprel;
      src.tokens.push_back(std::move(t));
    }

    // Decide fusions per noun phrase (one draw each, in a fixed order, from a
    // stream independent of the structure sampler).
    std::set<int> fused_adjs;  // source positions of adjectives merged into their noun
    auto maybe_fuse = [&](const NounPhrase& np, bool active) {
      if (np.last_adj < 0) return;
      const bool fuse = u(rng_f) < cfg.fusion_rate;
      if (active && fuse) fused_adjs.insert(np.last_adj);
    };
    maybe_fuse(plan.subj, true);
    maybe_fuse(plan.obj, plan.has_obj);
    maybe_fuse(plan.obl, plan.has_obl);

    // Target word sequence: groups of source positions in target order.
    std::vector<std::vector<int>> groups;
    auto emit_np = [&](const NounPhrase& np) {
      for (int p : np.members) {
        if (fused_adjs.count(p) > 0) continue;  // folded into the noun's group
        if (p == np.noun && np.last_adj > 0 && fused_adjs.count(np.last_adj) > 0) {
          groups.push_back({np.last_adj, p});
        } else {
          groups.push_back({p});
        }
      }
    };

    if (cfg.reorder_rule == 0) {
      emit_np(plan.subj);
      groups.push_back({plan.verb});
      if (plan.adv > 0) groups.push_back({plan.adv});
      if (plan.has_obj) emit_np(plan.obj);
      if (plan.has_obl) {
        groups.push_back({plan.adp});
        emit_np(plan.obl);
      }
      if (plan.punct > 0) groups.push_back({plan.punct});
    } else {
      emit_np(plan.subj);
      if (plan.has_obj) emit_np(plan.obj);
      if (plan.has_obl) {
        emit_np(plan.obl);
        groups.push_back({plan.adp});  // postposition
      }
      if (plan.adv > 0) groups.push_back({plan.adv});
      groups.push_back({plan.verb});
      if (plan.punct > 0) groups.push_back({plan.punct});
    }

    // Primary member of a group carries the arc; map every source position to
    // its target position for head resolution and alignment.
    std::vector<int> tgt_pos_of_src(plan.tokens.size() + 1, 0);
    for (size_t g = 0; g < groups.size(); ++g) {
      for (int p : groups[g]) tgt_pos_of_src[static_cast<size_t>(p)] = static_cast<int>(g) + 1;
    }

    Sentence tgt;
    tgt.comments.push_back("# sent_id = " + sent_id);
    tgt.id = sent_id;
    RawAlignment align;
    align.n_src = src.size();
    align.n_tgt = static_cast<int>(groups.size());
    for (size_t g = 0; g < groups.size(); ++g) {
      const int primary = groups[g].back();
      const SrcToken& st = plan.tokens[static_cast<size_t>(primary) - 1];
      Token t;
      t.index = static_cast<int>(g) + 1;
      if (groups[g].size() == 2) {
        const SrcToken& adj = plan.tokens[static_cast<size_t>(groups[g].front()) - 1];
        t.form = lex.adj[static_cast<size_t>(adj.lex)] + lex.noun[static_cast<size_t>(st.lex)] + "u";
        t.upos = "NOUN";
      } else {
        t.form = tgt_form(lex, st);
        t.upos = upos_of(st.pos);
      }
      t.head = st.head == 0 ? 0 : tgt_pos_of_src[static_cast<size_t>(st.head)];
      t.deprel = st.deprel;
      tgt.tokens.push_back(std::move(t));
      for (int p : groups[g]) align.links.insert({p, static_cast<int>(g) + 1});
    }

    corpus.source.push_back(std::move(src));
    corpus.target.push_back(std::move(tgt));
    corpus.alignments.push_back(std::move(align));
  }
  return corpus;
}

}  // namespace subdp

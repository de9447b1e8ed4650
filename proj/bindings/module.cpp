#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "subdp/alignment.hpp"
#include "subdp/decoding.hpp"
#include "subdp/evaluation.hpp"
#include "subdp/projection.hpp"
#include "subdp/synthdata.hpp"
#include "subdp/treebank.hpp"

namespace py = pybind11;
using namespace subdp;

PYBIND11_MODULE(_core, m) {
  m.doc() = "substructure distribution projection for cross-lingual dependency parsing";

  py::class_<Token>(m, "Token")
      .def(py::init<>())
      .def_readwrite("index", &Token::index)
      .def_readwrite("form", &Token::form)
      .def_readwrite("upos", &Token::upos)
      .def_readwrite("head", &Token::head)
      .def_readwrite("deprel", &Token::deprel)
      .def("__repr__", [](const Token& t) {
        return "Token(" + std::to_string(t.index) + ", '" + t.form + "', head=" +
               std::to_string(t.head) + ", " + t.deprel + ")";
      });

  py::class_<Sentence>(m, "Sentence")
      .def(py::init<>())
      .def_readwrite("tokens", &Sentence::tokens)
      .def_readwrite("comments", &Sentence::comments)
      .def_readwrite("id", &Sentence::id)
      .def("__len__", &Sentence::size);

  m.def("parse_conllu", &parse_conllu, py::arg("text"), py::arg("allow_partial") = false);
  m.def("write_conllu", &write_conllu, py::arg("sentences"));
  m.def("labels_of", [](const std::vector<Sentence>& ss) {
    return LabelSet::from_sentences(ss).labels();
  });
  m.def("gold_arc_matrix", &gold_arc_matrix);
  m.def("gold_label_tensor", [](const Sentence& s, const std::vector<std::string>& labels) {
    return gold_label_tensor(s, LabelSet(labels));
  });

  py::class_<RawAlignment>(m, "RawAlignment")
      .def(py::init([](int n_src, int n_tgt, const std::set<std::pair<int, int>>& links) {
             RawAlignment a;
             a.n_src = n_src;
             a.n_tgt = n_tgt;
             a.links = links;
             return a;
           }),
           py::arg("n_src"), py::arg("n_tgt"), py::arg("links"))
      .def_readonly("n_src", &RawAlignment::n_src)
      .def_readonly("n_tgt", &RawAlignment::n_tgt)
      .def_readonly("links", &RawAlignment::links);

  py::class_<StochasticAlignment>(m, "StochasticAlignment")
      .def_readonly("a_st", &StochasticAlignment::a_st)
      .def_readonly("a_ts", &StochasticAlignment::a_ts);

  m.def("parse_pharaoh", &parse_pharaoh, py::arg("line"), py::arg("n_src"), py::arg("n_tgt"));
  m.def("add_dummy_column", &add_dummy_column);
  m.def("row_normalize", &row_normalize);
  m.def("build_projection_matrices", &build_projection_matrices);
  m.def("filter_one_to_one", &filter_one_to_one);
  m.def("argmax_align", &argmax_align);

  py::class_<SoftTarget>(m, "SoftTarget")
      .def_readonly("arcs", &SoftTarget::arcs)
      .def_readonly("labels", &SoftTarget::labels)
      .def_readonly("target_sentence_id", &SoftTarget::target_sentence_id);

  m.def("project_arcs", &project_arcs);
  m.def("project_labels", &project_labels);
  m.def("project_discrete_tree",
        [](const Sentence& s, const StochasticAlignment& al, const std::vector<std::string>& L) {
          return project_discrete_tree(s, al, LabelSet(L));
        });
  m.def("hard_project", [](const Sentence& s, const RawAlignment& a) {
    std::vector<std::tuple<int, int, std::string>> out;
    for (const HardArc& arc : hard_project(s, a)) out.emplace_back(arc.dep, arc.head, arc.label);
    return out;
  });
  m.def("project_arcs_normalized", [](const Mat& p1, const StochasticAlignment& al) {
    const NormalizedProjection np = project_arcs_normalized(p1, al);
    return std::make_pair(np.p2, np.alpha);
  });

  m.def("mst_decode", &mst_decode, py::arg("log_p"), py::arg("single_root") = true);
  m.def("brute_force_decode", &brute_force_decode, py::arg("log_p"), py::arg("single_root") = true);
  m.def("assign_labels", &assign_labels);

  py::class_<EvalResult>(m, "EvalResult")
      .def_readonly("uas", &EvalResult::uas)
      .def_readonly("las", &EvalResult::las)
      .def_readonly("counted_tokens", &EvalResult::counted_tokens)
      .def_readonly("excluded_tokens", &EvalResult::excluded_tokens);

  m.def(
      "evaluate",
      [](const std::vector<Sentence>& pred, const std::vector<Sentence>& gold) {
        return evaluate(pred, gold);
      },
      py::arg("pred"), py::arg("gold"));

  m.def(
      "generate_synth",
      [](uint64_t seed, int n, int max_len, double fusion_rate, int reorder_rule) {
        SynthConfig cfg;
        cfg.grammar_seed = seed;
        cfg.n_sentences = n;
        cfg.max_len = max_len;
        cfg.fusion_rate = fusion_rate;
        cfg.reorder_rule = reorder_rule;
        const SynthCorpus c = generate(cfg);
        return std::make_tuple(c.source, c.target, c.alignments);
      },
      py::arg("seed") = 1, py::arg("n") = 100, py::arg("max_len") = 12,
      py::arg("fusion_rate") = 0.0, py::arg("reorder_rule") = 1);
}

"""Substructure distribution projection for cross-lingual dependency parsing.

Thin wrapper around the C++ extension; see the package README for the full
command-line pipeline.
"""

from subdp._core import (  # noqa: F401
    EvalResult,
    RawAlignment,
    Sentence,
    SoftTarget,
    StochasticAlignment,
    Token,
    add_dummy_column,
    argmax_align,
    assign_labels,
    brute_force_decode,
    build_projection_matrices,
    evaluate,
    filter_one_to_one,
    generate_synth,
    gold_arc_matrix,
    gold_label_tensor,
    hard_project,
    labels_of,
    mst_decode,
    parse_conllu,
    parse_pharaoh,
    project_arcs,
    project_arcs_normalized,
    project_discrete_tree,
    project_labels,
    row_normalize,
    write_conllu,
)

__all__ = [name for name in dir() if not name.startswith("_")]

"""Best match graphs on colored digraphs.

Recognition via triples, supertrees, forbidden subgraphs and neighborhood
axioms; exact arc-modification solving; exportable ILP models; random
instances and hardness-reduction gadgets.
"""

from .digraph import (COMPLETION, DELETION, EDITING, ColoredDigraph,
                      ColoringReport, EditSet, apply_edit,
                      connected_components, thinness_classes,
                      validate_coloring)
from .trees import ClusterSet, PhyloTree, bmg_from_tree, star
from .triples import Triple, TriplePair, build_tree, extract_triples, mtt
from .recognition import (ForbiddenClassCatalog, ForbiddenWitness,
                          NeighborhoodAxioms, RecognitionResult,
                          check_neighborhood_axioms,
                          enumerate_forbidden_classes, find_violation,
                          is_2bmg_via_forbidden, is_binary_explainable,
                          recognize_bmg, recognize_bmg_via_aho,
                          recognize_bmg_via_axioms, scan_forbidden_subgraphs,
                          scan_hourglasses)
from .ilp import (GENERAL, TWO_COLOR, IlpModel, SolveResult, build_model,
                  export_lp, feasible_assignment, solve_exact, verify_edit)
from .generators import (BipartiteGraph, GadgetOutput, SplitMix64,
                         X3cInstance, bmg_special, cgc_gadget,
                         cover_edit_set, hub_extension, independent_edge_pairs,
                         is_chain_graph, perturb, random_colored_tree,
                         x3c_gadget)
from .formats import (parse_cgc, parse_graph, parse_tree, parse_x3c,
                      serialize_graph, serialize_tree)

__version__ = "0.1.0"

__all__ = [
    "COMPLETION", "DELETION", "EDITING", "GENERAL", "TWO_COLOR",
    "BipartiteGraph", "ClusterSet", "ColoredDigraph", "ColoringReport",
    "EditSet", "ForbiddenClassCatalog", "ForbiddenWitness", "GadgetOutput",
    "IlpModel", "NeighborhoodAxioms", "PhyloTree", "RecognitionResult",
    "SolveResult", "SplitMix64", "Triple", "TriplePair", "X3cInstance",
    "apply_edit", "bmg_from_tree", "bmg_special", "build_model", "build_tree",
    "cgc_gadget", "check_neighborhood_axioms", "connected_components",
    "cover_edit_set", "enumerate_forbidden_classes", "export_lp",
    "extract_triples", "feasible_assignment", "find_violation",
    "hub_extension", "independent_edge_pairs", "is_2bmg_via_forbidden",
    "is_binary_explainable", "is_chain_graph", "mtt", "parse_cgc",
    "parse_graph", "parse_tree", "parse_x3c", "perturb",
    "random_colored_tree", "recognize_bmg", "recognize_bmg_via_aho",
    "recognize_bmg_via_axioms", "scan_forbidden_subgraphs",
    "scan_hourglasses", "serialize_graph", "serialize_tree", "solve_exact",
    "star", "thinness_classes", "validate_coloring", "verify_edit",
    "x3c_gadget",
]

"""Congruence closure with small proof certificates."""

from .certificate import (AxiomStep, CheckError, CongStep, ProofCert, Step, cert_dag_size,
                          cert_tree_size, check_cert, parse_cert, render_cert)
from .engine import (Axiom, CGraphSnapshot, Congruence, Engine, NotEquivalent, build_engine,
                     forest_path, weighted_shortest_path)
from .extract_basic import reduce_proof, unoptimized_proof
from .greedy import estimate_sizes, greedy_extract
from .instance import Instance, gen_random_instance, parse_instance, render_instance
from .kernels import BACKEND
from .optdag import brute_min_dag, brute_min_tree, emit_ilp, fixpoint_e_connected
from .terms import Term, TermBank, intern_term, parse_term, print_term
from .treeopt import optimal_tree_size_table, treeopt_extract

__all__ = [
    "Axiom", "AxiomStep", "BACKEND", "CGraphSnapshot", "CheckError", "CongStep", "Congruence",
    "Engine", "Instance", "NotEquivalent", "ProofCert", "Step", "Term", "TermBank",
    "brute_min_dag", "brute_min_tree", "build_engine", "cert_dag_size", "cert_tree_size",
    "check_cert", "emit_ilp", "estimate_sizes", "fixpoint_e_connected", "forest_path",
    "gen_random_instance", "greedy_extract", "intern_term", "optimal_tree_size_table",
    "parse_cert", "parse_instance", "parse_term", "print_term", "reduce_proof", "render_cert",
    "render_instance", "treeopt_extract", "unoptimized_proof", "weighted_shortest_path",
]

"""Fly-automata over clique-width terms.

Terms denote graphs; automata are computed on the fly from their transition
functions.  Queries written in a small monadic logic compile to automata,
and aggregate heads (count, spectra, witnesses) turn a satisfaction run into
a single bottom-up pass.
"""

from .automata import Metrics, determinize, run_det, run_nondet
from .dagshare import run_det_dag, share, unfold
from .graph import PGraph, eval_graph, read_edge_list, trivial_term
from .logic import compile_query, evaluate, parse_query, with_head
from .normalize import check_good, check_irredundant, normalize, normalize_full
from .terms import Term, parse_term, render, term

__version__ = "0.1.0"

__all__ = [
    "Metrics", "PGraph", "Term", "check_good", "check_irredundant", "compile_query",
    "determinize", "eval_graph", "evaluate", "normalize", "normalize_full", "parse_query",
    "read_edge_list", "render", "run_det", "run_det_dag", "run_nondet", "share", "term",
    "trivial_term", "unfold", "with_head", "parse_term",
]

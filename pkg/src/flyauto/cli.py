"""Command-line front end: ``flyauto <cmd> [flags] <input>``.

Inputs are clique-width terms (``.cwt``), edge lists (``n m d`` header) or
shared DAG files (``dag <nodes> root <id>`` header).  Edge lists are turned
into terms with one label per vertex.  Results go to stdout as JSON.

Exit codes: 0 success (or ``check`` true), 1 ``check`` false, 2 parse or
type errors, 3 precondition violations.
"""

import argparse
import json
import os
import re
import sys

from . import logic
from .aggregates import enumerate_sat, value_to_json, witness_key
from .automata import Metrics, NondeterministicError, SignatureError, run_det
from .dagshare import read_dag, run_det_dag, share, unfold, unfolded_size, write_dag
from .graph import eval_graph, read_edge_list, trivial_term, write_edge_list
from .logic import QueryError, atom_names, compile_query, parse_query, with_head
from .normalize import check_irredundant, normalize_full
from .terms import (Fn, TermSyntaxError, fmt_pos, is_directed, leaf_positions, parse_term,
                    postorder, render, term_stats)

# atoms whose automata are only correct on irredundant terms
REDUNDANCY_SENSITIVE = {"cycle", "e", "e_between", "outdeg", "maxdeg", "regular", "degle"}
POSITION_HEADS = {"sat", "witness", "witness_min", "witness_max", "witness_card"}


class UsageError(Exception):
    """Bad input or query: exit status 2."""


class PreconditionError(Exception):
    """Input does not meet a documented precondition: exit status 3."""


# ---------------------------------------------------------------- inputs

class Job:
    """A loaded input: the term to run on, plus how to print positions."""

    def __init__(self, t, kind, directed=False, names=None, dag=None):
        self.term = t
        self.kind = kind            # "term", "graph" or "dag"
        self.directed = directed
        self.names = names          # leaf position -> printed name, when remapped
        self.dag = dag
        self.fallback = False
        self.normalized = False

    @property
    def graph_mode(self):
        return not any(isinstance(n.sym, Fn) for n in postorder(self.term))


def _sniff(text):
    for ln in text.splitlines():
        s = ln.split("#", 1)[0].strip()
        if not s:
            continue
        if s.startswith("dag "):
            return "dag"
        if re.fullmatch(r"\d+\s+\d+\s+[01]", s):
            return "graph"
        return "term"
    return "term"


def load(path):
    try:
        if path == "-":
            text = sys.stdin.read()
        else:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
    except OSError as e:
        raise UsageError(f"cannot read {path}: {e.strerror}") from None
    ext = os.path.splitext(path)[1].lower()
    kind = {".cwt": "term", ".dag": "dag", ".edges": "graph", ".el": "graph"}.get(ext) or _sniff(text)
    try:
        if kind == "graph":
            g = read_edge_list(text)
            t = trivial_term(g)
            names = {u: str(i) for i, u in enumerate(leaf_positions(t), start=1)}
            return Job(t, "graph", g.directed, names)
        if kind == "dag":
            d = read_dag(text)
            t = unfold(d)
            return Job(t, "dag", is_directed(t), dag=d)
        t, directed = parse_term(text)
        return Job(t, "term", directed)
    except (TermSyntaxError, ValueError) as e:
        raise UsageError(f"{path}: {e}") from None


def prepare(job, normalize, query=None):
    """Normalize a graph-mode input if asked; check irredundancy otherwise."""
    if not job.graph_mode:
        return job
    if normalize:
        before = leaf_positions(job.term)
        nz = normalize_full(job.term)
        t = nz.with_ports()
        after = leaf_positions(t)
        # normalization keeps the left-to-right order of the vertices
        old = job.names or {u: fmt_pos(u) for u in before}
        job.names = {a: old[b] for a, b in zip(after, before)}
        job.term = t
        job.fallback = nz.fallback
        job.normalized = True
        if nz.fallback:
            print("note: partially redundant add found; used the trivial term", file=sys.stderr)
        if job.dag is not None:
            job.dag = share(t)
    elif query is not None and atom_names(query) & REDUNDANCY_SENSITIVE:
        ok, where = check_irredundant(job.term)
        if not ok:
            bad = sorted(atom_names(query) & REDUNDANCY_SENSITIVE)
            raise PreconditionError(f"term is redundant at position {fmt_pos(where)}; "
                                    f"{', '.join(bad)} need an irredundant term (drop --no-normalize)")
    return job


# ---------------------------------------------------------------- queries

def read_query(text):
    if text is None:
        raise UsageError("a query is required (-q)")
    if text.startswith("@"):
        try:
            with open(text[1:], encoding="utf-8") as fh:
                text = fh.read()
        except OSError as e:
            raise UsageError(f"cannot read query file: {e.strerror}") from None
    try:
        return parse_query(text)
    except QueryError as e:
        raise UsageError(f"query: {e}") from None


def _threads():
    raw = os.environ.get("FLYAUTO_THREADS")
    if raw is None:
        return 1
    if not raw.isdigit() or int(raw) < 1:
        raise UsageError("FLYAUTO_THREADS must be a positive integer")
    return int(raw)


def run(A, job, use_dag, metrics):
    if use_dag:
        d = job.dag if job.dag is not None else share(job.term)
        return run_det_dag(A, d, metrics)
    return run_det(A, job.term, metrics=metrics)


def _rename_positions(v, job):
    names = job.names or {}

    def pos(u):
        return names.get(u, fmt_pos(u))

    def go(x):
        if isinstance(x, frozenset):
            return [go(y) for y in sorted(x, key=witness_key if _is_tuple_set(x) else _pos_key)]
        if isinstance(x, tuple) and x and all(isinstance(i, int) for i in x):
            return pos(x)
        if isinstance(x, tuple):
            if x == ():
                return pos(x)
            return [go(y) for y in x]
        return value_to_json(x)
    return go(v)


def _is_tuple_set(x):
    return any(isinstance(y, tuple) and y and isinstance(y[0], frozenset) for y in x)


def _pos_key(x):
    return x if isinstance(x, tuple) else ()


def emit(obj, args):
    text = json.dumps(obj, sort_keys=True) if not args.text else _plain(obj)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _plain(obj):
    if isinstance(obj, dict) and "value" in obj:
        v = obj["value"]
        return json.dumps(v) if not isinstance(v, bool) else str(v).lower()
    return json.dumps(obj, sort_keys=True)


def _result(value, job, args, metrics):
    out = {"value": value}
    if job.fallback:
        out["fallback"] = True
    if metrics is not None:
        out["metrics"] = metrics.as_dict()
    return out


# ---------------------------------------------------------------- commands

def cmd_check(args):
    q = read_query(args.query)
    job = prepare(load(args.input), not args.no_normalize, q)
    A = compile_query(q, mode=None if job.graph_mode else "term")
    if not A.acceptor:
        raise UsageError("check needs a property; use compute for functions")
    metrics = Metrics() if args.metrics else None
    r = run(A, job, args.dag, metrics)
    value = bool(r.output)
    emit(_result(value, job, args, metrics), args)
    return 0 if value else 1


def cmd_compute(args):
    q = read_query(args.query)
    if args.head:
        if args.head not in logic.HEADS and args.head != "exists":
            raise UsageError(f"unknown head {args.head!r}; choose from {', '.join(logic.HEADS)}")
        q = with_head(q, args.head)
    if args.dag and _has_position_head(q):
        raise PreconditionError("position-valued results are not defined on shared DAGs")
    job = prepare(load(args.input), not args.no_normalize, q)
    A = compile_query(q, mode=None if job.graph_mode else "term")
    metrics = Metrics() if args.metrics else None
    r = run(A, job, args.dag, metrics)
    if _has_position_head(q):
        value = _rename_positions(r.output, job)
    else:
        value = value_to_json(r.output)
    emit(_result(value, job, args, metrics), args)
    return 0


def _has_position_head(q):
    return isinstance(q, logic.Head) and q.kind in POSITION_HEADS


def cmd_enum(args):
    q = read_query(args.query)
    if isinstance(q, logic.Exists):
        names, body = tuple(q.vars), q.body
    elif isinstance(q, logic.Head):
        names, body = tuple(q.vars), q.body
    else:
        names, body = tuple(logic.free_vars(q)), q
    if not names:
        raise UsageError("enum needs variables to enumerate (free or under exists)")
    job = prepare(load(args.input), not args.no_normalize, body)
    mode = None if job.graph_mode else "term"
    A = compile_query(body, free=names, mode=mode)
    fo = [i for i, v in enumerate(names) if logic.is_fo(v)]
    if fo:
        A = logic.fo_guard(A, fo, A.mode)
    if not A.acceptor:
        raise UsageError("enum needs a property")
    count = 0
    out = open(args.output, "w", encoding="utf-8") if args.output else sys.stdout
    try:
        for x in enumerate_sat(A, job.term, limit=args.limit, verify=False):
            row = {}
            for v, X in zip(names, x):
                if logic.is_fo(v):
                    (u,) = X
                    row[v] = _rename_positions(u, job)
                else:
                    row[v] = _rename_positions(X, job)
            out.write(json.dumps(row, sort_keys=True) + "\n")
            out.flush()
            count += 1
    finally:
        if args.output:
            out.close()
    print(f"{count} tuple(s)", file=sys.stderr)
    return 0


def cmd_normalize(args):
    job = load(args.input)
    if not job.graph_mode:
        raise UsageError("normalize expects a clique-width term")
    nz = normalize_full(job.term)
    t = nz.with_ports() if args.keep_ports else nz.term
    if nz.fallback:
        print("note: partially redundant add found; used the trivial term", file=sys.stderr)
    text = render(t, directive=job.directed, directed=job.directed)
    if args.json:
        emit({"term": text, "fallback": nz.fallback, "h": {str(a): b for a, b in sorted(nz.h.items())},
              "stats": term_stats(t)}, args)
    elif args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return 0


def cmd_stats(args):
    job = load(args.input)
    st = term_stats(job.term)
    if job.graph_mode:
        g = eval_graph(job.term, job.directed)
        st["edges"] = len(g.edges)
        st["directed"] = g.directed
        ok, where = check_irredundant(job.term)
        st["irredundant"] = ok
        from .normalize import check_good
        st["good"] = check_good(job.term)[0]
    if job.dag is not None:
        st["dag_nodes"] = job.dag.node_count
    emit(st, args)
    return 0


def cmd_graph(args):
    job = load(args.input)
    if not job.graph_mode:
        raise UsageError("graph expects a clique-width term")
    text = write_edge_list(eval_graph(job.term, job.directed))
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_dag(args):
    job = load(args.input)
    d = job.dag if job.dag is not None else share(job.term)
    counts = {"dag_nodes": d.node_count, "term_size": unfolded_size(d)}
    text = write_dag(d)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
        print(json.dumps(counts, sort_keys=True))
    else:
        sys.stdout.write(text)
        print(json.dumps(counts, sort_keys=True), file=sys.stderr)
    return 0


COMMANDS = {
    "check": (cmd_check, "decide a closed property (exit 0 true, 1 false)"),
    "compute": (cmd_compute, "compute a function or aggregate value"),
    "enum": (cmd_enum, "stream satisfying assignments"),
    "normalize": (cmd_normalize, "good irredundant equivalent term"),
    "stats": (cmd_stats, "size, height, labels and related statistics"),
    "graph": (cmd_graph, "export the graph as an edge list"),
    "dag": (cmd_dag, "share equal subterms and write the DAG"),
}


def build_parser():
    p = argparse.ArgumentParser(prog="flyauto", description="Fly-automata over clique-width terms.")
    sub = p.add_subparsers(dest="cmd", required=True)
    for name, (_, help_) in COMMANDS.items():
        sp = sub.add_parser(name, help=help_)
        sp.add_argument("input", help="term (.cwt), edge list, DAG file, or - for stdin")
        sp.add_argument("-o", "--output", help="write the result to this file")
        sp.add_argument("--json", action="store_true", help="JSON output (default for results)")
        sp.add_argument("--text", action="store_true", help="plain value instead of a JSON object")
        if name in ("check", "compute", "enum"):
            sp.add_argument("-q", "--query", help="query text, a preset name, or @file")
            sp.add_argument("--no-normalize", action="store_true",
                            help="run on the input term as given")
            sp.add_argument("--metrics", action="store_true",
                            help="report transitions, ndeg and max state size")
            sp.add_argument("--dag", action="store_true", help="run on the shared DAG")
        if name == "compute":
            sp.add_argument("--head", help="aggregate head: " + ", ".join(logic.HEADS))
        if name == "enum":
            sp.add_argument("--limit", type=int, help="stop after this many tuples")
        if name == "normalize":
            sp.add_argument("--keep-ports", action="store_true",
                            help="wrap the result in the relabelling restoring port labels")
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _threads()
        fn = COMMANDS[args.cmd][0]
        return fn(args)
    except (UsageError, QueryError, TermSyntaxError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except (PreconditionError, SignatureError, NondeterministicError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 3
    except BrokenPipeError:
        return 0


if __name__ == "__main__":
    sys.exit(main())

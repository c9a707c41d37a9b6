"""Benchmark instance generators and the direct-vs-residual runner.

Two problem families, each in a random-graph and a grid variant:

* reachability over a probabilistic edge relation (query: a path atom),
* a smokers social network where stress and influence are probabilistic
  (query: a smokes atom).

Random graphs follow the standard preferential-attachment process with two
edges per new node; grids are directed right/down.  Instances are pure
functions of (size, seed): the rendered program text is byte-identical
across invocations.
"""

from __future__ import annotations

import random
import time
import zlib
from dataclasses import dataclass

import networkx as nx
from networkx.algorithms.approximation import treewidth_min_fill_in

from .bounds import (DEFAULT_MAX_PROB_FACTS, DEFAULT_MAX_UNDEFINED, ENGINES,
                     CredalUndefinedError, ProbFactLimitError, SolveTimeout,
                     _interval)
from .ground import OlonError, ground_program
from .residual import CERTAIN_TRUE, extract_residual
from .stable import UndefinedAtomLimitError
from .syntax import (Atom, Program, ProbFact, Query, Rule, const,
                     parse_program, render_program)

REACH_RULES = """
edge(X,Y) :- e(X,Y), not nedge(X,Y).
nedge(X,Y) :- e(X,Y), not edge(X,Y).
path(X,Y) :- edge(X,Y).
path(X,Z) :- edge(X,Y), path(Y,Z).
"""

SMOKERS_RULES = """
influences(X,Y) :- e(X,Y), not ninfluences(X,Y).
ninfluences(X,Y) :- e(X,Y), not influences(X,Y).
smokes(X) :- stress(X).
smokes(X) :- smokes(Y), influences(Y,X).
"""

EDGE_PROB = 0.1
STRESS_PROB = 0.1
INFLUENCE_PROB = 0.2


@dataclass(frozen=True)
class BenchmarkInstance:
    dataset: str
    size: int
    run_index: int
    seed: int
    program: Program
    query: Query


@dataclass(frozen=True)
class DecompositionStats:
    bag_count: int
    width_upper_bound: int
    vertex_count: int


def _int_term(i: int):
    return const(str(i))


def _ba_edges(n: int, seed: int) -> list[tuple[int, int]]:
    """Preferential-attachment edges, oriented low index -> high index."""
    graph = nx.barabasi_albert_graph(n, 2, seed=seed)
    return sorted((min(u, v), max(u, v)) for u, v in graph.edges())


def _grid_edges(k: int) -> list[tuple[int, int]]:
    """Directed right/down edges of a k x k grid, nodes in row-major order."""
    edges = []
    for row in range(k):
        for col in range(k):
            node = row * k + col
            if col + 1 < k:
                edges.append((node, node + 1))
            if row + 1 < k:
                edges.append((node, node + k))
    return sorted(edges)


def _edge_facts(edges, prob: float) -> list[ProbFact]:
    return [ProbFact(prob, Atom("e", (_int_term(u), _int_term(v))))
            for u, v in edges]


def gen_reach_ba(n: int, seed: int, run: int = 0) -> BenchmarkInstance:
    if n < 3:
        raise ValueError(f"reachBA needs at least 3 nodes, got {n}")
    rules = parse_program(REACH_RULES).rules
    facts = _edge_facts(_ba_edges(n, seed), EDGE_PROB)
    query = Query(Atom("path", (_int_term(0), _int_term(n - 1))))
    return BenchmarkInstance("reachBA", n, run, seed,
                             Program(tuple(facts), rules), query)


def gen_reach_grid(k: int, seed: int, run: int = 0) -> BenchmarkInstance:
    if k < 2:
        raise ValueError(f"reachGrid needs side length >= 2, got {k}")
    rules = parse_program(REACH_RULES).rules
    facts = _edge_facts(_grid_edges(k), EDGE_PROB)
    rng = random.Random(seed)
    target = rng.choice(range(1, k * k))  # every node is grid-reachable from 0
    query = Query(Atom("path", (_int_term(0), _int_term(target))))
    return BenchmarkInstance("reachGrid", k, run, seed,
                             Program(tuple(facts), rules), query)


def gen_smokers_ba(n: int, seed: int, run: int = 0) -> BenchmarkInstance:
    if n < 3:
        raise ValueError(f"smokersBA needs at least 3 people, got {n}")
    rules = parse_program(SMOKERS_RULES).rules
    facts = [ProbFact(STRESS_PROB, Atom("stress", (_int_term(i),)))
             for i in range(n)]
    facts += _edge_facts(_ba_edges(n, seed), INFLUENCE_PROB)
    query = Query(Atom("smokes", (_int_term(n - 1),)))
    return BenchmarkInstance("smokersBA", n, run, seed,
                             Program(tuple(facts), rules), query)


def gen_smokers_grid(k: int, seed: int, run: int = 0) -> BenchmarkInstance:
    if k < 2:
        raise ValueError(f"smokersGrid needs side length >= 2, got {k}")
    rules = parse_program(SMOKERS_RULES).rules
    facts = [ProbFact(STRESS_PROB, Atom("stress", (_int_term(i),)))
             for i in range(k * k)]
    facts += _edge_facts(_grid_edges(k), INFLUENCE_PROB)
    rng = random.Random(seed)
    target = rng.choice(range(k * k))
    query = Query(Atom("smokes", (_int_term(target),)))
    return BenchmarkInstance("smokersGrid", k, run, seed,
                             Program(tuple(facts), rules), query)


GENERATORS = {
    "reachBA": gen_reach_ba,
    "reachGrid": gen_reach_grid,
    "smokersBA": gen_smokers_ba,
    "smokersGrid": gen_smokers_grid,
}


def with_facts_as_rules(program: Program) -> Program:
    """The same program with probabilistic facts demoted to plain facts,
    for grounding and structural statistics."""
    facts = tuple(Rule(pf.atom) for pf in program.prob_facts)
    return Program((), program.rules + facts)


def ground_rule_count(program: Program) -> int:
    return len(ground_program(with_facts_as_rules(program)).rules)


def primal_graph(program: Program) -> nx.Graph:
    """Undirected co-occurrence graph of the grounding: ground atoms are
    vertices, adjacent when they appear together in some rule."""
    g = ground_program(with_facts_as_rules(program))
    graph = nx.Graph()
    for atom in sorted(g.herbrand_base, key=str):
        graph.add_node(atom)
    for rule in g.rules:
        atoms = sorted({rule.head, *(l.atom for l in rule.body)}, key=str)
        for i, a in enumerate(atoms):
            for b in atoms[i + 1:]:
                graph.add_edge(a, b)
    return graph


def primal_graph_stats(program: Program) -> DecompositionStats:
    """Min-fill tree decomposition statistics of the ground primal graph.

    The reported width is the decomposition upper bound (max bag size
    minus one)."""
    graph = primal_graph(program)
    if graph.number_of_nodes() == 0:
        return DecompositionStats(0, 0, 0)
    width, decomposition = treewidth_min_fill_in(graph)
    return DecompositionStats(decomposition.number_of_nodes(),
                              max(width, 0),
                              graph.number_of_nodes())


CSV_HEADER = ("dataset,size,run,mode,engine,parse_ms,ground_ms,residual_ms,"
              "solve_ms,total_ms,lower,upper,bags,width_ub,vertices,status")


def instance_seed(base_seed: int, dataset: str, size: int, run: int) -> int:
    return zlib.crc32(f"{base_seed}:{dataset}:{size}:{run}".encode())


def run_benchmark(datasets, sizes, runs: int = 10, modes=("direct", "residual"),
                  engine: str = "enum", time_budget: float | None = None,
                  base_seed: int = 0,
                  max_prob_facts: int = DEFAULT_MAX_PROB_FACTS,
                  max_undefined: int = DEFAULT_MAX_UNDEFINED,
                  clock=time.perf_counter):
    """Yield one CSV row per (dataset, size, run, mode), in that order.

    Solving respects ``time_budget`` seconds per row; rows that run out of
    budget or hit a cap are reported with status timeout/error instead of
    aborting the sweep.  All semantic columns are deterministic under a
    fixed seed; the *_ms columns read ``clock``, so passing a monotone stub
    makes entire rows reproducible byte for byte.
    """
    unknown = [d for d in datasets if d not in GENERATORS]
    if unknown:
        raise ValueError(f"unknown dataset(s): {', '.join(unknown)}")
    solve = ENGINES[engine]
    for dataset in datasets:
        for size in sizes:
            for run in range(runs):
                seed = instance_seed(base_seed, dataset, size, run)
                instance = GENERATORS[dataset](size, seed, run)
                for mode in modes:
                    yield _bench_row(instance, mode, engine, solve, time_budget,
                                     max_prob_facts, max_undefined, clock)


def _bench_row(instance, mode, engine, solve, time_budget,
               max_prob_facts, max_undefined, clock):
    t0 = clock()
    program = parse_program(render_program(instance.program))
    parse_ms = (clock() - t0) * 1000.0

    residual_ms = 0.0
    status = "ok"
    interval = None
    target = program
    residual = None
    if mode == "residual":
        t0 = clock()
        try:
            residual = extract_residual(program, instance.query)
            target = residual.program
        except OlonError:
            status = "error"
        residual_ms = (clock() - t0) * 1000.0

    t0 = clock()
    ground_program(with_facts_as_rules(target))
    ground_ms = (clock() - t0) * 1000.0
    stats = primal_graph_stats(target)

    t0 = clock()
    if status == "ok":
        try:
            if residual is not None and residual.query_status != "undefined":
                certain = 1.0 if residual.query_status == CERTAIN_TRUE else 0.0
                interval = _interval(certain, certain)
            else:
                deadline = None if time_budget is None else clock() + time_budget
                interval = solve(target, instance.query,
                                 max_prob_facts=max_prob_facts,
                                 max_undefined=max_undefined,
                                 deadline=deadline, clock=clock)
        except SolveTimeout:
            status = "timeout"
        except (ProbFactLimitError, UndefinedAtomLimitError,
                CredalUndefinedError, OlonError):
            status = "error"
    solve_ms = (clock() - t0) * 1000.0

    total_ms = parse_ms + ground_ms + residual_ms + solve_ms
    lower = f"{interval.lower:.10f}" if interval is not None else ""
    upper = f"{interval.upper:.10f}" if interval is not None else ""
    return (f"{instance.dataset},{instance.size},{instance.run_index},{mode},"
            f"{engine},{parse_ms:.3f},{ground_ms:.3f},{residual_ms:.3f},"
            f"{solve_ms:.3f},{total_ms:.3f},{lower},{upper},"
            f"{stats.bag_count},{stats.width_upper_bound},{stats.vertex_count},"
            f"{status}")

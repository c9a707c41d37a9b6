"""Grounding and the graphs read off a program.

The grounder is bottom-up: it first computes the set of atoms derivable by
positive rule application alone (negation ignored), then instantiates each
rule over matches of its positive body against that set.  Rules that are
already ground are kept verbatim.  Instances whose positive body can never
be derived are omitted; they cannot fire under any of the semantics
computed downstream, so the result is interchangeable with the full naive
grounding.
"""

from __future__ import annotations

from dataclasses import dataclass

from ._util import strongly_connected_components
from .syntax import Atom, Program, Query, Rule, Term


class OlonError(Exception):
    """Raised when a program contains an odd loop over negation."""

    def __init__(self, witness: "OlonWitness"):
        super().__init__(f"odd loop over negation: {witness}")
        self.witness = witness


@dataclass(frozen=True)
class GroundProgram:
    rules: tuple[Rule, ...]
    herbrand_base: frozenset[Atom]

    @classmethod
    def from_rules(cls, rules) -> "GroundProgram":
        rules = tuple(sorted(set(rules), key=str))
        atoms = set()
        for r in rules:
            atoms.add(r.head)
            atoms.update(l.atom for l in r.body)
        return cls(rules, frozenset(atoms))


@dataclass(frozen=True)
class CallGraph:
    nodes: frozenset[tuple[str, int]]
    edges: frozenset[tuple[tuple[str, int], tuple[str, int], str]]  # (from, to, "+"|"-")


@dataclass(frozen=True)
class DependencyGraph:
    nodes: frozenset[Atom]
    edges: frozenset[tuple[Atom, Atom]]  # (head atom, body atom)

    def successors(self) -> dict[Atom, list[Atom]]:
        adj: dict[Atom, list[Atom]] = {a: [] for a in sorted(self.nodes, key=str)}
        for head, body in sorted(self.edges, key=lambda e: (str(e[0]), str(e[1]))):
            adj[head].append(body)
        return adj


@dataclass(frozen=True)
class OlonWitness:
    nodes: tuple[tuple[str, int], ...]
    signs: tuple[str, ...]  # signs[i] labels the edge nodes[i] -> nodes[i+1 mod len]

    def __str__(self) -> str:
        parts = []
        for node, sign in zip(self.nodes, self.signs):
            parts.append(f"{node[0]}/{node[1]} -[{sign}]->")
        first = self.nodes[0]
        return " ".join(parts) + f" {first[0]}/{first[1]}"


def _match_atom(pattern: Atom, fact: Atom, binding: dict[str, Term]) -> dict[str, Term] | None:
    if pattern.signature != fact.signature:
        return None
    new = dict(binding)
    for pat, val in zip(pattern.args, fact.args):
        if pat.is_variable:
            bound = new.get(pat.name)
            if bound is None:
                new[pat.name] = val
            elif bound != val:
                return None
        elif pat != val:
            return None
    return new


def _match_body(atoms: tuple[Atom, ...], index: dict[tuple[str, int], list[Atom]],
                binding: dict[str, Term]) -> list[dict[str, Term]]:
    if not atoms:
        return [binding]
    first, rest = atoms[0], atoms[1:]
    out = []
    for fact in index.get(first.signature, ()):
        new = _match_atom(first, fact, binding)
        if new is not None:
            out.extend(_match_body(rest, index, new))
    return out


def _derivable_atoms(rules: tuple[Rule, ...]) -> dict[tuple[str, int], list[Atom]]:
    """Least set closed under positive rule application, negation ignored."""
    index: dict[tuple[str, int], list[Atom]] = {}
    known: set[Atom] = set()

    def add(atom: Atom) -> bool:
        if atom in known:
            return False
        known.add(atom)
        index.setdefault(atom.signature, []).append(atom)
        return True

    changed = True
    while changed:
        changed = False
        for rule in rules:
            pos = rule.positive_body()
            for binding in _match_body(pos, index, {}):
                head = rule.head.substitute(binding)
                if head.is_ground() and add(head):
                    changed = True
    for facts in index.values():
        facts.sort(key=str)
    return index


def ground_program(program: Program) -> GroundProgram:
    """Instantiate every rule over the derivable-atom over-approximation.

    The input must be a normal program: probabilistic facts are not
    grounded here (encode them first, or turn them into plain facts).
    """
    if program.prob_facts:
        raise ValueError("cannot ground a program with probabilistic facts; "
                         "encode them or add them as plain facts first")
    for rule in program.rules:
        bad = rule.unsafe_variables()
        if bad:
            raise ValueError(f"unsafe rule '{rule}': variable(s) {sorted(bad)}")

    index = _derivable_atoms(program.rules)
    ground_rules: set[Rule] = set()
    for rule in program.rules:
        if rule.head.is_ground() and all(l.atom.is_ground() for l in rule.body):
            ground_rules.add(rule)
            continue
        for binding in _match_body(rule.positive_body(), index, {}):
            ground_rules.add(Rule(rule.head.substitute(binding),
                                  tuple(l.substitute(binding) for l in rule.body)))
    return GroundProgram.from_rules(ground_rules)


def build_call_graph(program: Program) -> CallGraph:
    nodes = set(program.predicates())
    edges = set()
    for rule in program.rules:
        for lit in rule.body:
            sign = "-" if lit.negated else "+"
            edges.add((rule.head.signature, lit.atom.signature, sign))
    return CallGraph(frozenset(nodes), frozenset(edges))


def detect_olon(graph: CallGraph) -> OlonWitness | None:
    """Find a call-graph cycle with an odd number of negative edges.

    Works on the parity double cover: each predicate is split into an even
    and an odd copy, positive edges preserve parity and negative edges flip
    it.  An odd cycle through ``v`` exists iff both copies of ``v`` share a
    strongly connected component.
    """
    nodes = sorted(graph.nodes)
    cover: dict[tuple, list[tuple]] = {}
    for node in nodes:
        cover[(node, 0)] = []
        cover[(node, 1)] = []
    edges = sorted(graph.edges, key=lambda e: (e[0], e[1], e[2]))
    for src, dst, sign in edges:
        flip = 1 if sign == "-" else 0
        for parity in (0, 1):
            cover[(src, parity)].append((dst, parity ^ flip))

    comp_of: dict[tuple, int] = {}
    cover_nodes = [(n, p) for n in nodes for p in (0, 1)]
    for i, comp in enumerate(strongly_connected_components(cover_nodes, cover)):
        for member in comp:
            comp_of[member] = i

    for node in nodes:
        if comp_of[(node, 0)] != comp_of[(node, 1)]:
            continue
        walk = _shortest_cover_path(cover, (node, 0), (node, 1))
        return _extract_odd_cycle(walk)
    return None


def _shortest_cover_path(cover, start, goal) -> list[tuple]:
    parent: dict[tuple, tuple] = {start: start}
    frontier = [start]
    while frontier:
        nxt = []
        for cur in frontier:
            for succ in cover[cur]:
                if succ not in parent:
                    parent[succ] = cur
                    if succ == goal:
                        path = [succ]
                        while path[-1] != start:
                            path.append(parent[path[-1]])
                        return list(reversed(path))
                    nxt.append(succ)
        frontier = nxt
    raise AssertionError("cover path must exist inside a shared component")


def _extract_odd_cycle(walk: list[tuple]) -> OlonWitness:
    """Reduce a closed odd walk (as double-cover nodes) to a simple odd cycle.

    Even sub-loops are spliced out as they appear; since the total parity is
    odd, the surviving loop is odd and visits each node once.
    """
    stack = [(walk[0][0], walk[0][1])]
    position = {walk[0][0]: 0}
    for node, parity in walk[1:]:
        if node in position:
            j = position[node]
            if (parity ^ stack[j][1]) & 1:
                cycle = stack[j:] + [(node, parity)]
                names = tuple(entry[0] for entry in cycle[:-1])
                signs = tuple("-" if (cycle[i + 1][1] ^ cycle[i][1]) & 1 else "+"
                              for i in range(len(cycle) - 1))
                return OlonWitness(names, signs)
            for popped, _ in stack[j + 1:]:
                del position[popped]
            del stack[j + 1:]
        else:
            stack.append((node, parity))
            position[node] = len(stack) - 1
    raise AssertionError("walk was not odd")


def build_dependency_graph(g: GroundProgram) -> DependencyGraph:
    edges = set()
    for rule in g.rules:
        for lit in rule.body:
            edges.add((rule.head, lit.atom))
    return DependencyGraph(frozenset(g.herbrand_base), frozenset(edges))


def reachable_atoms(dep: DependencyGraph, start: Atom) -> frozenset[Atom]:
    """Atoms reachable from ``start`` (reflexively) along dependency edges."""
    adj = dep.successors()
    seen = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for atom in frontier:
            for succ in adj.get(atom, ()):
                if succ not in seen:
                    seen.add(succ)
                    nxt.append(succ)
        frontier = nxt
    return frozenset(seen)


def relevant_subprogram(g: GroundProgram, query: Query) -> GroundProgram:
    """Rules whose head the query reaches in the dependency graph."""
    dep = build_dependency_graph(g)
    keep = reachable_atoms(dep, query.atom)
    return GroundProgram.from_rules(r for r in g.rules if r.head in keep)


def dot_call_graph(graph: CallGraph) -> str:
    lines = ["digraph call_graph {"]
    for node in sorted(graph.nodes):
        lines.append(f'  "{node[0]}/{node[1]}";')
    for src, dst, sign in sorted(graph.edges):
        lines.append(f'  "{src[0]}/{src[1]}" -> "{dst[0]}/{dst[1]}" [label="{sign}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def dot_dependency_graph(dep: DependencyGraph) -> str:
    lines = ["digraph dependency_graph {"]
    for node in sorted(dep.nodes, key=str):
        lines.append(f'  "{node}";')
    for head, body in sorted(dep.edges, key=lambda e: (str(e[0]), str(e[1]))):
        lines.append(f'  "{head}" -> "{body}";')
    lines.append("}")
    return "\n".join(lines) + "\n"

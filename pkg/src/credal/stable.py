"""Stable models: reduct, stability check, and enumeration.

Enumeration restricts the search to candidates of the form
``t(WFM) + (subset of undefined atoms)``, which covers every stable model
because the well-founded model is a lower bound of each of them.  The
undefined part is explored component by component along the atom dependency
graph, so independent choice loops multiply instead of exploding the subset
lattice; every emitted candidate still has to pass the reduct/least-model
stability check against the full program.
"""

from __future__ import annotations

from ._util import strongly_connected_components
from .ground import GroundProgram
from .syntax import Atom, Literal, Rule
from .wfs import IndexedProgram, _wfm_ids

AnswerSet = frozenset  # an answer set is a frozenset of ground Atoms


class UndefinedAtomLimitError(Exception):
    """The well-founded model leaves more atoms undefined than the cap."""

    def __init__(self, count: int, limit: int):
        super().__init__(
            f"{count} atoms are undefined in the well-founded model "
            f"(cap {limit}); raise --max-undefined or query the residual "
            f"of a more specific atom")
        self.count = count
        self.limit = limit


def gl_reduct(g: GroundProgram, interpretation: frozenset[Atom]) -> GroundProgram:
    """Rules whose body holds in the interpretation, negative literals
    removed; the result is a positive program."""
    kept = []
    for rule in g.rules:
        pos = rule.positive_body()
        neg = rule.negative_body()
        if all(b in interpretation for b in pos) and \
           not any(c in interpretation for c in neg):
            kept.append(Rule(rule.head, tuple(Literal(b) for b in pos)))
    return GroundProgram(tuple(sorted(set(kept), key=str)), g.herbrand_base)


def least_model(g: GroundProgram) -> frozenset[Atom]:
    """Least fixpoint of rule application; input must be negation-free."""
    for rule in g.rules:
        if any(l.negated for l in rule.body):
            raise ValueError(f"least_model requires a positive program; "
                             f"rule '{rule}' contains negation")
    derived: set[Atom] = set()
    changed = True
    while changed:
        changed = False
        for rule in g.rules:
            if rule.head not in derived and \
               all(l.atom in derived for l in rule.body):
                derived.add(rule.head)
                changed = True
    return frozenset(derived)


def is_stable(g: GroundProgram, interpretation: frozenset[Atom]) -> bool:
    return frozenset(interpretation) == least_model(gl_reduct(g, frozenset(interpretation)))


def _is_stable_ids(idx: IndexedProgram, candidate: set[int]) -> bool:
    kept = [(h, pos) for h, pos, neg in idx.rules
            if all(b in candidate for b in pos) and not any(c in candidate for c in neg)]
    derived: set[int] = set()
    changed = True
    while changed:
        changed = False
        for head, pos in kept:
            if head not in derived and all(b in derived for b in pos):
                derived.add(head)
                changed = True
    return derived == candidate


def _reduced_undefined_rules(idx, true_ids, false_ids, undef_set):
    """Rules for undefined atoms with decided literals evaluated away."""
    reduced = []
    for head, pos, neg in idx.rules:
        if head not in undef_set:
            continue
        keep_pos, keep_neg = [], []
        drop = False
        for b in pos:
            if b in false_ids:
                drop = True
                break
            if b not in true_ids:
                keep_pos.append(b)
        if drop:
            continue
        for c in neg:
            if c in true_ids:
                drop = True
                break
            if c not in false_ids:
                keep_neg.append(c)
        if drop:
            continue
        reduced.append((head, tuple(keep_pos), tuple(keep_neg)))
    return reduced


def _local_answer_sets(catoms, crules, comp_set, val):
    """Stable subsets of one dependency component, with atoms of earlier
    components already fixed in ``val``."""
    simplified = []
    for head, pos, neg in crules:
        keep_pos, keep_neg = [], []
        drop = False
        for b in pos:
            if b in comp_set:
                keep_pos.append(b)
            elif not val[b]:
                drop = True
                break
        if drop:
            continue
        for c in neg:
            if c in comp_set:
                keep_neg.append(c)
            elif val[c]:
                drop = True
                break
        if drop:
            continue
        simplified.append((head, keep_pos, keep_neg))

    out = []
    for mask in range(1 << len(catoms)):
        chosen = {catoms[j] for j in range(len(catoms)) if mask >> j & 1}
        derived: set[int] = set()
        changed = True
        while changed:
            changed = False
            for head, pos, neg in simplified:
                if head not in derived and not (chosen & set(neg)) and \
                   all(b in derived for b in pos):
                    derived.add(head)
                    changed = True
        if derived == chosen:
            out.append(chosen)
    return out


def iter_answer_sets(g: GroundProgram, max_undefined: int = 24):
    """Yield every stable model, in a deterministic order."""
    idx = IndexedProgram(g)
    true_ids, false_ids = _wfm_ids(idx)
    undef = sorted(set(range(len(idx.atoms))) - true_ids - false_ids)
    if len(undef) > max_undefined:
        raise UndefinedAtomLimitError(len(undef), max_undefined)
    undef_set = set(undef)

    reduced = _reduced_undefined_rules(idx, true_ids, false_ids, undef_set)
    adjacency = {a: [] for a in undef}
    for head, pos, neg in reduced:
        adjacency[head].extend(pos)
        adjacency[head].extend(neg)
    comps = strongly_connected_components(undef, adjacency)
    comps = [sorted(c) for c in comps]
    comp_index = {}
    for ci, comp in enumerate(comps):
        for a in comp:
            comp_index[a] = ci
    rules_by_comp = [[] for _ in comps]
    for rule in reduced:
        rules_by_comp[comp_index[rule[0]]].append(rule)

    val = [None] * len(idx.atoms)
    for i in true_ids:
        val[i] = True
    for i in false_ids:
        val[i] = False

    chosen_total: set[int] = set()

    def rec(ci):
        if ci == len(comps):
            candidate = true_ids | chosen_total
            if _is_stable_ids(idx, candidate):
                yield frozenset(idx.atoms[i] for i in candidate)
            return
        catoms = comps[ci]
        comp_set = set(catoms)
        for choice in _local_answer_sets(catoms, rules_by_comp[ci], comp_set, val):
            for a in catoms:
                val[a] = a in choice
            chosen_total.update(choice)
            yield from rec(ci + 1)
            chosen_total.difference_update(choice)
            for a in catoms:
                val[a] = None

    yield from rec(0)


def enumerate_answer_sets(g: GroundProgram, max_undefined: int = 24) -> frozenset:
    """All stable models of the ground program, as a set of atom sets."""
    return frozenset(iter_answer_sets(g, max_undefined=max_undefined))


def project_answer_sets(answer_sets, atoms: frozenset[Atom]) -> frozenset:
    """Deduplicated intersections of each answer set with ``atoms``."""
    atoms = frozenset(atoms)
    return frozenset(frozenset(a & atoms) for a in answer_sets)

"""Well-founded model via the iterated fixpoint construction.

One step of the iteration derives, relative to the knowledge accumulated so
far, the least set of atoms provable from it and the greatest set of atoms
refutable from it; both sets are folded back in and the step repeats until
nothing changes.  On a finite ground program termination is immediate from
monotonicity.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass

from .ground import GroundProgram
from .syntax import Atom, Rule


@dataclass(frozen=True)
class ThreeValuedInterpretation:
    true_set: frozenset[Atom]
    false_set: frozenset[Atom]

    def __post_init__(self):
        overlap = self.true_set & self.false_set
        if overlap:
            raise ValueError(f"inconsistent interpretation: {sorted(map(str, overlap))}")

    def undefined_in(self, base: frozenset[Atom]) -> frozenset[Atom]:
        return base - self.true_set - self.false_set

    def is_total_on(self, base: frozenset[Atom]) -> bool:
        return not self.undefined_in(base)

    def leq(self, other: "ThreeValuedInterpretation") -> bool:
        """Knowledge order: both truth sets grow."""
        return self.true_set <= other.true_set and self.false_set <= other.false_set


EMPTY_INTERPRETATION = ThreeValuedInterpretation(frozenset(), frozenset())


# ---------------------------------------------------------------------------
# indexed form shared with the stable-model module

class IndexedProgram:
    """Ground program with atoms interned to ints, for the fixpoint loops."""

    __slots__ = ("atoms", "ids", "rules", "by_head")

    def __init__(self, g: GroundProgram):
        self.atoms: list[Atom] = sorted(g.herbrand_base, key=str)
        self.ids: dict[Atom, int] = {a: i for i, a in enumerate(self.atoms)}
        ids = self.ids
        self.rules: list[tuple[int, tuple[int, ...], tuple[int, ...]]] = [
            (ids[r.head],
             tuple(ids[l.atom] for l in r.body if not l.negated),
             tuple(ids[l.atom] for l in r.body if l.negated))
            for r in g.rules
        ]
        self.by_head: dict[int, list[int]] = {}
        for ri, (h, _, _) in enumerate(self.rules):
            self.by_head.setdefault(h, []).append(ri)

    def to_atoms(self, ids) -> frozenset[Atom]:
        return frozenset(self.atoms[i] for i in ids)

    def id_set(self, atoms) -> set[int]:
        # atoms outside the base cannot occur in any rule; ignore them
        return {self.ids[a] for a in atoms if a in self.ids}


def _lfp_ot(idx: IndexedProgram, true_ids: set[int], false_ids: set[int]) -> set[int]:
    """Least fixpoint of one provability step: atoms not already true whose
    derivation needs only the given knowledge and earlier iterates."""
    derived: set[int] = set()
    changed = True
    while changed:
        changed = False
        for head, pos, neg in idx.rules:
            if head in true_ids or head in derived:
                continue
            if all(b in true_ids or b in derived for b in pos) and \
               all(c in false_ids for c in neg):
                derived.add(head)
                changed = True
    return derived


def _gfp_of(idx: IndexedProgram, true_ids: set[int], false_ids: set[int]) -> set[int]:
    """Greatest fixpoint of one refutability step, iterated downward from
    every atom not known true."""
    candidate = {i for i in range(len(idx.atoms)) if i not in true_ids}
    changed = True
    while changed:
        changed = False
        for atom in list(candidate):
            for ri in idx.by_head.get(atom, ()):
                _, pos, neg = idx.rules[ri]
                if all(b not in false_ids and b not in candidate for b in pos) and \
                   all(c not in true_ids for c in neg):
                    # some rule for the atom can still fire: not refutable
                    candidate.discard(atom)
                    changed = True
                    break
    return {a for a in candidate if a not in false_ids}


def _wfm_ids(idx: IndexedProgram, debug: bool = False) -> tuple[set[int], set[int]]:
    true_ids: set[int] = set()
    false_ids: set[int] = set()
    iteration = 0
    while True:
        new_true = _lfp_ot(idx, true_ids, false_ids)
        new_false = _gfp_of(idx, true_ids, false_ids)
        iteration += 1
        if debug:
            print(f"# ifp iteration {iteration}: +{len(new_true)} true, "
                  f"+{len(new_false)} false", file=sys.stderr)
        if not new_true and not new_false:
            return true_ids, false_ids
        true_ids |= new_true
        false_ids |= new_false
        if true_ids & false_ids:
            raise AssertionError("iterated fixpoint produced an inconsistency")


def lfp_ot(g: GroundProgram, interp: ThreeValuedInterpretation) -> frozenset[Atom]:
    idx = IndexedProgram(g)
    return idx.to_atoms(_lfp_ot(idx, idx.id_set(interp.true_set),
                                idx.id_set(interp.false_set)))


def gfp_of(g: GroundProgram, interp: ThreeValuedInterpretation) -> frozenset[Atom]:
    idx = IndexedProgram(g)
    return idx.to_atoms(_gfp_of(idx, idx.id_set(interp.true_set),
                                idx.id_set(interp.false_set)))


def wfm(g: GroundProgram, debug: bool = False) -> ThreeValuedInterpretation:
    """The well-founded model of a ground program."""
    idx = IndexedProgram(g)
    true_ids, false_ids = _wfm_ids(idx, debug=debug)
    return ThreeValuedInterpretation(idx.to_atoms(true_ids), idx.to_atoms(false_ids))


def dynamically_stratified(g: GroundProgram, model: ThreeValuedInterpretation) -> bool:
    """Whether the model is two-valued on the program's atoms."""
    return model.is_total_on(g.herbrand_base)


def wf_reduct(g: GroundProgram, model: ThreeValuedInterpretation) -> GroundProgram:
    """Drop rules with a body literal false in the model; delete body
    literals true in the model from the survivors."""
    kept: list[Rule] = []
    for rule in g.rules:
        body = []
        drop = False
        for lit in rule.body:
            if lit.negated:
                if lit.atom in model.true_set:
                    drop = True
                    break
                if lit.atom in model.false_set:
                    continue
            else:
                if lit.atom in model.false_set:
                    drop = True
                    break
                if lit.atom in model.true_set:
                    continue
            body.append(lit)
        if not drop:
            kept.append(Rule(rule.head, tuple(body)))
    return GroundProgram.from_rules(kept)

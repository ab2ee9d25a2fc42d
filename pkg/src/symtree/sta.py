"""Symbolic k-bounded tree automata.

A rule ``(q1 ... ql, guard, q)`` lets a node with l children whose children
reach ``q1 ... ql`` reach ``q`` when its label satisfies ``guard``.  Boolean
operations are relative to the set of all k-bounded trees; complement goes
through a subset construction over the minterms of each arity's guards.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterable, Optional

from .classical import Fta
from .errors import BoundError, TheoryMismatch
from .theory import TOP, Predicate, Theory, conj, holds
from .tree import Relabeling, Tree


@dataclass(frozen=True)
class StaRule:
    lhs: tuple
    guard: Predicate
    rhs: object

    def __str__(self):
        return f"(({' '.join(map(str, self.lhs))}), {self.guard}, {self.rhs})"


@dataclass(frozen=True)
class Sta:
    k: int
    theory: Theory
    states: tuple
    final: frozenset
    rules: tuple

    @staticmethod
    def build(k: int, theory: Theory, states: Iterable, final: Iterable, rules: Iterable) -> "Sta":
        rules = tuple(r if isinstance(r, StaRule) else StaRule(tuple(r[0]), r[1], r[2]) for r in rules)
        for r in rules:
            if len(r.lhs) > k:
                raise BoundError(f"rule {r} has {len(r.lhs)} children but k = {k}")
        final = tuple(final)
        order = list(states) + [r.rhs for r in rules] + [q for r in rules for q in r.lhs] + list(final)
        return Sta(k, theory, tuple(dict.fromkeys(order)), frozenset(final), rules)

    # -- membership -------------------------------------------------------

    def step(self, label, child_sets: tuple) -> frozenset:
        """States reachable at a node labeled ``label`` whose children reach ``child_sets``."""
        out = set()
        l = len(child_sets)
        for r in self.rules:
            if len(r.lhs) != l or r.rhs in out:
                continue
            if all(q in s for q, s in zip(r.lhs, child_sets)) and holds(r.guard, label):
                out.add(r.rhs)
        return frozenset(out)

    def run(self, t: Tree) -> frozenset:
        if t.rank() > self.k:
            raise BoundError(f"tree of rank {t.rank()} exceeds k = {self.k}")
        return self._run(t)

    def _run(self, t: Tree) -> frozenset:
        self.theory.check_label(t.label)
        return self.step(t.label, tuple(self._run(c) for c in t.children))

    def member(self, t: Tree) -> bool:
        return bool(self.run(t) & self.final)

    def lift(self, k: int) -> "Sta":
        if k < self.k:
            raise BoundError(f"cannot lower the bound from {self.k} to {k}")
        return Sta(k, self.theory, self.states, self.final, self.rules)

    def with_final(self, final: Iterable) -> "Sta":
        return Sta(self.k, self.theory, self.states, frozenset(final), self.rules)

    def guards(self, arity: int) -> list:
        return list(dict.fromkeys(r.guard for r in self.rules if len(r.lhs) == arity))


def sta_member(a: Sta, t: Tree):
    """``(root state set, accepted)`` for ``t``."""
    states = a.run(t)
    return states, bool(states & a.final)


def universal_sta(theory: Theory, k: int, state="all") -> Sta:
    """Automaton for the set of all k-bounded trees."""
    rules = [StaRule((state,) * l, TOP, state) for l in range(k + 1)]
    return Sta.build(k, theory, [state], [state], rules)


def empty_sta(theory: Theory, k: int, state="none") -> Sta:
    return Sta.build(k, theory, [state], [], [])


# ---------------------------------------------------------------------------
# Emptiness
# ---------------------------------------------------------------------------


def productive_witnesses(a: Sta) -> dict:
    """A witness tree for every productive state, in discovery order.

    Each newly productive state records the first rule (in file order) that
    made it productive together with its children's witnesses and a guard
    witness.
    """
    found: dict = {}
    changed = True
    while changed:
        changed = False
        for r in a.rules:
            if r.rhs in found or not all(q in found for q in r.lhs):
                continue
            label = a.theory.witness(r.guard)
            if label is None:
                continue
            found[r.rhs] = Tree(label, [found[q] for q in r.lhs])
            changed = True
    return found


def sta_empty(a: Sta) -> Optional[Tree]:
    """A tree accepted by ``a``, or None when L(a) is empty."""
    for q, t in productive_witnesses(a).items():
        if q in a.final:
            return t
    return None


# ---------------------------------------------------------------------------
# Determinization and Boolean operations
# ---------------------------------------------------------------------------


def determinize(a: Sta) -> tuple:
    """Reachable subset construction.

    Returns ``(sta, subsets)`` where the automaton's states are frozensets of
    states of ``a`` and, for every arity l <= k, every tuple of reachable
    subsets and every minterm of the arity-l guards there is exactly one rule.
    Final states are left empty; callers choose them.
    """
    cells = {}
    grouped = {}
    for l in range(a.k + 1):
        guards = a.guards(l)
        index = {g: i for i, g in enumerate(guards)}
        cells[l] = a.theory.minterms_with_signs(guards)
        grouped[l] = [(r, index[r.guard]) for r in a.rules if len(r.lhs) == l]
    subsets: list = []
    known: set = set()
    rules: list = []
    done: set = set()
    changed = True
    while changed:
        changed = False
        for l in range(a.k + 1):
            for kids in product(list(subsets), repeat=l):
                if (l, kids) in done:
                    continue
                done.add((l, kids))
                for signs, cell in cells[l]:
                    target = frozenset(
                        r.rhs for r, gi in grouped[l]
                        if signs[gi] and all(q in s for q, s in zip(r.lhs, kids))
                    )
                    rules.append(StaRule(kids, cell, target))
                    if target not in known:
                        known.add(target)
                        subsets.append(target)
                        changed = True
    det = Sta.build(a.k, a.theory, subsets, [], rules)
    return det, subsets


def complement(a: Sta) -> Sta:
    """Automaton for (all k-bounded trees) minus L(a)."""
    det, subsets = determinize(a)
    return det.with_final(s for s in subsets if not (s & a.final))


def deterministic_copy(a: Sta) -> Sta:
    det, subsets = determinize(a)
    return det.with_final(s for s in subsets if s & a.final)


def _align(a: Sta, b: Sta) -> tuple:
    if a.theory != b.theory:
        raise TheoryMismatch(f"theory mismatch: {a.theory} vs {b.theory}")
    k = max(a.k, b.k)
    return a.lift(k), b.lift(k)


def intersect(a: Sta, b: Sta) -> Sta:
    a, b = _align(a, b)
    rules = []
    for r1 in a.rules:
        for r2 in b.rules:
            if len(r1.lhs) != len(r2.lhs):
                continue
            guard = conj(r1.guard, r2.guard)
            if a.theory.is_empty(guard):
                continue
            rules.append(StaRule(tuple(zip(r1.lhs, r2.lhs)), guard, (r1.rhs, r2.rhs)))
    final = [(p, q) for p in a.states for q in b.states if p in a.final and q in b.final]
    states = [(p, q) for p in a.states for q in b.states]
    return Sta.build(a.k, a.theory, states, final, rules)


def union(a: Sta, b: Sta) -> Sta:
    a, b = _align(a, b)
    rules = [StaRule(tuple((1, q) for q in r.lhs), r.guard, (1, r.rhs)) for r in a.rules]
    rules += [StaRule(tuple((2, q) for q in r.lhs), r.guard, (2, r.rhs)) for r in b.rules]
    states = [(1, q) for q in a.states] + [(2, q) for q in b.states]
    final = [(1, q) for q in a.states if q in a.final] + [(2, q) for q in b.states if q in b.final]
    return Sta.build(a.k, a.theory, states, final, rules)


def sta_bool(op: str, *args: Sta) -> Sta:
    """``op`` is one of not/complement, and/intersect, or/union."""
    if op in ("not", "complement"):
        if len(args) != 1:
            raise ValueError("complement takes one automaton")
        return complement(args[0])
    if op in ("and", "intersect"):
        out = args[0]
        for b in args[1:]:
            out = intersect(out, b)
        return out
    if op in ("or", "union"):
        out = args[0]
        for b in args[1:]:
            out = union(out, b)
        return out
    raise ValueError(f"unknown Boolean operation {op!r}")


def sta_included(a: Sta, b: Sta) -> Optional[Tree]:
    """None when L(a) ⊆ L(b); otherwise a tree in L(a) \\ L(b)."""
    a, b = _align(a, b)
    return sta_empty(intersect(a, complement(b)))


def sta_equivalent(a: Sta, b: Sta) -> bool:
    return sta_included(a, b) is None and sta_included(b, a) is None


# ---------------------------------------------------------------------------
# Relabeling characterization
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GuardSymbol:
    """The ranked symbol ``[guard, rank]``."""

    guard: Predicate
    rank: int

    def __str__(self):
        return f"[{self.guard},{self.rank}]"


def sta_to_fta(a: Sta) -> tuple:
    """``(Fta, Relabeling)`` whose relabeled language is L(a)."""
    alphabet = {}
    trans = []
    for r in a.rules:
        sym = GuardSymbol(r.guard, len(r.lhs))
        alphabet[sym] = len(r.lhs)
        trans.append((sym, r.lhs, r.rhs))
    fta = Fta.build(a.states, alphabet, trans, a.final)
    tau = Relabeling.of({(sym, rank): sym.guard for sym, rank in alphabet.items()}, a.theory)
    return fta, tau


def fta_to_sta(fta: Fta, tau: Relabeling, k: int) -> Sta:
    """Sta recognizing ``tau(L(fta))``."""
    if fta.max_rank() > k:
        raise BoundError(f"alphabet rank {fta.max_rank()} exceeds k = {k}")
    ranks = fta.ranks
    rules = [StaRule(lhs, tau.target(sym, ranks[sym]), q)
             for sym, lhs, q in sorted(fta.transitions, key=repr)]
    return Sta.build(k, tau.theory, fta.states, fta.final, rules)


def format_state(q) -> str:
    """Stable printable name for generated states (pairs, subsets, tags)."""
    if isinstance(q, frozenset):
        return "{" + ",".join(sorted(format_state(s) for s in q)) + "}"
    if isinstance(q, tuple):
        return "<" + ",".join(format_state(s) for s in q) + ">"
    return str(q)


def rename_states(a: Sta) -> Sta:
    names = {q: format_state(q) for q in a.states}
    rules = [StaRule(tuple(names[q] for q in r.lhs), r.guard, names[r.rhs]) for r in a.rules]
    return Sta.build(a.k, a.theory, [names[q] for q in a.states],
                     [names[q] for q in a.states if q in a.final], rules)

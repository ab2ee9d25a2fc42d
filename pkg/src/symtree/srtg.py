"""Symbolic regular tree grammars.

A rule ``q -> u`` has a right-hand side ``u`` whose nodes are labeled with
predicates and whose leaves may be state references.  Deriving replaces a
state by a right-hand side and instantiates each predicate node with a label
satisfying it.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Optional

from .classical import Rtg, fta_to_rtg, reduce_rules, rhs_states, rtg_normalize, rtg_to_fta, state_leaf
from .errors import BoundError
from .sta import GuardSymbol, Sta, fta_to_sta, sta_to_fta
from .theory import TOP, Predicate, Theory
from .tree import Relabeling, StateRef, Tree, replace_at, sample_label


@dataclass(frozen=True)
class Srtg:
    k: int
    theory: Theory
    states: tuple
    init: object
    rules: tuple             # ((q, rhs), ...)

    @staticmethod
    def build(k: int, theory: Theory, states: Iterable, init, rules: Iterable) -> "Srtg":
        rules = tuple((q, rhs) for q, rhs in rules)
        for q, rhs in rules:
            if rhs.rank() > k:
                raise BoundError(f"rule for {q} has rank {rhs.rank()} but k = {k}")
        order = [init] + list(states) + [q for q, _ in rules] + [s for _, r in rules for s in rhs_states(r)]
        return Srtg(k, theory, tuple(dict.fromkeys(order)), init, rules)

    def rules_for(self, q) -> list:
        return [rhs for p, rhs in self.rules if p == q]

    def predicates(self) -> list:
        return [n.label for _, rhs in self.rules for n in rhs.nodes() if not isinstance(n.label, StateRef)]

    def member(self, t: Tree) -> bool:
        return srtg_to_sta(self).member(t)


def pred_node(phi: Predicate, *children) -> Tree:
    return Tree(phi, children)


def universal_srtg(theory: Theory, k: int, state="all") -> Srtg:
    rules = [(state, Tree(TOP, [state_leaf(state)] * l)) for l in range(k + 1)]
    return Srtg.build(k, theory, [state], state, rules)


def empty_srtg(theory: Theory, k: int, state="none") -> Srtg:
    return Srtg(k, theory, (state,), state, ())


# ---------------------------------------------------------------------------
# Derivation
# ---------------------------------------------------------------------------


def _state_positions(t: Tree) -> list:
    return [w for w in t.positions() if isinstance(_at(t, w).label, StateRef)]


def _at(t: Tree, w) -> Tree:
    for i in w:
        t = t.children[i - 1]
    return t


def _instantiate(g: Srtg, u: Tree, pick) -> Optional[Tree]:
    if isinstance(u.label, StateRef):
        return u
    label = pick(u.label)
    if label is None:
        return None
    kids = []
    for c in u.children:
        k = _instantiate(g, c, pick)
        if k is None:
            return None
        kids.append(k)
    return Tree(label, kids)


def srtg_derive(g: Srtg, sentential: Tree) -> list:
    """All one-step successors of a sentential form, one per (state position, rule).

    Predicate nodes are instantiated with the theory's canonical witness;
    rules with an unsatisfiable predicate are skipped.
    """
    out = []
    for w in _state_positions(sentential):
        q = _at(sentential, w).label.state
        for rhs in g.rules_for(q):
            u = _instantiate(g, rhs, g.theory.witness)
            if u is not None:
                out.append(replace_at(sentential, w, u))
    return out


def srtg_sample(g: Srtg, rng: random.Random, max_depth: int = 6, attempts: int = 50) -> Optional[Tree]:
    """A random terminal tree of L(g), or None when every attempt ran out of depth.

    Rule choice is uniform among the feasible rules of a state; an attempt
    that would exceed ``max_depth`` is abandoned, never truncated.
    """
    feasible = {q: [r for r in g.rules_for(q) if all(not g.theory.is_empty(p) for p in _preds(r))]
                for q in g.states}

    class _Abandon(Exception):
        pass

    def expand(q, depth):
        options = feasible.get(q, [])
        if not options or depth > max_depth:
            raise _Abandon
        return build(rng.choice(options), depth)

    def build(u: Tree, depth):
        if isinstance(u.label, StateRef):
            return expand(u.label.state, depth)
        if depth > max_depth:
            raise _Abandon
        label = sample_label(g.theory, u.label, rng)
        return Tree(label, [build(c, depth + 1) for c in u.children])

    for _ in range(attempts):
        try:
            return expand(g.init, 1)
        except _Abandon:
            continue
    return None


def _preds(u: Tree) -> list:
    return [n.label for n in u.nodes() if not isinstance(n.label, StateRef)]


# ---------------------------------------------------------------------------
# Clean, reduced, normal form
# ---------------------------------------------------------------------------


def is_clean(g: Srtg) -> bool:
    return all(not g.theory.is_empty(p) for p in g.predicates())


def is_normal(g: Srtg) -> bool:
    for _, rhs in g.rules:
        if isinstance(rhs.label, StateRef):
            return False
        if any(not isinstance(c.label, StateRef) for c in rhs.children):
            return False
    return True


def is_reduced(g: Srtg) -> bool:
    """Every state with a rule is reachable from the initial state and productive."""
    states = {q for q, _ in g.rules}
    from .classical import productive_states, reachable_states
    productive = productive_states(g.rules, states)
    reach = reachable_states(g.rules, g.init)
    used = states | {s for _, r in g.rules for s in rhs_states(r)}
    return all(q in productive and q in reach for q in used)


def srtg_clean(g: Srtg) -> Srtg:
    rules = [(q, rhs) for q, rhs in g.rules if all(not g.theory.is_empty(p) for p in _preds(rhs))]
    return Srtg(g.k, g.theory, g.states, g.init, tuple(rules))


def srtg_reduce(g: Srtg) -> Srtg:
    rules = reduce_rules(list(g.rules), g.init)
    if not rules:
        return empty_srtg(g.theory, g.k, g.init)
    used = [g.init] + [q for q, _ in rules] + [s for _, r in rules for s in rhs_states(r)]
    return Srtg(g.k, g.theory, tuple(dict.fromkeys(used)), g.init, tuple(rules))


def srtg_to_rtg(g: Srtg) -> tuple:
    """``(Rtg, Relabeling)`` with symbols ``[φ,l]``; the relabeled language is L(g)."""
    alphabet: dict = {}

    def conv(u: Tree) -> Tree:
        if isinstance(u.label, StateRef):
            return u
        sym = GuardSymbol(u.label, len(u.children))
        alphabet[sym] = len(u.children)
        return Tree(sym, [conv(c) for c in u.children])

    rules = [(q, conv(rhs)) for q, rhs in g.rules]
    rtg = Rtg.build(g.states, alphabet, g.init, rules)
    tau = Relabeling.of({(s, r): s.guard for s, r in alphabet.items()}, g.theory)
    return rtg, tau


def rtg_to_srtg(g: Rtg, tau: Relabeling, k: int) -> Srtg:
    ranks = g.ranks
    if ranks and max(ranks.values()) > k:
        raise BoundError(f"alphabet rank {max(ranks.values())} exceeds k = {k}")

    def conv(u: Tree) -> Tree:
        if isinstance(u.label, StateRef):
            return u
        return Tree(tau.target(u.label, len(u.children)), [conv(c) for c in u.children])

    return Srtg.build(k, tau.theory, g.states, g.init, [(q, conv(rhs)) for q, rhs in g.rules])


def srtg_normalize(g: Srtg) -> Srtg:
    """Equivalent clean, reduced grammar in normal form ``q -> φ(q1, ..., ql)``."""
    rtg, tau = srtg_to_rtg(srtg_clean(g))
    normal = rtg_normalize(rtg)
    if not normal.rules:
        return empty_srtg(g.theory, g.k, g.init)
    return rtg_to_srtg(normal, tau, g.k)


# ---------------------------------------------------------------------------
# Grammars and automata
# ---------------------------------------------------------------------------


@lru_cache(maxsize=256)
def srtg_to_sta(g: Srtg) -> Sta:
    rtg, tau = srtg_to_rtg(srtg_clean(g))
    return fta_to_sta(rtg_to_fta(rtg), tau, g.k)


def sta_to_srtg(a: Sta, init="S") -> Srtg:
    fta, tau = sta_to_fta(a)
    return rtg_to_srtg(fta_to_rtg(fta, init), tau, a.k)


def srtg_sta_convert(x):
    if isinstance(x, Srtg):
        return srtg_to_sta(x)
    if isinstance(x, Sta):
        return sta_to_srtg(x)
    raise TypeError(f"expected Srtg or Sta, got {type(x).__name__}")

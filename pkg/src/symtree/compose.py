"""Syntactic composition of symbolic tree transducers.

``M ; N`` is built by running N symbolically over the right-hand sides of M.
A configuration pairs an accumulated guard θ over M's input labels with a
sentential tree whose pending leaves ``p(u)`` still have to be processed by
N.  Two kinds of steps exist:

* ``p(q(x_i))`` becomes the pair leaf ``<p,q>(x_i)``;
* ``p(f(u1..ul))`` is rewritten with an N-rule ``p(ψ(x1..xl)) -> v``:
  the tree becomes ``f∘v`` with pending leaves ``p'(u_j)`` and the guard
  becomes ``θ ∧ f⁻¹(ψ)``.

Configurations with an unsatisfiable guard are discarded.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .errors import TheoryMismatch
from .stt import Stt, SttRule, is_deterministic, is_linear, is_nondeleting, is_total, stt_apply
from .theory import Predicate, compose_fn, conj
from .tree import Call, Tree


@dataclass(frozen=True)
class Pending:
    """N-state ``state`` still to be run over the M-rhs fragment ``fragment``."""

    state: object
    fragment: Tree

    def __str__(self):
        from .tree import format_tree
        return f"{self.state}[{format_tree(self.fragment)}]"


@dataclass(frozen=True)
class PairLeaf:
    p: object
    q: object
    index: int

    def __str__(self):
        return f"<{self.p},{self.q}>(x{self.index})"


@dataclass(frozen=True)
class SymConfig:
    guard: Predicate
    tree: Tree

    def is_terminal(self) -> bool:
        return _leftmost_pending(self.tree) is None


def _leftmost_pending(t: Tree, w=()):
    if isinstance(t.label, Pending):
        return w
    for i, c in enumerate(t.children, start=1):
        found = _leftmost_pending(c, w + (i,))
        if found is not None:
            return found
    return None


def _at(t: Tree, w) -> Tree:
    for i in w:
        t = t.children[i - 1]
    return t


def _replace(t: Tree, w, new: Tree) -> Tree:
    if not w:
        return new
    kids = list(t.children)
    kids[w[0] - 1] = _replace(kids[w[0] - 1], w[1:], new)
    return Tree(t.label, kids)


def _precompose(f, v: Tree, fragments: tuple) -> Tree:
    """``f∘v`` with N-calls ``p'(x_j)`` turned into pending leaves over ``fragments[j]``."""
    if isinstance(v.label, Call):
        return Tree(Pending(v.label.state, fragments[v.label.index - 1]))
    return Tree(compose_fn(f, v.label), [_precompose(f, c, fragments) for c in v.children])


def sym_step(m: Stt, n: Stt, c: SymConfig) -> list:
    """All successors of ``c`` obtained by rewriting its leftmost pending leaf."""
    w = _leftmost_pending(c.tree)
    if w is None:
        return []
    pend = _at(c.tree, w).label
    frag = pend.fragment
    if isinstance(frag.label, Call):
        leaf = Tree(PairLeaf(pend.state, frag.label.state, frag.label.index))
        return [SymConfig(c.guard, _replace(c.tree, w, leaf))]
    f = frag.label
    out = []
    for rule in n.rules_for(pend.state, len(frag.children)):
        guard = conj(c.guard, m.in_theory.preimage(f, rule.guard))
        if m.in_theory.is_empty(guard):
            continue
        new = _precompose(f, rule.rhs, frag.children)
        out.append(SymConfig(guard, _replace(c.tree, w, new)))
    return out


def _emit(t: Tree) -> Tree:
    if isinstance(t.label, PairLeaf):
        return Tree(Call((t.label.p, t.label.q), t.label.index))
    return Tree(t.label, [_emit(c) for c in t.children])


def terminal_configs(m: Stt, n: Stt, seed: SymConfig) -> list:
    """Every terminal configuration reachable from ``seed``, in discovery order."""
    out = []
    seen = set()
    stack = [seed]
    while stack:
        c = stack.pop()
        if c in seen:
            continue
        seen.add(c)
        if c.is_terminal():
            out.append(c)
            continue
        stack.extend(reversed(sym_step(m, n, c)))
    return out


def syntactic_compose(m: Stt, n: Stt) -> Stt:
    """The transducer ``M ; N`` over states ``(p, q)`` with p from N and q from M."""
    if m.out_theory != n.in_theory:
        raise TheoryMismatch(f"output theory {m.out_theory} of M differs from input theory {n.in_theory} of N")
    k = max(m.k, n.k)
    rules: list = []
    seen: set = set()
    for rho in m.rules:
        for p in n.states:
            seed = SymConfig(rho.guard, Tree(Pending(p, rho.rhs)))
            if m.in_theory.is_empty(rho.guard):
                continue
            for c in terminal_configs(m, n, seed):
                rule = SttRule((p, rho.state), rho.arity, c.guard, _emit(c.tree))
                if rule not in seen:
                    seen.add(rule)
                    rules.append(rule)
    init = (n.init, m.init)
    reach = {init}
    frontier = [init]
    while frontier:
        s = frontier.pop()
        for r in rules:
            if r.state == s:
                for cl in r.calls():
                    if cl.state not in reach:
                        reach.add(cl.state)
                        frontier.append(cl.state)
    rules = [r for r in rules if r.state in reach]
    states = [(p, q) for p in n.states for q in m.states if (p, q) in reach]
    return Stt.build(k, m.in_theory, n.out_theory, states, init, rules)


# ---------------------------------------------------------------------------
# When the composite computes the composition
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CompositionGuarantee:
    guaranteed: bool
    reason_a: Optional[str]
    reason_b: Optional[str]

    def __str__(self):
        if self.guaranteed:
            return f"Guaranteed({self.reason_a}, {self.reason_b})"
        return "NotGuaranteed"


def compose_semantics_check(m: Stt, n: Stt) -> CompositionGuarantee:
    """Sufficient condition: (M deterministic or N linear) and (M total or N nondeleting)."""
    a = "M deterministic" if is_deterministic(m) else ("N linear" if is_linear(n) else None)
    b = "M total" if is_total(m) else ("N nondeleting" if is_nondeleting(n) else None)
    return CompositionGuarantee(a is not None and b is not None, a, b)


def compose_apply(m: Stt, n: Stt, t: Tree) -> frozenset:
    """Semantic composition: every N-output of every M-output of ``t``."""
    out: set = set()
    for mid in stt_apply(m, t):
        out.update(stt_apply(n, mid))
    return frozenset(out)

"""Symbolic tree transducers.

A rule ``q(φ(x1, ..., xl)) -> u`` fires at a node with l children whose label
satisfies φ.  The right-hand side ``u`` has label functions at its nodes and
``Call(q', i)`` leaves; every function is evaluated at the input label.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterable, Optional

from .classical import Tdtt
from .errors import BoundError, CapabilityError, PartialFunctionError
from .sta import Sta
from .theory import IDENTITY, Const, FiniteTheory, FnTerm, Predicate, Theory, disj, eq, holds, neg
from .tree import Call, Tree, format_tree


@dataclass(frozen=True)
class SttRule:
    state: object
    arity: int
    guard: Predicate
    rhs: Tree

    @property
    def lhs(self) -> tuple:
        return self.state, self.arity

    def calls(self) -> list:
        return [n.label for n in self.rhs.nodes() if isinstance(n.label, Call)]

    def functions(self) -> list:
        return [n.label for n in self.rhs.nodes() if not isinstance(n.label, Call)]

    def __str__(self):
        xs = ",".join(f"x{i}" for i in range(1, self.arity + 1))
        head = f"{self.guard}({xs})" if self.arity else f"{self.guard}"
        return f"{self.state}({head}) -> {format_tree(self.rhs)}"


@dataclass(frozen=True)
class Stt:
    k: int
    in_theory: Theory
    out_theory: Theory
    states: tuple
    init: object
    rules: tuple

    @staticmethod
    def build(k, in_theory, out_theory, states, init, rules) -> "Stt":
        rules = tuple(r if isinstance(r, SttRule) else SttRule(*r) for r in rules)
        for r in rules:
            if r.arity > k or r.rhs.rank() > k:
                raise BoundError(f"rule {r} exceeds k = {k}")
            for c in r.calls():
                if not 1 <= c.index <= r.arity:
                    raise BoundError(f"rule {r} calls x{c.index} but has arity {r.arity}")
            for n in r.rhs.nodes():
                if isinstance(n.label, Call) and n.children:
                    raise BoundError(f"call leaf {n.label} has children in rule {r}")
                if not isinstance(n.label, (Call, FnTerm)):
                    raise TypeError(f"rhs nodes must be functions or calls, got {n.label!r}")
        order = [init] + list(states) + [r.state for r in rules] + [c.state for r in rules for c in r.calls()]
        return Stt(k, in_theory, out_theory, tuple(dict.fromkeys(order)), init, rules)

    def rules_for(self, q, arity: int) -> list:
        return [r for r in self.rules if r.state == q and r.arity == arity]

    def with_init(self, q) -> "Stt":
        return Stt(self.k, self.in_theory, self.out_theory, self.states, q, self.rules)

    def apply(self, t: Tree, state=None, max_outputs: Optional[int] = None) -> frozenset:
        return stt_apply(self, t, state, max_outputs)


def call(q, i: int) -> Tree:
    return Tree(Call(q, i))


def fn_node(f: FnTerm, *children) -> Tree:
    return Tree(f, children)


# ---------------------------------------------------------------------------
# Semantics
# ---------------------------------------------------------------------------


def stt_apply(m: Stt, t: Tree, state=None, max_outputs: Optional[int] = None) -> frozenset:
    """All outputs ``{ζ : q(t) ⇒* ζ}``; ``state`` defaults to the initial state."""
    if t.rank() > m.k:
        raise BoundError(f"input of rank {t.rank()} exceeds k = {m.k}")
    memo: dict = {}
    out = _apply(m, m.init if state is None else state, t, memo)
    if max_outputs is not None and len(out) > max_outputs:
        out = frozenset(sorted(out, key=format_tree)[:max_outputs])
    return out


def _apply(m: Stt, q, t: Tree, memo: dict) -> frozenset:
    key = (q, t)
    if key in memo:
        return memo[key]
    m.in_theory.check_label(t.label)
    out: set = set()
    for r in m.rules:
        if r.state != q or r.arity != len(t.children) or not holds(r.guard, t.label):
            continue
        out.update(_instantiate(m, r, r.rhs, t, memo))
    memo[key] = frozenset(out)
    return memo[key]


def _instantiate(m: Stt, rule: SttRule, u: Tree, t: Tree, memo: dict) -> set:
    if isinstance(u.label, Call):
        return set(_apply(m, u.label.state, t.children[u.label.index - 1], memo))
    value = u.label.apply(t.label)
    if value is None:
        raise PartialFunctionError(f"{u.label} is undefined at {t.label} in rule {rule}")
    kid_sets = [_instantiate(m, rule, c, t, memo) for c in u.children]
    return {Tree(value, kids) for kids in product(*kid_sets)}


def rewrite_outputs(m: Stt, t: Tree, state=None) -> frozenset:
    """Outputs by literal rewriting of sentential forms, used as a cross-check.

    A sentential form is a tree whose leaves may be ``("pending", q, subtree)``
    markers; the leftmost one is rewritten at every step.
    """
    start = _Pending(m.init if state is None else state, t)
    done: set = set()
    stack = [Tree(start)]
    seen = set()
    while stack:
        form = stack.pop()
        if form in seen:
            continue
        seen.add(form)
        w = _first_pending(form)
        if w is None:
            done.add(form)
            continue
        pend = _at(form, w).label
        for r in m.rules_for(pend.state, len(pend.input.children)):
            if holds(r.guard, pend.input.label):
                stack.append(_replace(form, w, _expand(r.rhs, pend.input)))
    return frozenset(done)


@dataclass(frozen=True)
class _Pending:
    state: object
    input: Tree


def _expand(u: Tree, t: Tree) -> Tree:
    if isinstance(u.label, Call):
        return Tree(_Pending(u.label.state, t.children[u.label.index - 1]))
    value = u.label.apply(t.label)
    if value is None:
        raise PartialFunctionError(f"{u.label} is undefined at {t.label}")
    return Tree(value, [_expand(c, t) for c in u.children])


def _first_pending(t: Tree, w=()):
    if isinstance(t.label, _Pending):
        return w
    for i, c in enumerate(t.children, start=1):
        found = _first_pending(c, w + (i,))
        if found is not None:
            return found
    return None


def _at(t: Tree, w):
    for i in w:
        t = t.children[i - 1]
    return t


def _replace(t: Tree, w, new: Tree) -> Tree:
    if not w:
        return new
    kids = list(t.children)
    kids[w[0] - 1] = _replace(kids[w[0] - 1], w[1:], new)
    return Tree(t.label, kids)


# ---------------------------------------------------------------------------
# Properties
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SttProps:
    linear: bool
    nondeleting: bool
    deterministic: bool
    total: bool
    simple: bool
    alphabetic: bool

    def flags(self) -> dict:
        return dict(self.__dict__)


def _var_counts(r: SttRule) -> list:
    counts = [0] * (r.arity + 1)
    for c in r.calls():
        counts[c.index] += 1
    return counts[1:]


def is_linear(m: Stt) -> bool:
    return all(n <= 1 for r in m.rules for n in _var_counts(r))


def is_nondeleting(m: Stt) -> bool:
    return all(n >= 1 for r in m.rules for n in _var_counts(r))


def is_deterministic(m: Stt) -> bool:
    from .theory import conj
    groups: dict = {}
    for r in m.rules:
        groups.setdefault(r.lhs, []).append(r)
    for rules in groups.values():
        for i, r1 in enumerate(rules):
            for r2 in rules[i + 1:]:
                if not m.in_theory.is_empty(conj(r1.guard, r2.guard)):
                    return False
    return True


def is_total(m: Stt) -> bool:
    for q in m.states:
        for l in range(m.k + 1):
            cover = disj(*[r.guard for r in m.rules_for(q, l)])
            if not m.in_theory.is_empty(neg(cover)):
                return False
    return True


def is_simple(m: Stt) -> bool:
    return all(len(r.functions()) == 1 for r in m.rules)


def non_simple_rules(m: Stt) -> list:
    return [r for r in m.rules if len(r.functions()) != 1]


def non_linear_rules(m: Stt) -> list:
    return [r for r in m.rules if any(n > 1 for n in _var_counts(r))]


def is_alphabetic(m: Stt) -> bool:
    ins, outs = m.in_theory, m.out_theory
    if not (isinstance(ins, FiniteTheory) and isinstance(outs, FiniteTheory)):
        return False
    in_rank, out_rank = ins.rank_of, outs.rank_of
    for r in m.rules:
        den = ins.denotation(r.guard)
        if len(den) != 1:
            return False
        sym = next(iter(den))
        if in_rank.get(sym) != r.arity:
            return False
        for n in r.rhs.nodes():
            if isinstance(n.label, Call):
                continue
            if not isinstance(n.label, Const) or out_rank.get(n.label.value) != len(n.children):
                return False
    return True


def stt_props(m: Stt) -> SttProps:
    return SttProps(
        linear=is_linear(m),
        nondeleting=is_nondeleting(m),
        deterministic=is_deterministic(m),
        total=is_total(m),
        simple=is_simple(m),
        alphabetic=is_alphabetic(m),
    )


# ---------------------------------------------------------------------------
# The identity transducer of an automaton
# ---------------------------------------------------------------------------


def identity_stt(a: Sta, init="=init") -> Stt:
    """Transducer computing the identity on L(a).

    Each automaton rule ``(q1 ... ql, φ, q)`` becomes
    ``q(φ(x1..xl)) -> id(q1(x1), ..., ql(xl))``.  A fresh initial state gets
    copies of the rules of every final state, so the transducer as a whole
    computes the identity restricted to L(a); ``stt_apply(_, t, state=q)``
    gives the identity on L(a, q).
    """
    while init in a.states:
        init = init + "'"
    rules = []
    for r in a.rules:
        rhs = Tree(IDENTITY, [call(q, i) for i, q in enumerate(r.lhs, start=1)])
        rules.append(SttRule(r.rhs, len(r.lhs), r.guard, rhs))
    for r in a.rules:
        if r.rhs in a.final:
            rhs = Tree(IDENTITY, [call(q, i) for i, q in enumerate(r.lhs, start=1)])
            rules.append(SttRule(init, len(r.lhs), r.guard, rhs))
    return Stt.build(a.k, a.theory, a.theory, list(a.states), init, rules)


# ---------------------------------------------------------------------------
# Alphabetic transducers and classical top-down transducers
# ---------------------------------------------------------------------------


def stt_to_tdtt(m: Stt) -> Tdtt:
    if not is_alphabetic(m):
        raise CapabilityError("only alphabetic transducers have a classical top-down view")

    def conv(u: Tree) -> Tree:
        if isinstance(u.label, Call):
            return u
        return Tree(u.label.value, [conv(c) for c in u.children])

    rules = []
    for r in m.rules:
        sym = next(iter(m.in_theory.denotation(r.guard)))
        rules.append((r.state, sym, conv(r.rhs)))
    return Tdtt(m.states, m.in_theory.ranks, m.out_theory.ranks, m.init, tuple(rules))


def tdtt_to_stt(t: Tdtt, k: Optional[int] = None) -> Stt:
    ins = dict(t.input_alphabet)
    outs = dict(t.output_alphabet)
    if k is None:
        k = max(list(ins.values()) + list(outs.values()) + [0])
    in_theory = FiniteTheory.of(ins, ins)
    out_theory = FiniteTheory.of(outs, outs)

    def conv(u: Tree) -> Tree:
        if isinstance(u.label, Call):
            return u
        return Tree(Const(u.label), [conv(c) for c in u.children])

    rules = [SttRule(q, ins[sym], eq(sym), conv(rhs)) for q, sym, rhs in t.rules]
    return Stt.build(k, in_theory, out_theory, t.states, t.init, rules)


def alphabetic_bridge(x):
    """Convert an alphabetic Stt to a Tdtt and a Tdtt back to an Stt."""
    if isinstance(x, Stt):
        return stt_to_tdtt(x)
    if isinstance(x, Tdtt):
        return tdtt_to_stt(x)
    raise TypeError(f"expected Stt or Tdtt, got {type(x).__name__}")


def rename_states(m: Stt, names: Optional[dict] = None) -> Stt:
    from .sta import format_state
    names = names or {q: format_state(q) for q in m.states}

    def conv(u: Tree) -> Tree:
        if isinstance(u.label, Call):
            return Tree(Call(names[u.label.state], u.label.index))
        return Tree(u.label, [conv(c) for c in u.children])

    rules = [SttRule(names[r.state], r.arity, r.guard, conv(r.rhs)) for r in m.rules]
    return Stt.build(m.k, m.in_theory, m.out_theory, [names[q] for q in m.states], names[m.init], rules)

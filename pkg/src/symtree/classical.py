"""Classical finite-state tree automata, regular tree grammars and top-down
tree transducers over finite ranked alphabets.

These are the targets of the relabeling characterizations and double as a
reference backend for the symbolic constructions.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterator, Optional

from .errors import DomainError, FormatError
from .tree import Call, StateRef, Tree, format_tree


def _check_alphabet(alphabet: dict):
    for sym, rank in alphabet.items():
        if not isinstance(rank, int) or rank < 0:
            raise FormatError(f"bad rank {rank!r} for symbol {sym!r}")


@dataclass(frozen=True)
class Fta:
    """Bottom-up nondeterministic tree automaton.

    ``transitions`` holds ``(symbol, (q1, ..., ql), q)`` triples.
    """

    states: tuple
    alphabet: tuple          # ((symbol, rank), ...)
    transitions: frozenset
    final: frozenset

    @staticmethod
    def build(states, alphabet, transitions, final) -> "Fta":
        alpha = dict(alphabet)
        _check_alphabet(alpha)
        trans = frozenset((s, tuple(lhs), q) for s, lhs, q in transitions)
        for sym, lhs, q in trans:
            if sym not in alpha:
                raise FormatError(f"transition symbol {sym!r} is not in the alphabet")
            if len(lhs) != alpha[sym]:
                raise FormatError(f"transition for {sym}/{alpha[sym]} has {len(lhs)} source states")
        states = tuple(dict.fromkeys(list(states) + [q for _, lhs, q in trans] +
                                     [p for _, lhs, _ in trans for p in lhs] + list(final)))
        return Fta(states, tuple(alpha.items()), trans, frozenset(final))

    @property
    def ranks(self) -> dict:
        return dict(self.alphabet)

    def max_rank(self) -> int:
        return max((r for _, r in self.alphabet), default=0)

    def _by_symbol(self) -> dict:
        table: dict = {}
        for sym, lhs, q in self.transitions:
            table.setdefault(sym, []).append((lhs, q))
        return table

    def run(self, t: Tree, _table=None) -> frozenset:
        """States reachable at the root of ``t``."""
        table = self._by_symbol() if _table is None else _table
        ranks = self.ranks
        if t.label not in ranks:
            raise DomainError(f"symbol {t.label!r} is not in the alphabet")
        if ranks[t.label] != len(t.children):
            raise FormatError(f"symbol {t.label} has rank {ranks[t.label]} but {len(t.children)} children")
        kids = [self.run(c, table) for c in t.children]
        out = set()
        for lhs, q in table.get(t.label, ()):
            if all(p in s for p, s in zip(lhs, kids)):
                out.add(q)
        return frozenset(out)

    def member(self, t: Tree) -> bool:
        return bool(self.run(t) & self.final)

    def witness(self) -> Optional[Tree]:
        """Some accepted tree, or None when the language is empty."""
        found: dict = {}
        changed = True
        while changed:
            changed = False
            for sym, lhs, q in sorted(self.transitions, key=repr):
                if q in found:
                    continue
                if all(p in found for p in lhs):
                    found[q] = Tree(sym, [found[p] for p in lhs])
                    changed = True
        for q in self.states:
            if q in self.final and q in found:
                return found[q]
        return None

    def to_rtg(self) -> "Rtg":
        return fta_to_rtg(self)


@dataclass(frozen=True)
class Rtg:
    """Regular tree grammar; rule right-hand sides are trees with ``StateRef`` leaves."""

    states: tuple
    alphabet: tuple
    init: object
    rules: tuple             # ((q, rhs), ...)

    @staticmethod
    def build(states, alphabet, init, rules) -> "Rtg":
        alpha = dict(alphabet)
        _check_alphabet(alpha)
        rules = tuple((q, rhs) for q, rhs in rules)
        for q, rhs in rules:
            _check_rhs(rhs, alpha)
        states = tuple(dict.fromkeys([init] + list(states) + [q for q, _ in rules] +
                                     [s for _, rhs in rules for s in rhs_states(rhs)]))
        return Rtg(states, tuple(alpha.items()), init, rules)

    @property
    def ranks(self) -> dict:
        return dict(self.alphabet)

    def is_normal(self) -> bool:
        for _, rhs in self.rules:
            if isinstance(rhs.label, StateRef):
                return False
            if any(not isinstance(c.label, StateRef) or c.children for c in rhs.children):
                return False
        return True

    def member(self, t: Tree) -> bool:
        return rtg_to_fta(self).member(t)


def _check_rhs(rhs: Tree, alpha: dict):
    if isinstance(rhs.label, StateRef):
        if rhs.children:
            raise FormatError("a state leaf cannot have children")
        return
    if rhs.label not in alpha:
        raise FormatError(f"rule symbol {rhs.label!r} is not in the alphabet")
    if alpha[rhs.label] != len(rhs.children):
        raise FormatError(f"symbol {rhs.label}/{alpha[rhs.label]} used with {len(rhs.children)} children")
    for c in rhs.children:
        _check_rhs(c, alpha)


def rhs_states(rhs: Tree) -> list:
    return [n.label.state for n in rhs.nodes() if isinstance(n.label, StateRef)]


def state_leaf(q) -> Tree:
    return Tree(StateRef(q))


def productive_states(rules, states) -> set:
    productive: set = set()
    changed = True
    while changed:
        changed = False
        for q, rhs in rules:
            if q not in productive and all(s in productive for s in rhs_states(rhs)):
                productive.add(q)
                changed = True
    return productive


def reachable_states(rules, init) -> set:
    seen = {init}
    stack = [init]
    by_lhs: dict = {}
    for q, rhs in rules:
        by_lhs.setdefault(q, []).append(rhs)
    while stack:
        q = stack.pop()
        for rhs in by_lhs.get(q, ()):
            for s in rhs_states(rhs):
                if s not in seen:
                    seen.add(s)
                    stack.append(s)
    return seen


def _fresh_namer(taken):
    taken = set(taken)
    counter = [0]

    def fresh(base):
        while True:
            name = f"{base}.{counter[0]}"
            counter[0] += 1
            if name not in taken:
                taken.add(name)
                return name
    return fresh


def _flatten_rules(rules, states) -> list:
    """One fresh state per non-state proper subterm; chain rules are kept."""
    fresh = _fresh_namer(states)
    out = []

    def emit(q, rhs):
        kids = []
        for c in rhs.children:
            if isinstance(c.label, StateRef):
                kids.append(c)
            else:
                n = fresh(str(q))
                emit(n, c)
                kids.append(state_leaf(n))
        out.append((q, Tree(rhs.label, kids)))

    for q, rhs in rules:
        if isinstance(rhs.label, StateRef):
            out.append((q, rhs))
        else:
            emit(q, rhs)
    return out


def _eliminate_chains(rules, states) -> list:
    chains: dict = {q: {q} for q in states}
    for q, rhs in rules:
        chains.setdefault(q, {q})
    changed = True
    while changed:
        changed = False
        for q, rhs in rules:
            if isinstance(rhs.label, StateRef):
                target = rhs.label.state
                for src in chains:
                    if q in chains[src] and target not in chains[src]:
                        chains[src].add(target)
                        changed = True
    proper: dict = {}
    for q, rhs in rules:
        if not isinstance(rhs.label, StateRef):
            proper.setdefault(q, []).append(rhs)
    out = []
    for q in chains:
        seen = set()
        for q2 in [s for s in chains if s in chains[q]]:
            for rhs in proper.get(q2, ()):
                if rhs not in seen:
                    seen.add(rhs)
                    out.append((q, rhs))
    return out


def reduce_rules(rules, init) -> list:
    """Drop unproductive then unreachable states, in that order."""
    states = {q for q, _ in rules}
    productive = productive_states(rules, states)
    rules = [(q, rhs) for q, rhs in rules
             if q in productive and all(s in productive for s in rhs_states(rhs))]
    reach = reachable_states(rules, init)
    return [(q, rhs) for q, rhs in rules if q in reach]


def rtg_normalize(g: Rtg) -> Rtg:
    """Equivalent reduced grammar whose rules all read ``q -> σ(q1, ..., ql)``."""
    rules = _flatten_rules(g.rules, g.states)
    states = list(dict.fromkeys(list(g.states) + [q for q, _ in rules]))
    rules = _eliminate_chains(rules, states)
    rules = reduce_rules(rules, g.init)
    if not rules:
        return Rtg((g.init,), g.alphabet, g.init, ())
    used = [g.init] + [q for q, _ in rules]
    return Rtg(tuple(dict.fromkeys(used)), g.alphabet, g.init, tuple(rules))


def rtg_to_fta(g: Rtg) -> Fta:
    n = g if g.is_normal() else rtg_normalize(g)
    trans = [(rhs.label, tuple(c.label.state for c in rhs.children), q) for q, rhs in n.rules]
    return Fta.build(n.states, dict(n.alphabet), trans, {n.init})


def fta_to_rtg(a: Fta, init="S") -> Rtg:
    fresh = _fresh_namer(a.states)
    start = init if init not in a.states else fresh(init)
    rules = []
    ordered = sorted(a.transitions, key=repr)
    for sym, lhs, q in ordered:
        rules.append((q, Tree(sym, [state_leaf(p) for p in lhs])))
    for sym, lhs, q in ordered:
        if q in a.final:
            rules.append((start, Tree(sym, [state_leaf(p) for p in lhs])))
    return Rtg.build(a.states, dict(a.alphabet), start, rules)


def rtg_fta_convert(x):
    """Convert a grammar to an automaton and vice versa."""
    if isinstance(x, Rtg):
        return rtg_to_fta(x)
    if isinstance(x, Fta):
        return fta_to_rtg(x)
    raise TypeError(f"expected Rtg or Fta, got {type(x).__name__}")


def ranked_trees(alphabet: dict, max_depth: int) -> Iterator[Tree]:
    """All trees over a ranked alphabet with depth <= max_depth (a leaf has depth 1)."""
    if max_depth < 1:
        return
    smaller = list(ranked_trees(alphabet, max_depth - 1))
    for sym, rank in alphabet.items():
        if rank == 0:
            yield Tree(sym)
        else:
            for kids in product(smaller, repeat=rank):
                yield Tree(sym, kids)


# ---------------------------------------------------------------------------
# Top-down tree transducers
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Tdtt:
    """Top-down tree transducer; rules are ``(q, σ, rhs)`` with ``Call`` leaves in rhs."""

    states: tuple
    input_alphabet: tuple
    output_alphabet: tuple
    init: object
    rules: tuple

    def apply(self, t: Tree, state=None) -> frozenset:
        memo: dict = {}
        return self._apply(self.init if state is None else state, t, memo)

    def _apply(self, q, t: Tree, memo) -> frozenset:
        key = (q, t)
        if key in memo:
            return memo[key]
        out = set()
        for q2, sym, rhs in self.rules:
            if q2 == q and sym == t.label and dict(self.input_alphabet).get(sym) == len(t.children):
                out.update(self._instantiate(rhs, t, memo))
        memo[key] = frozenset(out)
        return memo[key]

    def _instantiate(self, rhs: Tree, t: Tree, memo) -> set:
        if isinstance(rhs.label, Call):
            return set(self._apply(rhs.label.state, t.children[rhs.label.index - 1], memo))
        kid_sets = [self._instantiate(c, t, memo) for c in rhs.children]
        return {Tree(rhs.label, kids) for kids in product(*kid_sets)}

    def __str__(self):
        lines = [f"{q}({s}(...)) -> {format_tree(r)}" for q, s, r in self.rules]
        return "\n".join(lines)

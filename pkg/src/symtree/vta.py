"""Variable tree automata.

A vta pairs a classical automaton over a ranked alphabet Σ with a ranked
universe V and a partition of Σ into constants A (symbols that are also in
V), variables Z (each bound to one label, injectively, never to a constant
of the same rank) and at most one wildcard Y per rank (any label that is
neither a constant nor a bound variable of that rank).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .classical import Fta
from .errors import DomainError, FormatError
from .theory import holds
from .tree import Tree


@dataclass(frozen=True)
class Vta:
    inner: Fta
    universe: tuple          # ((rank, predicate), ...)
    a: tuple                 # ((symbol, rank), ...)
    z: tuple
    y: tuple

    @staticmethod
    def build(inner: Fta, universe, a: Iterable, z: Iterable, y: Iterable) -> "Vta":
        items = universe.items() if hasattr(universe, "items") else universe
        return Vta(inner, tuple(sorted(items)), tuple(map(tuple, a)), tuple(map(tuple, z)), tuple(map(tuple, y)))

    def in_universe(self, label, rank: int) -> bool:
        pred = dict(self.universe).get(rank)
        return pred is not None and holds(pred, label)


def vta_validate(b: Vta) -> None:
    """Raise ``FormatError`` naming the violated condition of a valid partitioning."""
    sigma = set(b.inner.alphabet)
    parts = {"A": set(b.a), "Z": set(b.z), "Y": set(b.y)}
    names: dict = {}
    for part, syms in parts.items():
        for sym, rank in syms:
            if (sym, rank) not in sigma:
                raise FormatError(f"partition: {sym}/{rank} in {part} is not a symbol of the automaton")
            if sym in names:
                raise FormatError(f"disjointness: {sym} occurs in both {names[sym]} and {part}")
            names[sym] = part
    missing = sigma - parts["A"] - parts["Z"] - parts["Y"]
    if missing:
        sym, rank = sorted(missing, key=repr)[0]
        raise FormatError(f"cover: {sym}/{rank} is in none of A, Z, Y")
    ranks = [r for _, r in b.y]
    for r in set(ranks):
        if ranks.count(r) > 1:
            raise FormatError(f"|Y_{r}| <= 1: Y has {ranks.count(r)} symbols of rank {r}")
    for sym, rank in sigma:
        inside = b.in_universe(sym, rank)
        if (sym, rank) in parts["A"] and not inside:
            raise FormatError(f"A = Σ ∩ V: constant {sym}/{rank} is not in V_{rank}")
        if (sym, rank) not in parts["A"] and inside:
            raise FormatError(f"A = Σ ∩ V: {sym}/{rank} is in V_{rank} but not in A")


def vta_member(b: Vta, t: Tree) -> bool:
    """Is ``t`` in τ(L(inner)) for some valid relabeling τ?

    Backtracks over a symbol choice per node (preorder) together with the
    partial binding of variables; wildcard nodes are checked once the
    binding is complete, and the inner automaton runs on the symbol tree.
    """
    vta_validate(b)
    nodes = list(t.nodes())
    for n in nodes:
        if not b.in_universe(n.label, len(n.children)):
            raise DomainError(f"label {n.label!r} with {len(n.children)} children is outside V")
    consts = {}
    for sym, rank in b.a:
        consts.setdefault(rank, set()).add(sym)
    by_rank: dict = {}
    for kind, syms in (("a", b.a), ("z", b.z), ("y", b.y)):
        for sym, rank in syms:
            by_rank.setdefault(rank, []).append((kind, sym))

    choice = [None] * len(nodes)

    def assemble(i=0):
        n = nodes[i]
        sym = choice[i]
        kids = []
        j = i + 1
        for _ in n.children:
            kid, j = assemble(j)
            kids.append(kid)
        return Tree(sym, kids), j

    def finish(binding) -> bool:
        bound = set(binding.values())
        for i, n in enumerate(nodes):
            sym = choice[i]
            if (("y", sym) in by_rank.get(len(n.children), [])
                    and ((n.label, len(n.children)) in bound or n.label in consts.get(len(n.children), ()))):
                return False
        return b.inner.member(assemble()[0])

    def search(i, binding) -> bool:
        if i == len(nodes):
            return finish(binding)
        n = nodes[i]
        rank = len(n.children)
        for kind, sym in by_rank.get(rank, []):
            if kind == "a":
                if sym != n.label:
                    continue
                choice[i] = sym
                if search(i + 1, binding):
                    return True
            elif kind == "z":
                value = (n.label, rank)
                if n.label in consts.get(rank, ()):
                    continue
                if sym in binding:
                    if binding[sym] != value:
                        continue
                    choice[i] = sym
                    if search(i + 1, binding):
                        return True
                else:
                    if value in binding.values():
                        continue
                    choice[i] = sym
                    if search(i + 1, {**binding, sym: value}):
                        return True
            else:
                choice[i] = sym
                if search(i + 1, binding):
                    return True
        return False

    return search(0, {})

"""Finite ordered trees, positions, substitution and relabelings.

A :class:`Tree` is an immutable node with a label and a tuple of children.
Rank bounds are never stored on the tree; consumers that care about
k-boundedness take ``k`` explicitly.

Rule right-hand sides reuse :class:`Tree` with non-label leaves:
:class:`Var` (the variable x_i), :class:`StateRef` (a grammar state) and
:class:`Call` (a transducer leaf q(x_i)).
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import product
from typing import Callable, Iterable, Iterator, Optional, Sequence, Tuple

from .errors import ArityError, FormatError, PositionError
from .theory import Label, Predicate, Theory, disj, holds

Position = Tuple[int, ...]


class Tree:
    __slots__ = ("label", "children", "_hash")

    def __init__(self, label, children: Iterable["Tree"] = ()):
        object.__setattr__(self, "label", label)
        object.__setattr__(self, "children", tuple(children))
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("Tree is immutable")

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, Tree):
            return NotImplemented
        return hash(self) == hash(other) and self.label == other.label and self.children == other.children

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash((type(self.label).__name__, self.label, self.children))
            object.__setattr__(self, "_hash", h)
        return h

    def __repr__(self):
        return f"Tree({format_tree(self)})"

    def __str__(self):
        return format_tree(self)

    @property
    def arity(self) -> int:
        return len(self.children)

    def rank(self) -> int:
        """Maximum number of children over all nodes."""
        return max([len(self.children)] + [c.rank() for c in self.children])

    def is_bounded(self, k: int) -> bool:
        return self.rank() <= k

    def depth(self) -> int:
        return 1 + max((c.depth() for c in self.children), default=0)

    def size(self) -> int:
        return 1 + sum(c.size() for c in self.children)

    def positions(self) -> list:
        out = [()]
        for i, child in enumerate(self.children, start=1):
            out.extend((i,) + w for w in child.positions())
        return out

    def labels(self) -> list:
        out = [self.label]
        for child in self.children:
            out.extend(child.labels())
        return out

    def nodes(self) -> Iterator["Tree"]:
        yield self
        for child in self.children:
            yield from child.nodes()

    def map_labels(self, fn: Callable) -> "Tree":
        return Tree(fn(self.label), [c.map_labels(fn) for c in self.children])


@dataclass(frozen=True)
class Var:
    """The variable x_index (1-based) in a context or rule right-hand side."""

    index: int

    def __str__(self):
        return f"x{self.index}"


@dataclass(frozen=True)
class StateRef:
    """A grammar state occurring as a leaf of a sentential form."""

    state: object

    def __str__(self):
        return f"<{self.state}>"


@dataclass(frozen=True)
class Call:
    """The transducer leaf state(x_index)."""

    state: object
    index: int

    def __str__(self):
        return f"{self.state}(x{self.index})"


LEAF_TYPES = (Var, StateRef, Call)


def leaf(label) -> Tree:
    return Tree(label)


def node(label, *children) -> Tree:
    return Tree(label, children)


def format_tree(t) -> str:
    if isinstance(t, LEAF_TYPES):
        return str(t)
    label = t.label
    text = str(label)
    if isinstance(label, LEAF_TYPES):
        text = str(label)
    if not t.children:
        return text
    return text + "(" + ",".join(format_tree(c) for c in t.children) + ")"


def query(t: Tree, w: Position):
    """Return ``(label, subtree, rank)`` at position ``w``."""
    sub = subtree(t, w)
    return sub.label, sub, len(sub.children)


def subtree(t: Tree, w: Position) -> Tree:
    cur = t
    for i in w:
        if not 1 <= i <= len(cur.children):
            raise PositionError(f"position {w} is not in pos({format_tree(t)})")
        cur = cur.children[i - 1]
    return cur


def label_at(t: Tree, w: Position):
    return subtree(t, w).label


def rank_at(t: Tree, w: Position) -> int:
    return len(subtree(t, w).children)


def replace_at(t: Tree, w: Position, new: Tree) -> Tree:
    """``t[new]_w``: a fresh tree sharing every untouched subtree with ``t``."""
    if not w:
        return new
    i = w[0]
    if not 1 <= i <= len(t.children):
        raise PositionError(f"position {w} is not in pos({format_tree(t)})")
    kids = list(t.children)
    kids[i - 1] = replace_at(kids[i - 1], w[1:], new)
    return Tree(t.label, kids)


def substitute(u, args: Sequence) -> Tree:
    """Replace every ``Var(i)`` leaf (or ``Tree(Var(i))``) of ``u`` by ``args[i-1]``."""
    label = u.label if isinstance(u, Tree) else u
    if isinstance(label, Var):
        if not 1 <= label.index <= len(args):
            raise ArityError(f"variable x{label.index} has no argument (got {len(args)})")
        return args[label.index - 1]
    if isinstance(u, Var):
        return substitute(Tree(u), args)
    return Tree(u.label, [substitute(c, args) for c in u.children])


def variables(u: Tree) -> list:
    """Variables of ``u`` in left-to-right order (with repetitions)."""
    out = []
    for n in u.nodes():
        if isinstance(n.label, Var):
            out.append(n.label.index)
    return out


def is_context(u: Tree, l: int) -> bool:
    """Each of x1..xl occurs exactly once and in left-to-right order."""
    return variables(u) == list(range(1, l + 1))


# ---------------------------------------------------------------------------
# Relabelings
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Relabeling:
    """A finite ranked alphabet mapped to predicates over a target theory.

    ``mapping`` holds ``((symbol, rank), predicate)`` pairs.
    """

    mapping: tuple
    theory: Theory

    @staticmethod
    def of(mapping, theory: Theory) -> "Relabeling":
        items = mapping.items() if hasattr(mapping, "items") else mapping
        return Relabeling(tuple(items), theory)

    @property
    def table(self) -> dict:
        return dict(self.mapping)

    @property
    def alphabet(self) -> dict:
        return {sym: rank for (sym, rank) in self.table}

    def target(self, symbol, rank: int) -> Predicate:
        try:
            return self.table[(symbol, rank)]
        except KeyError:
            raise FormatError(f"symbol {symbol}/{rank} is not in the relabeling alphabet") from None

    def contains(self, source: Tree, image: Tree) -> bool:
        """Membership test ``image ∈ τ(source)``."""
        if len(source.children) != len(image.children):
            return False
        phi = self.target(source.label, len(source.children))
        if not self.theory.contains(image.label) or not holds(phi, image.label):
            return False
        return all(self.contains(s, i) for s, i in zip(source.children, image.children))

    def apply(self, source: Tree, limit_per_node: Optional[int] = None) -> Iterator[Tree]:
        """Enumerate ``τ(source)``; infinite node sets are cut to ``limit_per_node`` witnesses."""
        choices = []
        for n in source.nodes():
            phi = self.target(n.label, len(n.children))
            choices.append(_enumerate_labels(self.theory, phi, limit_per_node))
        shape = source
        for assignment in product(*choices):
            it = iter(assignment)
            yield _relabel_shape(shape, it)

    def sample(self, source: Tree, rng: random.Random, spread: int = 20) -> Optional[Tree]:
        """One random member of ``τ(source)``, or None if some node set is empty."""
        def go(n: Tree):
            phi = self.target(n.label, len(n.children))
            label = sample_label(self.theory, phi, rng, spread)
            if label is None:
                return None
            kids = []
            for c in n.children:
                k = go(c)
                if k is None:
                    return None
                kids.append(k)
            return Tree(label, kids)
        return go(source)

    def then(self, other: "Relabeling") -> "Relabeling":
        """Relabeling equal to applying ``self`` then ``other``.

        Needs a finite target theory for ``self`` so each node set can be
        enumerated and pushed through ``other``.
        """
        out = []
        for (sym, rank), phi in self.mapping:
            targets = [other.table[(v, rank)] for v in _enumerate_labels(self.theory, phi, None)
                       if (v, rank) in other.table]
            out.append(((sym, rank), disj(*targets)))
        return Relabeling(tuple(out), other.theory)


def _relabel_shape(shape: Tree, it) -> Tree:
    label = next(it)
    return Tree(label, [_relabel_shape(c, it) for c in shape.children])


def _enumerate_labels(theory: Theory, phi: Predicate, limit: Optional[int]) -> list:
    universe = getattr(theory, "symbols", None)
    if universe is not None:
        found = [a for a in universe if holds(phi, a)]
        return found if limit is None else found[:limit]
    if limit is None:
        raise ValueError("an explicit per-node limit is needed for infinite theories")
    from .theory import conj, neg, eq
    found = []
    cur = phi
    while len(found) < limit:
        w = theory.witness(cur)
        if w is None:
            break
        found.append(w)
        cur = conj(cur, neg(eq(w)))
    return found


def sample_label(theory: Theory, phi: Predicate, rng: random.Random, spread: int = 20) -> Optional[Label]:
    """Random label satisfying ``phi``: a random probe near zero, else the canonical witness."""
    universe = getattr(theory, "symbols", None)
    if universe is not None:
        found = [a for a in universe if holds(phi, a)]
        return rng.choice(found) if found else None
    w = theory.witness(phi)
    if w is None:
        return None
    for _ in range(8):
        a = rng.randint(-spread, spread) if rng.random() < 0.3 else rng.randint(0, spread)
        if holds(phi, a):
            return a
    return w


def enumerate_shapes(max_depth: int, k: int) -> Iterator[Tree]:
    """All unlabeled tree shapes (label None) of depth <= max_depth and rank <= k."""
    if max_depth < 1:
        return
    yield Tree(None)
    if max_depth == 1:
        return
    smaller = list(enumerate_shapes(max_depth - 1, k))
    for l in range(1, k + 1):
        for kids in product(smaller, repeat=l):
            yield Tree(None, kids)


def enumerate_trees(labels: Sequence, max_depth: int, k: int) -> Iterator[Tree]:
    """All trees over ``labels`` with depth <= max_depth and rank <= k."""
    if max_depth < 1:
        return
    for a in labels:
        yield Tree(a)
    if max_depth == 1:
        return
    smaller = list(enumerate_trees(labels, max_depth - 1, k))
    for l in range(1, k + 1):
        for kids in product(smaller, repeat=l):
            for a in labels:
                yield Tree(a, kids)

import random

import pytest

from symtree.errors import PositionError
from symtree.sta import GuardSymbol
from symtree.syntax import parse_tree
from symtree.theory import INTEGERS, conj, div, eq
from symtree.tree import (
    Relabeling, Tree, Var, enumerate_trees, format_tree, label_at, rank_at, replace_at, subtree,
    substitute,
)

XI = parse_tree("6(12(4,6),7)")


def test_query_child():
    assert label_at(XI, (1,)) == 12 and rank_at(XI, (1,)) == 2


def test_query_root_is_whole_tree():
    assert subtree(XI, ()) == XI


def test_query_grandchild():
    assert label_at(XI, (1, 2)) == 6 and rank_at(XI, (1, 2)) == 0


def test_bad_position():
    with pytest.raises(PositionError):
        subtree(XI, (3,))


def test_rank_depth_positions():
    assert XI.rank() == 2 and XI.depth() == 3
    assert XI.positions() == [(), (1,), (1, 1), (1, 2), (2,)]
    assert XI.is_bounded(2) and not XI.is_bounded(1)


def test_format_round_trip():
    assert format_tree(XI) == "6(12(4,6),7)"
    assert parse_tree(format_tree(XI)) == XI
    assert parse_tree("-3(a,b())") == Tree(-3, [Tree("a"), Tree("b")])


def test_replace_at():
    assert replace_at(XI, (2,), Tree(1)) == parse_tree("6(12(4,6),1)")


def test_substitute_single_variable():
    assert substitute(Tree(Var(1)), [Tree(7)]) == Tree(7)


def test_substitute_duplicates():
    u = Tree("f", [Tree(Var(1)), Tree(Var(1))])
    assert substitute(u, [Tree(4)]) == parse_tree("f(4,4)")


def test_substitute_two():
    u = Tree("g", [Tree(Var(1)), Tree(Var(2))])
    assert substitute(u, [Tree(4), Tree(6)]) == parse_tree("g(4,6)")


def test_relabeling_contains_example():
    phi = conj(div(2), div(3))
    s2, s0 = GuardSymbol(phi, 2), GuardSymbol(phi, 0)
    tau = Relabeling.of({(s2, 2): phi, (s0, 0): phi}, INTEGERS)
    src = Tree(s2, [Tree(s0), Tree(s0)])
    assert tau.contains(src, parse_tree("6(12,18)"))
    assert not tau.contains(src, parse_tree("6(12,17)"))
    img = tau.sample(src, random.Random(0))
    assert img.positions() == src.positions()


def test_identity_relabeling():
    tau = Relabeling.of({(1, 2): eq(1), (2, 0): eq(2)}, INTEGERS)
    src = parse_tree("1(2,2)")
    assert list(tau.apply(src, limit_per_node=5)) == [src]


def test_enumerate_counts():
    trees = list(enumerate_trees([0, 1], 2, 2))
    assert len(trees) == len(set(trees)) == 2 * (1 + 2 + 4)

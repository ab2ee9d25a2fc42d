import pytest

from oracles import vta_oracle

from symtree.catalog import z_binding_vta
from symtree.classical import Fta
from symtree.errors import DomainError, FormatError
from symtree.syntax import parse_tree
from symtree.theory import Range, in_set
from symtree.tree import Tree
from symtree.vta import Vta, vta_member, vta_validate

B = z_binding_vta()
INNER = B.inner
UNIVERSE = ((0, in_set(["c"])), (1, Range(None, None)))


def test_fixture_is_valid():
    vta_validate(B)


def test_language_is_a_a_c():
    assert vta_member(B, parse_tree("5(5(c))"))
    assert vta_member(B, parse_tree("-2(-2(c))"))
    assert not vta_member(B, parse_tree("5(6(c))"))
    assert not vta_member(B, parse_tree("c"))
    assert not vta_member(B, parse_tree("5(5(5(c)))"))


def test_agrees_with_binding_enumeration():
    trees = [Tree("c")]
    for _ in range(3):
        trees += [Tree(x, [t]) for t in trees for x in (1, 2)]
    for t in set(trees):
        assert vta_member(B, t) == vta_oracle(B, t)


def test_two_wildcards_of_one_rank_rejected():
    inner = Fta.build(["q"], {"c": 0, "y1": 1, "y2": 1}, [("c", (), "q")], ["q"])
    b = Vta.build(inner, UNIVERSE, a=[("c", 0)], z=[], y=[("y1", 1), ("y2", 1)])
    with pytest.raises(FormatError, match=r"\|Y_1\|"):
        vta_validate(b)


def test_variable_sharing_a_constant_name_rejected():
    b = Vta.build(INNER, UNIVERSE, a=[("c", 0), ("z", 1)], z=[("z", 1)], y=[])
    with pytest.raises(FormatError, match="disjointness"):
        vta_validate(b)


def test_missing_symbol_rejected():
    b = Vta.build(INNER, UNIVERSE, a=[("c", 0)], z=[], y=[])
    with pytest.raises(FormatError, match="cover"):
        vta_validate(b)


def test_variable_cannot_take_a_constant_label():
    # the rank-0 variable x may be read as d but never as the constant c
    inner = Fta.build(["q", "f"], {"c": 0, "x": 0, "g": 1},
                      [("x", (), "q"), ("g", ("q",), "f")], ["f"])
    b = Vta.build(inner, ((0, in_set(["c", "d"])), (1, Range(None, None))),
                  a=[("c", 0)], z=[("x", 0)], y=[("g", 1)])
    assert vta_member(b, parse_tree("4(d)"))
    assert not vta_member(b, parse_tree("4(c)"))


def test_label_outside_universe():
    with pytest.raises(DomainError):
        vta_member(B, parse_tree("5(5(d))"))

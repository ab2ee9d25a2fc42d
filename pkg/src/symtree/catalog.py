"""Ready-made automata, grammars and transducers used by the demos and tests."""

from __future__ import annotations

from .classical import Fta
from .sta import Sta, StaRule
from .stt import Stt, SttRule, call, fn_node
from .theory import IDENTITY, INTEGERS, TOP, Affine, Range, Const, conj, div, in_range, in_set
from .vta import Vta


def divisibility_sta(nonnegative: bool = False) -> Sta:
    """Binary trees in which every label is divisible by 2, or every label by 3.

    State i collects trees whose labels are all divisible by i.  With
    ``nonnegative`` the labels are further restricted to 0, 1, 2, ...
    """
    rules = []
    for i in (2, 3):
        guard = conj(div(i), in_range(0, None)) if nonnegative else div(i)
        rules.append(StaRule((), guard, i))
        rules.append(StaRule((i, i), guard, i))
    return Sta.build(2, INTEGERS, [2, 3], [2, 3], rules)


def all_labels_sta(guard, k: int = 2, state="ok") -> Sta:
    """Every k-bounded tree whose labels all satisfy ``guard``."""
    rules = [StaRule((state,) * l, guard, state) for l in range(k + 1)]
    return Sta.build(k, INTEGERS, [state], [state], rules)


def binary_sta(guard=TOP, state="b") -> Sta:
    """Trees in which every node has 0 or 2 children and every label satisfies ``guard``."""
    rules = [StaRule((), guard, state), StaRule((state, state), guard, state)]
    return Sta.build(2, INTEGERS, [state], [state], rules)


def divide_or_copy_stt() -> Stt:
    """The nondeterministic transducer that may divide by 6 and copy the left subtree.

    q([div 2 ∧ div 3](x1,x2)) -> [:6](q(x1), q(x1))
    q(⊤(x1,x2))              -> id(q(x1), q(x2))
    q(⊤)                     -> id
    """
    rules = [
        SttRule("q", 2, conj(div(2), div(3)), fn_node(Affine(1, 0, 6), call("q", 1), call("q", 1))),
        SttRule("q", 2, TOP, fn_node(IDENTITY, call("q", 1), call("q", 2))),
        SttRule("q", 0, TOP, fn_node(IDENTITY)),
    ]
    return Stt.build(2, INTEGERS, INTEGERS, ["q"], "q", rules)


def increment_stt(k: int = 2) -> Stt:
    """Adds one to every label of a tree whose nodes have 0 or 2 children."""
    inc = Affine(1, 1, 1)
    rules = [SttRule("q", 2, TOP, fn_node(inc, call("q", 1), call("q", 2))),
             SttRule("q", 0, TOP, fn_node(inc))]
    return Stt.build(k, INTEGERS, INTEGERS, ["q"], "q", rules)


def duplication_stt() -> Stt:
    """``q(⊤) -> id(id)``: a leaf a becomes a(a).  Linear but not simple."""
    rules = [SttRule("q", 0, TOP, fn_node(IDENTITY, fn_node(IDENTITY)))]
    return Stt.build(1, INTEGERS, INTEGERS, ["q"], "q", rules)


def constant_stt(value: int = 9) -> Stt:
    rules = [SttRule("q", 0, TOP, fn_node(Const(value)))]
    return Stt.build(2, INTEGERS, INTEGERS, ["q"], "q", rules)


def halve_evens_stt() -> Stt:
    """Deterministic and total: halves even labels, negates odd ones, keeps shape."""
    rules = []
    for l in range(3):
        kids = [call("q", i) for i in range(1, l + 1)]
        rules.append(SttRule("q", l, div(2), fn_node(Affine(1, 0, 2), *kids)))
        rules.append(SttRule("q", l, ~div(2), fn_node(Affine(-1, 0, 1), *kids)))
    return Stt.build(2, INTEGERS, INTEGERS, ["q"], "q", rules)


def swap_stt() -> Stt:
    """Swaps the two subtrees of every binary node and doubles each label."""
    dbl = Affine(2, 0, 1)
    rules = [SttRule("q", 2, TOP, fn_node(dbl, call("q", 2), call("q", 1))),
             SttRule("q", 1, TOP, fn_node(dbl, call("q", 1))),
             SttRule("q", 0, TOP, fn_node(dbl))]
    return Stt.build(2, INTEGERS, INTEGERS, ["q"], "q", rules)


def z_binding_vta() -> Vta:
    """Inner language {z(z(c))}; z must stand for one integer, so the language is {a(a(c))}."""
    inner = Fta.build(["qc", "q1", "qf"], {"c": 0, "z": 1},
                      [("c", (), "qc"), ("z", ("qc",), "q1"), ("z", ("q1",), "qf")], ["qf"])
    universe = ((0, in_set(["c"])), (1, Range(None, None)))
    return Vta.build(inner, universe, a=[("c", 0)], z=[("z", 1)], y=[])

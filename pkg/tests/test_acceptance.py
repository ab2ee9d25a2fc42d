"""The ten acceptance criteria, each at its stated tolerance.

Every test wraps its body in ``criterion(...)`` so a PASS/FAIL line with the
wall time is printed per criterion and summarized at the end of the run.
"""

import io
import random

import numpy as np
import pytest

from conftest import FIXTURES, criterion
from oracles import (
    affine_image_points, class_reduce, eval_vec, grammar_signature, random_predicate, random_tree,
    rewrite_closure, scan_witness, sta_nonempty_states, sta_states_fixpoint, universe_size, vta_oracle,
)
from zoo import (
    alphabetic_stts, choose_stt, copy_stt, even_or_small_sta, first_child_stt, deleting_domain_stt,
    two_state_stt,
)

from symtree import formats
from symtree.analysis import backward_apply, domain_srtg, forward_apply_slin, range_slin
from symtree.catalog import (
    all_labels_sta, binary_sta, constant_stt, divide_or_copy_stt, divisibility_sta, duplication_stt,
    halve_evens_stt, increment_stt, swap_stt, z_binding_vta,
)
from symtree.classical import Fta
from symtree.cli import run
from symtree.compose import compose_apply, compose_semantics_check, syntactic_compose
from symtree.errors import PreconditionError
from symtree.srtg import (
    Srtg, is_clean, is_normal, is_reduced, pred_node, srtg_normalize, srtg_to_sta, sta_to_srtg,
)
from symtree.sta import Sta, StaRule, complement, intersect, sta_empty, sta_included, universal_sta
from symtree.stt import identity_stt, is_alphabetic, stt_apply, stt_props
from symtree.syntax import parse_tree
from symtree.theory import (
    INTEGERS, TOP, Affine, Const, IDENTITY, Range, conj, div, eq, image, in_range, in_set, neg, preimage,
    satisfiable,
)
from symtree.tree import Call, StateRef, Tree
from symtree.vta import Vta, vta_member

LABELS = list(range(13))


# ---------------------------------------------------------------------------
# 1, 2: the worked examples
# ---------------------------------------------------------------------------


def test_criterion_01_sta_example():
    with criterion(1, "divisibility automaton example", budget=1.0):
        a = formats.load(FIXTURES / "ex.sta")
        for text in ("2(4,6)", "3(15,18)", "6(12,18)"):
            assert a.member(parse_tree(text)), text
        assert a.run(parse_tree("6(12,18)")) == frozenset({2, 3})
        assert not a.member(parse_tree("2(3,4)"))
        assert not a.member(parse_tree("5"))
        # the fixture is the catalog automaton
        ref = divisibility_sta()
        assert (a.states, a.final, set(a.rules)) == (ref.states, ref.final, set(ref.rules))


def test_criterion_02_stt_example():
    with criterion(2, "divide-or-copy transducer example", budget=1.0):
        m = formats.load(FIXTURES / "ex.stt")
        t = parse_tree("6(12(4,6),7)")
        outs = stt_apply(m, t)
        assert outs == rewrite_closure(m, t)
        assert len(outs) == 6
        assert parse_tree("1(2(4,4),12(4,6))") in outs
        p = stt_props(m)
        assert not p.deterministic      # two rules overlap on div 6 binary nodes
        assert not p.total              # no unary rules
        assert not p.linear             # x1 is copied
        assert not p.nondeleting        # x2 is dropped by the first rule


# ---------------------------------------------------------------------------
# 3, 4: composition
# ---------------------------------------------------------------------------


COMPOSE_MATRIX = [
    ("halve_evens", "divide_or_copy"),
    ("divide_or_copy", "identity_all"),
    ("divide_or_copy", "divide_or_copy"),
    ("increment", "divide_or_copy"),
    ("choose", "first_child"),
    ("choose", "copy"),
    ("divide_or_copy", "swap"),
    ("increment", "first_child"),
    ("halve_evens", "swap"),
    ("first_child", "copy"),
]


def _integer_fixtures():
    return {
        "divide_or_copy": divide_or_copy_stt(),
        "increment": increment_stt(),
        "halve_evens": halve_evens_stt(),
        "swap": swap_stt(),
        "first_child": first_child_stt(),
        "choose": choose_stt(),
        "copy": copy_stt(),
        "identity_all": identity_stt(universal_sta(INTEGERS, 2)),
    }


def test_criterion_03_composition():
    with criterion(3, "composition agrees with sequential application when guaranteed", budget=30.0):
        stts = _integer_fixtures()
        rng = random.Random(3)
        inputs = [random_tree(rng, LABELS, 3, 2) for _ in range(200)]
        reasons_a, reasons_b, guaranteed = set(), set(), 0
        for left, right in COMPOSE_MATRIX:
            m, n = stts[left], stts[right]
            g = compose_semantics_check(m, n)
            reasons_a.add(g.reason_a)
            reasons_b.add(g.reason_b)
            if not g.guaranteed:
                continue
            guaranteed += 1
            mn = syntactic_compose(m, n)
            for t in inputs:
                assert stt_apply(mn, t) == compose_apply(m, n, t), (left, right, t)
                # the sequential side once more, through the rewriting oracle
                seq = set()
                for z in rewrite_closure(m, t):
                    seq |= rewrite_closure(n, z)
                assert stt_apply(mn, t) == seq, (left, right, t)
        assert len(COMPOSE_MATRIX) >= 8
        assert guaranteed >= 4
        # every combination of the two conditions occurs in the matrix
        assert {r is None for r in reasons_a} == {True, False}
        assert {r is None for r in reasons_b} == {True, False}
        assert len(reasons_a - {None}) >= 2 and len(reasons_b - {None}) >= 2


def test_criterion_04_alphabetic_closure():
    with criterion(4, "composites of alphabetic transducers are alphabetic", budget=None):
        fixtures = alphabetic_stts()
        assert all(is_alphabetic(m) for m in fixtures.values())
        for a, m in fixtures.items():
            for b, n in fixtures.items():
                assert is_alphabetic(syntactic_compose(m, n)), (a, b)


# ---------------------------------------------------------------------------
# 5: domain / backward / forward over every tree of depth <= 3
# ---------------------------------------------------------------------------


def _memo(fn):
    cache = {}

    def sig(t):
        if t not in cache:
            cache[t] = fn(t)
        return cache[t]
    return sig


def _reduce_and_check(sig, k, check):
    levels = class_reduce(LABELS, 3, k, sig)
    total = sum(n for _, n in levels[-1].values())
    assert total == universe_size(len(LABELS), 3, k)
    for s, (rep, _) in levels[-1].items():
        check(s, rep)
    # trees of depth <= 2 are few enough to check one by one
    for t in _all_trees(2, k):
        check(sig(t), t)
    return levels


def _cross_check_reduction(sig, levels, k, seed):
    """The class reduction is sound only if ``sig`` is compositional; test that directly."""
    rng = random.Random(seed)
    reps = [{s: rep for s, (rep, _) in lv.items()} for lv in levels]
    for t in list(_all_trees(2, k)) + [random_tree(rng, LABELS, 3, k, 0.2) for _ in range(150)]:
        kids = [reps[-1][sig(c)] for c in t.children]
        assert sig(Tree(t.label, kids)) == sig(t), t


def _all_trees(depth, k):
    from symtree.tree import enumerate_trees
    return enumerate_trees(LABELS, depth, k)


def _domain_cases():
    return {name: m for name, m in {
        "divide_or_copy": divide_or_copy_stt(), "increment": increment_stt(), "halve_evens": halve_evens_stt(),
        "swap": swap_stt(), "constant": constant_stt(), "duplication": duplication_stt(),
        "first_child": first_child_stt(), "choose": choose_stt(), "copy": copy_stt(),
        "two_state": two_state_stt(), "deleting_domain": deleting_domain_stt(),
    }.items()}


def _backward_cases():
    return [
        ("divide_or_copy", divide_or_copy_stt(), binary_sta(div(3))),
        ("increment", increment_stt(), all_labels_sta(div(2))),
        ("halve_evens", halve_evens_stt(), even_or_small_sta()),
        ("two_state", two_state_stt(), divisibility_sta()),
        ("deleting_domain", deleting_domain_stt(), all_labels_sta(in_range(11, 12))),
        ("choose", choose_stt(), divisibility_sta()),
        ("copy", copy_stt(), binary_sta(div(2))),
        ("first_child", first_child_stt(), all_labels_sta(in_range(0, 6))),
    ]


def _forward_cases():
    return [
        ("increment", increment_stt(), divisibility_sta()),
        ("halve_evens", halve_evens_stt(), divisibility_sta()),
        ("swap", swap_stt(), even_or_small_sta()),
        ("identity_all", identity_stt(universal_sta(INTEGERS, 2)), divisibility_sta()),
        ("constant", constant_stt(), binary_sta(div(2))),
        ("first_child", first_child_stt(), all_labels_sta(in_range(2, 7))),
    ]


WINDOW = np.arange(-60, 61)


def _forward_pairs_oracle(m: object, a: Sta):
    """Output-side signature: pairs (q, p) such that the output tree is q's image of some tree in L(a, p).

    Runs the rules of ``m`` backwards over an output tree; input labels are
    searched in a finite window, which covers every preimage of labels 0..12
    under the functions of the forward fixtures.
    """
    alive = sta_nonempty_states(a)

    def pairs(z, kid_pairs):
        found = set()
        changed = True
        while changed:
            changed = False
            for r in m.rules:
                for ar in a.rules:
                    if len(ar.lhs) != r.arity or (r.state, ar.rhs) in found:
                        continue
                    ok = _rule_matches(r, ar, z, kid_pairs, found, alive)
                    if ok:
                        found.add((r.state, ar.rhs))
                        changed = True
        return frozenset(found)

    return pairs


def _rule_matches(r, ar, z, kid_pairs, found, alive):
    calls = [(u.label.state, u.label.index) for u in r.rhs.nodes() if isinstance(u.label, Call)]
    used = {i for _, i in calls}
    if any(ar.lhs[i - 1] not in alive for i in range(1, r.arity + 1) if i not in used):
        return False
    guard = conj(r.guard, ar.guard)
    if isinstance(r.rhs.label, Call):
        q2, i = r.rhs.label.state, r.rhs.label.index
        return (q2, ar.lhs[i - 1]) in found and scan_witness(guard) is not None
    f = r.rhs.label
    if len(r.rhs.children) != len(z.children):
        return False
    for (q2, i), kp in zip(calls, kid_pairs):
        if (q2, ar.lhs[i - 1]) not in kp:
            return False
    ok = eval_vec(guard, WINDOW)
    return any(f.apply(int(x)) == z.label for x in WINDOW[ok])


def test_criterion_05_domain_backward_forward():
    with criterion(5, "domain, backward and forward match brute force on depth <= 3", budget=60.0):
        for name, m in _domain_cases().items():
            d = srtg_to_sta(domain_srtg(m))

            @_memo
            def sig(t, m=m, d=d):
                return d.run(t), frozenset(q for q in m.states if stt_apply(m, t, q))

            def check(s, rep, m=m, d=d):
                lib = bool(s[0] & d.final)
                assert lib == (m.init in s[1]), (name, rep)
            levels = _reduce_and_check(sig, min(2, m.k), check)
            if name in ("divide_or_copy", "deleting_domain"):
                _cross_check_reduction(sig, levels, min(2, m.k), seed=len(name))

        for name, m, a in _backward_cases():
            b = srtg_to_sta(backward_apply(m, a))

            @_memo
            def sig(t, m=m, a=a, b=b):
                outs = frozenset((q, frozenset(a.run(z) for z in stt_apply(m, t, q))) for q in m.states)
                return b.run(t), outs

            def check(s, rep, m=m, a=a, b=b):
                brute = any(S & a.final for q, outs in s[1] if q == m.init for S in outs)
                assert bool(s[0] & b.final) == brute, (name, rep)
            levels = _reduce_and_check(sig, 2, check)
            if name in ("divide_or_copy", "two_state"):
                _cross_check_reduction(sig, levels, 2, seed=7)

        for name, m, a in _forward_cases():
            f = srtg_to_sta(forward_apply_slin(m, sta_to_srtg(a)))
            # soundness: every output tree in L(f) is an image of an input in L(a)
            pairs = _forward_pairs_oracle(m, a)

            @_memo
            def out_sig(z, f=f, pairs=pairs):
                kid = [out_sig(c)[1] for c in z.children]
                return f.run(z), pairs(z, kid)

            def check_out(s, rep, m=m, a=a, f=f):
                brute = any((m.init, p) in s[1] for p in a.final)
                assert bool(s[0] & f.final) == brute, (name, rep)
            _reduce_and_check(out_sig, 2, check_out)

            # completeness: every image of an input in L(a) is in L(f)
            @_memo
            def in_sig(t, m=m, a=a, f=f):
                return a.run(t), frozenset((q, frozenset(f.run(z) for z in stt_apply(m, t, q))) for q in m.states)

            def check_in(s, rep, m=m, a=a, f=f):
                if s[0] & a.final:
                    for q, outs in s[1]:
                        if q == m.init:
                            assert all(S & f.final for S in outs), (name, rep)
            _reduce_and_check(in_sig, 2, check_in)


# ---------------------------------------------------------------------------
# 6: forward and range refuse non-simple transducers
# ---------------------------------------------------------------------------


def test_criterion_06_duplication_refused():
    with criterion(6, "forward/range refuse the duplication transducer", budget=None):
        m = duplication_stt()
        with pytest.raises(PreconditionError):
            forward_apply_slin(m, sta_to_srtg(universal_sta(INTEGERS, 1)))
        with pytest.raises(PreconditionError):
            range_slin(m)
        for argv in (["forward", "--tt", str(FIXTURES / "dup.stt"), "--lang", str(FIXTURES / "any.srtg")],
                     ["range", "--tt", str(FIXTURES / "dup.stt")]):
            out, err = io.StringIO(), io.StringIO()
            assert run(argv, out, err) == 3
            assert out.getvalue() == ""
            assert "not simple" in err.getvalue()


# ---------------------------------------------------------------------------
# 7: Boolean algebra of automata
# ---------------------------------------------------------------------------


GUARD_POOL = [TOP, div(2), div(3), neg(div(2)), in_range(0, 5), in_range(4, None), eq(0), eq(7),
              conj(div(2), in_range(None, 6)), in_range(20, 19)]


def random_sta(rng, n_states=None) -> Sta:
    k = rng.choice([1, 2])
    n = n_states or rng.randint(1, 4)
    states = list(range(n))
    rules = []
    for _ in range(rng.randint(2, 8)):
        l = rng.randint(0, k)
        rules.append(StaRule(tuple(rng.choice(states) for _ in range(l)), rng.choice(GUARD_POOL),
                             rng.choice(states)))
    final = [q for q in states if rng.random() < 0.5] or [states[-1]]
    return Sta.build(k, INTEGERS, states, final, rules)


def test_criterion_07_boolean_algebra():
    with criterion(7, "Boolean algebra laws and inclusion counterexamples", budget=30.0):
        rng = random.Random(7)
        autos = [random_sta(rng) for _ in range(20)]
        trees = [random_tree(rng, LABELS, 3, 2) for _ in range(150)]
        for a in autos:
            a2 = a.lift(2)
            ca = complement(a2)
            cca = complement(ca)
            for t in trees:
                brute = bool(sta_states_fixpoint(a2, t) & a2.final)
                assert a2.member(t) == brute
                assert ca.member(t) == (not brute)
                assert cca.member(t) == brute
            assert sta_empty(intersect(a2, ca)) is None
            assert sta_included(a2, a2) is None
        for a, b in zip(autos, autos[1:] + autos[:1]):
            a2, b2 = a.lift(2), b.lift(2)
            w = sta_included(a2, b2)
            if w is None:
                for t in trees:
                    if bool(sta_states_fixpoint(a2, t) & a2.final):
                        assert bool(sta_states_fixpoint(b2, t) & b2.final)
            else:
                assert bool(sta_states_fixpoint(a2, w) & a2.final)
                assert not bool(sta_states_fixpoint(b2, w) & b2.final)


# ---------------------------------------------------------------------------
# 8: label theory against the scan oracle
# ---------------------------------------------------------------------------


def test_criterion_08_theory_oracle():
    with criterion(8, "satisfiable/image/preimage agree with scanning", budget=None):
        rng = random.Random(8)
        xs = np.arange(-200, 201)
        for _ in range(500):
            phi = random_predicate(rng)
            assert satisfiable(phi) == scan_witness(phi), phi
            f = Affine(rng.randint(-3, 3), rng.randint(-5, 5), rng.randint(1, 4))
            img = image(f, phi)
            assert np.array_equal(eval_vec(img, xs), affine_image_points(f, phi, xs)), (f, phi)
            g = rng.choice([IDENTITY, Const(rng.randint(-9, 9)), f])
            pre = preimage(g, phi)
            want = np.array([(y := g.apply(int(x))) is not None and bool(eval_vec(phi, np.array([y]))[0])
                             for x in xs])
            assert np.array_equal(eval_vec(pre, xs), want), (g, phi)


# ---------------------------------------------------------------------------
# 9: variable tree automata
# ---------------------------------------------------------------------------


def _two_variable_vta():
    """z1(z2(y(c))) or z1(z1(c)): z1 and z2 must differ, y is anything else."""
    inner = Fta.build(["c", "y", "z2", "f"], {"c": 0, "z1": 1, "z2": 1, "y": 1},
                      [("c", (), "c"), ("y", ("c",), "y"), ("z2", ("y",), "z2"), ("z1", ("z2",), "f"),
                       ("z1", ("c",), "z1c"), ("z1", ("z1c",), "f")], ["f"])
    universe = ((0, in_set(["c"])), (1, Range(None, None)))
    return Vta.build(inner, universe, a=[("c", 0)], z=[("z1", 1), ("z2", 1)], y=[("y", 1)])


def _binary_vta():
    """Leaves are 0, a variable x or a wildcard u; binary nodes all carry one label f."""
    inner = Fta.build(["p", "r", "fin"], {0: 0, "x": 0, "u": 0, "f": 2},
                      [(0, (), "p"), ("x", (), "p"), ("u", (), "r"), ("f", ("p", "p"), "p"),
                       ("f", ("p", "r"), "fin"), ("f", ("p", "fin"), "fin")], ["fin"])
    universe = ((0, Range(None, None)), (2, Range(None, None)))
    return Vta.build(inner, universe, a=[(0, 0)], z=[("x", 0), ("f", 2)], y=[("u", 0)])


def test_criterion_09_vta():
    with criterion(9, "variable tree automaton fixture and binding oracle", budget=None):
        b = formats.load(FIXTURES / "zz.vta")
        ref = z_binding_vta()
        assert (set(b.inner.states), b.inner.transitions, b.a, b.z, b.y) == \
            (set(ref.inner.states), ref.inner.transitions, ref.a, ref.z, ref.y)
        assert vta_member(b, parse_tree("5(5(c))"))
        assert not vta_member(b, parse_tree("5(6(c))"))
        assert not vta_member(b, parse_tree("c"))
        chains = [Tree("c")]
        for _ in range(5):
            chains += [Tree(x, [t]) for t in chains for x in range(4)]
        chains = list(dict.fromkeys(chains))
        for vta in (b, _two_variable_vta()):
            for t in chains:
                assert vta_member(vta, t) == vta_oracle(vta, t), t
        rng = random.Random(9)
        bv = _binary_vta()
        seen = 0
        for _ in range(400):
            t = _random_binary(rng, 7)
            got = vta_member(bv, t)
            assert got == vta_oracle(bv, t), t
            seen += got
        assert seen > 0


def _random_binary(rng, budget):
    if budget < 3 or rng.random() < 0.3:
        return Tree(rng.randint(0, 3))
    left = rng.randint(1, budget - 2)
    return Tree(rng.randint(0, 3), [_random_binary(rng, left), _random_binary(rng, budget - 1 - left)])


# ---------------------------------------------------------------------------
# 10: normal form
# ---------------------------------------------------------------------------


def st(q):
    return Tree(StateRef(q))


def _grammars():
    g1 = sta_to_srtg(divisibility_sta())
    rules = [
        ("q0", pred_node(div(2), pred_node(in_range(0, 5), st("q1")), st("q1"))),
        ("q0", st("q2")),
        ("q1", pred_node(div(3))),
        ("q1", pred_node(neg(div(3)), st("q1"), st("q1"))),
        ("q2", pred_node(in_range(3, 8), st("q2"))),
        ("q2", pred_node(eq(7))),
        ("q2", st("q1")),
        ("u", pred_node(TOP)),
        ("z", pred_node(TOP, st("z"))),
        ("q0", pred_node(TOP, st("z"), st("q1"))),
        ("q1", pred_node(conj(div(2), div(3), in_range(1, 5)))),
    ]
    g2 = Srtg.build(2, INTEGERS, ["q0", "q1", "q2", "u", "z"], "q0", rules)
    rules3 = [
        ("s", pred_node(TOP, pred_node(TOP, st("s")), pred_node(eq(4)))),
        ("s", pred_node(in_range(10, 12))),
        ("s", st("t")),
        ("t", st("s")),
    ]
    g3 = Srtg.build(2, INTEGERS, ["s", "t"], "s", rules3)
    return {"divisibility": g1, "nested": g2, "chains": g3}


def test_criterion_10_normal_form():
    with criterion(10, "normalized grammars are clean, reduced, normal and equivalent", budget=None):
        for name, g in _grammars().items():
            n = srtg_normalize(g)
            assert is_clean(n) and is_reduced(n) and is_normal(n), name

            @_memo
            def sig(t, g=g, n=n):
                return grammar_signature(g, t), grammar_signature(n, t)

            def check(s, rep, g=g, n=n):
                assert (("state", g.init) in s[0]) == (("state", n.init) in s[1]), (name, rep)
            _reduce_and_check(sig, 2, check)
            # the library's own membership agrees on the representatives as well
            sta = srtg_to_sta(n)
            for s, (rep, _) in class_reduce(LABELS, 3, 2, sig)[-1].items():
                assert sta.member(rep) == (("state", g.init) in s[0])

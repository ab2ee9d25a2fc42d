import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import eval_vec, random_predicate, scan_witness

from symtree.errors import CapabilityError, DomainError, TheoryMismatch
from symtree.syntax import parse_fn_text, parse_pred_text
from symtree.theory import (
    BOTTOM, IDENTITY, INTEGERS, TOP, Affine, Composed, Const, FiniteMap, FiniteTheory, combine,
    compose_fn, conj, disj, div, eq, holds, image, in_range, in_set, minterms, mod, neg, preimage,
    satisfiable,
)

XS = np.arange(-60, 61)


def same(p, q, xs=XS):
    return np.array_equal(eval_vec(p, xs), eval_vec(q, xs))


class TestEval:
    def test_conjunction_at_six(self):
        assert holds(conj(div(2), div(3)), 6)

    def test_top_everywhere(self):
        assert all(holds(TOP, a) for a in (-3, 0, 7, "x"))

    def test_division_then_parity(self):
        p = preimage(Affine(1, 0, 6), div(2))
        assert holds(p, 24) and not holds(p, 18)

    def test_integer_atoms_false_on_symbols(self):
        assert not holds(div(2), "a")
        assert not holds(in_range(None, 5), "a")


class TestSatisfiable:
    def test_bottom(self):
        assert satisfiable(BOTTOM) is None

    def test_no_multiple_of_six_in_one_to_five(self):
        assert satisfiable(conj(div(2), div(3), in_range(1, 5))) is None

    def test_even_not_multiple_of_four(self):
        w = satisfiable(conj(div(2), neg(div(4))))
        assert w % 4 == 2

    def test_witness_prefers_small_magnitude_then_nonnegative(self):
        assert satisfiable(div(2)) == 0
        assert satisfiable(neg(eq(0))) == 1
        assert satisfiable(in_range(None, -4)) == -4
        assert satisfiable(conj(mod(5, 3), in_range(-10, 10))) == -2

    def test_nested_negations_stay_fast(self):
        # deep alternations used to blow up a DNF expansion
        p = TOP
        for m in range(2, 12):
            p = neg(conj(p, disj(div(m), in_range(-m, m))))
        assert satisfiable(p) == scan_witness(p)

    @settings(max_examples=150, deadline=None)
    @given(st.integers(0, 10 ** 6))
    def test_random_against_scan(self, seed):
        p = random_predicate(random.Random(seed))
        assert satisfiable(p) == scan_witness(p)


class TestCombine:
    def test_not_top_is_empty(self):
        assert satisfiable(combine("not", TOP)) is None

    def test_and_top_is_identity(self):
        assert same(combine("and", div(2), TOP), div(2), np.arange(1, 13))

    def test_or(self):
        assert holds(combine("or", div(2), div(3)), 9)

    def test_wrong_arity(self):
        with pytest.raises(ValueError):
            combine("not", TOP, TOP)


class TestFunctions:
    def test_apply(self):
        assert Affine(1, 0, 6).apply(12) == 2
        assert IDENTITY.apply(7) == 7
        assert Affine(1, 0, 6).apply(7) is None

    def test_affine_on_symbol(self):
        with pytest.raises(TheoryMismatch):
            Affine(1, 0, 2).apply("a")

    def test_double_then_halve_is_identity(self):
        f = compose_fn(Affine(2, 0, 1), Affine(1, 0, 2))
        assert all(f.apply(n) == n for n in range(-5, 6))

    def test_identity_left_unit(self):
        f = Affine(3, 1, 2)
        g = compose_fn(IDENTITY, f)
        assert all(g.apply(n) == f.apply(n) for n in range(-9, 10))

    def test_const_keeps_left_definedness(self):
        f = compose_fn(Affine(1, 0, 6), Const(9))
        assert f.apply(12) == 9 and f.apply(7) is None

    @settings(max_examples=100, deadline=None)
    @given(st.integers(-4, 4), st.integers(-6, 6), st.integers(1, 4),
           st.integers(-4, 4), st.integers(-6, 6), st.integers(1, 4))
    def test_affine_composition_pointwise(self, p1, q1, r1, p2, q2, r2):
        f, g = Affine(p1, q1, r1), Affine(p2, q2, r2)
        h = compose_fn(f, g)
        for n in range(-30, 31):
            mid = f.apply(n)
            assert h.apply(n) == (None if mid is None else g.apply(mid))

    def test_finite_map(self):
        f = FiniteMap.of({1: 2, 3: 4})
        assert f.apply(1) == 2 and f.apply(2) is None

    def test_composed_is_a_fn(self):
        c = Composed(FiniteMap.of({1: 2}), Affine(1, 1, 1))
        assert c.apply(1) == 3 and c.apply(5) is None


class TestPreimageImage:
    def test_division_preimage(self):
        assert same(preimage(Affine(1, 0, 6), div(2)), div(12))

    def test_identity_preimage(self):
        p = conj(div(3), in_range(2, 40))
        assert preimage(IDENTITY, p) == p

    def test_const_preimage(self):
        assert same(preimage(Const(4), div(2)), TOP)
        assert same(preimage(Const(3), div(2)), BOTTOM)

    def test_image_of_affine(self):
        p = image(Affine(2, 1, 1), div(3))
        assert holds(p, 7) and not holds(p, 9)
        want = np.array([(b - 1) % 2 == 0 and ((b - 1) // 2) % 3 == 0 for b in range(-30, 31)])
        assert np.array_equal(eval_vec(p, np.arange(-30, 31)), want)

    def test_image_identity_and_empty(self):
        assert image(IDENTITY, div(5)) == div(5)
        assert satisfiable(image(Const(5), BOTTOM)) is None

    def test_finite_theory_image_through_map(self):
        th = FiniteTheory.of(["a", "b", "c"])
        img = th.image(FiniteMap.of({"a": "b", "c": "c"}), in_set(["a", "b"]))
        assert th.denotation(img) == {"b"}

    def test_affine_on_finite_theory_is_a_mismatch(self):
        th = FiniteTheory.of(["a", "b"])
        with pytest.raises((CapabilityError, TheoryMismatch)):
            th.image(Affine(1, 1, 1), TOP)


class TestMinterms:
    def test_two_and_three(self):
        cells = minterms([div(2), div(3)])
        assert len(cells) == 4
        # the cells partition the integers
        total = sum(eval_vec(c, XS).astype(int) for c in cells)
        assert (total == 1).all()

    def test_empty_list(self):
        assert minterms([]) == [TOP]

    def test_top_only(self):
        assert minterms([TOP]) == [TOP]


class TestFiniteTheory:
    def test_witness_and_denotation(self):
        th = FiniteTheory.of(["a", "b", "c"])
        assert th.witness(in_set(["b", "c"])) == "b"
        assert th.witness(neg(in_set(["a", "b", "c"]))) is None
        assert th.denotation(neg(eq("a"))) == {"b", "c"}

    def test_check_label(self):
        th = FiniteTheory.of(["a"])
        with pytest.raises(DomainError):
            th.check_label("z")


class TestText:
    def test_predicate_round_trip(self):
        for text in ["(div 2)", "(mod 5 3)", "(range 0 _)", "(and (div 2) (not (div 3)))",
                     "(or (eq 7) (range _ -3))", "int", "true", "false"]:
            p = parse_pred_text(text)
            assert parse_pred_text(str(p)) == p

    def test_function_round_trip(self):
        for text in ["id", "(const 4)", "(affine 1 0 6)", "(comp (affine 2 0 1) (const 3))"]:
            f = parse_fn_text(text)
            assert parse_fn_text(str(f)) == f

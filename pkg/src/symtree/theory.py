"""Effective label theories.

Two concrete label structures are supported:

* the integer theory, whose labels are Python ints and whose atomic
  predicates are congruences ``(mod M C)`` / ``(div D)``, closed ranges and
  point equalities;
* finite theories over an explicit set of symbols, whose predicates are
  symbol sets.

Predicates are immutable formula trees built from ``TOP``, ``BOTTOM``,
atoms, ``Not``, ``And`` and ``Or``.  Label functions (``FnTerm``) are unary
partial maps closed under composition.  Preimages and images of predicates
under functions are rewritten into plain atoms as soon as they are formed, so
satisfiability never has to reason about function symbols.

Integer satisfiability works conjunct by conjunct on the disjunctive normal
form.  Every atom is periodic (congruences) or eventually constant (ranges,
equalities), so a conjunct is periodic with period ``L`` (the lcm of its
moduli) outside the interval spanned by its finite constants.  Scanning that
interval widened by one period on each side (and stretched to include 0, so
the smallest-magnitude witness is found) decides emptiness exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache, reduce
from typing import Iterable, Optional, Sequence, Union

import numpy as np

from .errors import CapabilityError, DomainError, TheoryMismatch

Label = Union[int, str]

# Default half-width (in periods) of the scan window when a conjunct has no
# finite range or equality constant.
K0 = 4


# ---------------------------------------------------------------------------
# Predicates
# ---------------------------------------------------------------------------


class Predicate:
    """Base class of predicate formulas."""

    __slots__ = ()

    def __and__(self, other: "Predicate") -> "Predicate":
        return conj(self, other)

    def __or__(self, other: "Predicate") -> "Predicate":
        return disj(self, other)

    def __invert__(self) -> "Predicate":
        return neg(self)

    def __call__(self, label: Label) -> bool:
        return holds(self, label)

    def __repr__(self) -> str:
        return str(self)


@dataclass(frozen=True, repr=False)
class _Top(Predicate):
    def __str__(self) -> str:
        return "true"


@dataclass(frozen=True, repr=False)
class _Bottom(Predicate):
    def __str__(self) -> str:
        return "false"


TOP: Predicate = _Top()
BOTTOM: Predicate = _Bottom()


@dataclass(frozen=True, repr=False)
class Mod(Predicate):
    """``n ≡ residue (mod modulus)``; ``Mod(d, 0)`` is divisibility by d."""

    modulus: int
    residue: int = 0

    def __post_init__(self):
        if self.modulus < 1:
            raise ValueError(f"modulus must be positive, got {self.modulus}")
        object.__setattr__(self, "residue", self.residue % self.modulus)

    def __str__(self) -> str:
        if self.residue == 0:
            return f"(div {self.modulus})"
        return f"(mod {self.modulus} {self.residue})"


@dataclass(frozen=True, repr=False)
class Range(Predicate):
    """``lo <= n <= hi``; ``None`` leaves a side open."""

    lo: Optional[int] = None
    hi: Optional[int] = None

    def __str__(self) -> str:
        if self.lo is None and self.hi is None:
            return "int"
        lo = "_" if self.lo is None else str(self.lo)
        hi = "_" if self.hi is None else str(self.hi)
        return f"(range {lo} {hi})"


@dataclass(frozen=True, repr=False)
class Eq(Predicate):
    value: Label

    def __str__(self) -> str:
        return f"(eq {self.value})"


@dataclass(frozen=True, repr=False)
class In(Predicate):
    symbols: frozenset

    def __str__(self) -> str:
        body = " ".join(str(s) for s in sorted(self.symbols, key=_label_key))
        return f"(in {body})" if body else "(in)"


@dataclass(frozen=True, repr=False)
class Not(Predicate):
    arg: Predicate

    def __str__(self) -> str:
        return f"(not {self.arg})"


@dataclass(frozen=True, repr=False)
class And(Predicate):
    args: tuple

    def __str__(self) -> str:
        return _fold_binary("and", self.args)


@dataclass(frozen=True, repr=False)
class Or(Predicate):
    args: tuple

    def __str__(self) -> str:
        return _fold_binary("or", self.args)


def _fold_binary(op: str, args: Sequence[Predicate]) -> str:
    # the textual syntax is binary; n-ary nodes print right-nested
    text = str(args[-1])
    for arg in reversed(args[:-1]):
        text = f"({op} {arg} {text})"
    return text


ATOMS = (Mod, Range, Eq, In)


def _label_key(label: Label):
    return (0, label, "") if isinstance(label, int) else (1, 0, str(label))


def div(d: int) -> Predicate:
    return Mod(d, 0)


def mod(m: int, c: int) -> Predicate:
    return Mod(m, c)


def in_range(lo: Optional[int] = None, hi: Optional[int] = None) -> Predicate:
    if lo is None and hi is None:
        return TOP
    if lo is not None and hi is not None and lo > hi:
        return BOTTOM
    return Range(lo, hi)


def eq(value: Label) -> Predicate:
    return Eq(value)


def in_set(symbols: Iterable[Label]) -> Predicate:
    return In(frozenset(symbols))


def neg(p: Predicate) -> Predicate:
    if p is TOP:
        return BOTTOM
    if p is BOTTOM:
        return TOP
    if isinstance(p, Not):
        return p.arg
    return Not(p)


def conj(*ps: Predicate) -> Predicate:
    args: list = []
    for p in ps:
        parts = p.args if isinstance(p, And) else (p,)
        for q in parts:
            if q is BOTTOM:
                return BOTTOM
            if q is TOP or q in args:
                continue
            args.append(q)
    if not args:
        return TOP
    if len(args) == 1:
        return args[0]
    return And(tuple(args))


def disj(*ps: Predicate) -> Predicate:
    args: list = []
    for p in ps:
        parts = p.args if isinstance(p, Or) else (p,)
        for q in parts:
            if q is TOP:
                return TOP
            if q is BOTTOM or q in args:
                continue
            args.append(q)
    if not args:
        return BOTTOM
    if len(args) == 1:
        return args[0]
    return Or(tuple(args))


def combine(op: str, *args: Predicate) -> Predicate:
    """Build ``op`` over ``args``; op is one of and/or/not/top/bottom."""
    arity = {"not": 1, "top": 0, "bottom": 0}
    if op in arity and len(args) != arity[op]:
        raise ValueError(f"{op} takes {arity[op]} argument(s), got {len(args)}")
    if op == "and":
        return conj(*args)
    if op == "or":
        return disj(*args)
    if op == "not":
        return neg(args[0])
    if op == "top":
        return TOP
    if op == "bottom":
        return BOTTOM
    raise ValueError(f"unknown operator {op!r}")


def holds(p: Predicate, a: Label) -> bool:
    """Evaluate ``p`` at ``a``.  Integer atoms are false on non-integers."""
    if p is TOP:
        return True
    if p is BOTTOM:
        return False
    if isinstance(p, Mod):
        return isinstance(a, int) and a % p.modulus == p.residue
    if isinstance(p, Range):
        if not isinstance(a, int):
            return False
        return (p.lo is None or a >= p.lo) and (p.hi is None or a <= p.hi)
    if isinstance(p, Eq):
        return a == p.value and type(a) is type(p.value)
    if isinstance(p, In):
        return a in p.symbols
    if isinstance(p, Not):
        return not holds(p.arg, a)
    if isinstance(p, And):
        return all(holds(q, a) for q in p.args)
    if isinstance(p, Or):
        return any(holds(q, a) for q in p.args)
    raise TypeError(f"not a predicate: {p!r}")


def atoms_of(p: Predicate) -> list:
    out: list = []
    stack = [p]
    while stack:
        q = stack.pop()
        if isinstance(q, ATOMS):
            out.append(q)
        elif isinstance(q, Not):
            stack.append(q.arg)
        elif isinstance(q, (And, Or)):
            stack.extend(q.args)
    return out


# ---------------------------------------------------------------------------
# Label functions
# ---------------------------------------------------------------------------


class FnTerm:
    """A unary partial label function.  ``apply`` returns None where undefined."""

    __slots__ = ()
    domain_kind: Optional[str] = None
    codomain_kind: Optional[str] = None

    def apply(self, a: Label) -> Optional[Label]:
        raise NotImplementedError

    def __call__(self, a: Label) -> Optional[Label]:
        return self.apply(a)

    def is_total(self) -> bool:
        return False

    def __repr__(self) -> str:
        return str(self)


def _kind_of(value: Label) -> str:
    return "int" if isinstance(value, int) else "finite"


@dataclass(frozen=True, repr=False)
class Identity(FnTerm):
    def apply(self, a):
        return a

    def is_total(self):
        return True

    def __str__(self):
        return "id"


IDENTITY = Identity()


@dataclass(frozen=True, repr=False)
class Const(FnTerm):
    value: Label

    @property
    def codomain_kind(self):
        return _kind_of(self.value)

    def apply(self, a):
        return self.value

    def is_total(self):
        return True

    def __str__(self):
        return f"(const {self.value})"


@dataclass(frozen=True, repr=False)
class Affine(FnTerm):
    """``n -> (p*n + q) / r``, defined only where r divides p*n + q."""

    p: int
    q: int
    r: int = 1
    domain_kind = "int"
    codomain_kind = "int"

    def __post_init__(self):
        if self.r < 1:
            raise ValueError(f"affine divisor must be positive, got {self.r}")

    def apply(self, a):
        if not isinstance(a, int):
            raise TheoryMismatch(f"{self} applied to non-integer label {a!r}")
        num = self.p * a + self.q
        if num % self.r:
            return None
        return num // self.r

    def is_total(self):
        return self.r == 1

    def __str__(self):
        return f"(affine {self.p} {self.q} {self.r})"


@dataclass(frozen=True, repr=False)
class FiniteMap(FnTerm):
    """An explicit partial map given as sorted ``(argument, value)`` pairs."""

    pairs: tuple

    @staticmethod
    def of(mapping) -> "FiniteMap":
        items = mapping.items() if hasattr(mapping, "items") else mapping
        return FiniteMap(tuple(sorted(items, key=lambda kv: _label_key(kv[0]))))

    @property
    def table(self) -> dict:
        return dict(self.pairs)

    @property
    def domain_kind(self):
        kinds = {_kind_of(a) for a, _ in self.pairs}
        return kinds.pop() if len(kinds) == 1 else None

    @property
    def codomain_kind(self):
        kinds = {_kind_of(b) for _, b in self.pairs}
        return kinds.pop() if len(kinds) == 1 else None

    def apply(self, a):
        for x, y in self.pairs:
            if x == a:
                return y
        return None

    def __str__(self):
        body = " ".join(f"({a} {b})" for a, b in self.pairs)
        return f"(map {body})" if body else "(map)"


@dataclass(frozen=True, repr=False)
class Composed(FnTerm):
    """``a -> second(first(a))``, kept unfolded when folding would lose partiality."""

    first: FnTerm
    second: FnTerm

    @property
    def domain_kind(self):
        return self.first.domain_kind

    @property
    def codomain_kind(self):
        return self.second.codomain_kind

    def apply(self, a):
        b = self.first.apply(a)
        return None if b is None else self.second.apply(b)

    def is_total(self):
        return self.first.is_total() and self.second.is_total()

    def __str__(self):
        return f"(comp {self.first} {self.second})"


def apply_fn(f: FnTerm, a: Label) -> Optional[Label]:
    return f.apply(a)


def _reduce_affine(p: int, q: int, r: int) -> FnTerm:
    g = math.gcd(math.gcd(p, q), r)
    p, q, r = p // g, q // g, r // g
    if (p, q, r) == (1, 0, 1):
        return IDENTITY
    return Affine(p, q, r)


def _affine_fold_exact(f: Affine, g: Affine, folded: FnTerm) -> bool:
    # both domains are periodic with period f.r * g.r
    period = f.r * g.r
    for n in range(period):
        inner = f.apply(n)
        truth = inner is not None and g.apply(inner) is not None
        if truth != (folded.apply(n) is not None):
            return False
    return True


def compose_fn(f: FnTerm, g: FnTerm) -> FnTerm:
    """The function ``a -> g(f(a))``; undefinedness of ``f`` propagates."""
    if f.codomain_kind and g.domain_kind and f.codomain_kind != g.domain_kind:
        raise TheoryMismatch(f"cannot compose {f} ({f.codomain_kind}) with {g} ({g.domain_kind})")
    if isinstance(f, Identity):
        return g
    if isinstance(g, Identity):
        return f
    if isinstance(f, Const):
        image = g.apply(f.value)
        return Const(image) if image is not None else Composed(f, g)
    if isinstance(g, Const):
        return g if f.is_total() else Composed(f, g)
    if isinstance(f, FiniteMap):
        out = []
        for a, b in f.pairs:
            c = g.apply(b)
            if c is not None:
                out.append((a, c))
        return FiniteMap(tuple(out))
    if isinstance(f, Affine) and isinstance(g, Affine):
        folded = _reduce_affine(g.p * f.p, g.p * f.q + g.q * f.r, f.r * g.r)
        if f.r == 1 or _affine_fold_exact(f, g, folded):
            return folded
    return Composed(f, g)


# ---------------------------------------------------------------------------
# Congruence arithmetic
# ---------------------------------------------------------------------------


def _solve_linear_congruence(a: int, b: int, m: int) -> Predicate:
    """Predicate for ``{n : a*n ≡ b (mod m)}``."""
    a %= m
    b %= m
    g = math.gcd(a, m)
    if b % g:
        return BOTTOM
    m2 = m // g
    if m2 == 1:
        return TOP
    x = (b // g) * pow(a // g, -1, m2) % m2
    return Mod(m2, x)


def _crt(r1: int, m1: int, r2: int, m2: int) -> Optional[tuple]:
    """Combine ``x ≡ r1 (m1)`` and ``x ≡ r2 (m2)``; None when inconsistent."""
    g = math.gcd(m1, m2)
    if (r2 - r1) % g:
        return None
    lcm = m1 // g * m2
    n = m2 // g
    k = ((r2 - r1) // g) * pow(m1 // g, -1, n) % n if n > 1 else 0
    return (r1 + m1 * k) % lcm, lcm


def _floor_div(a: int, b: int) -> int:
    return a // b


def _ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


# ---------------------------------------------------------------------------
# Preimage and image
# ---------------------------------------------------------------------------


def _affine_defined(f: Affine) -> Predicate:
    return _solve_linear_congruence(f.p, -f.q, f.r)


def _affine_preimage_atom(f: Affine, atom: Predicate) -> Predicate:
    p, q, r = f.p, f.q, f.r
    if isinstance(atom, Mod):
        # (pn+q)/r ≡ c (mod m)  <=>  pn + q ≡ r*c (mod r*m); definedness included
        return _solve_linear_congruence(p, r * atom.residue - q, r * atom.modulus)
    if isinstance(atom, Eq):
        if not isinstance(atom.value, int):
            return BOTTOM
        target = r * atom.value - q
        if p == 0:
            return TOP if target == 0 else BOTTOM
        return Eq(target // p) if target % p == 0 else BOTTOM
    if isinstance(atom, Range):
        defined = _affine_defined(f)
        if p == 0:
            if q % r:
                return BOTTOM
            return TOP if holds(atom, q // r) else BOTTOM
        lo = hi = None
        # r*lo <= p*n + q <= r*hi
        if atom.lo is not None:
            bound = r * atom.lo - q
            if p > 0:
                lo = _ceil_div(bound, p)
            else:
                hi = _floor_div(bound, p)
        if atom.hi is not None:
            bound = r * atom.hi - q
            if p > 0:
                hi = _floor_div(bound, p) if hi is None else min(hi, _floor_div(bound, p))
            else:
                new_lo = _ceil_div(bound, p)
                lo = new_lo if lo is None else max(lo, new_lo)
        return conj(defined, in_range(lo, hi))
    if isinstance(atom, In):
        raise TheoryMismatch(f"symbol-set predicate {atom} under integer function {f}")
    raise TypeError(f"not an atom: {atom!r}")


def _map_predicate(p: Predicate, on_atom, on_top) -> Predicate:
    """Rebuild ``p`` replacing atoms; ``Not`` is relativized to ``on_top``."""
    if p is TOP:
        return on_top
    if p is BOTTOM:
        return BOTTOM
    if isinstance(p, ATOMS):
        return on_atom(p)
    if isinstance(p, Not):
        return conj(on_top, neg(_map_predicate(p.arg, on_atom, on_top)))
    if isinstance(p, And):
        return conj(*(_map_predicate(q, on_atom, on_top) for q in p.args))
    if isinstance(p, Or):
        return disj(*(_map_predicate(q, on_atom, on_top) for q in p.args))
    raise TypeError(f"not a predicate: {p!r}")


def preimage(f: FnTerm, psi: Predicate) -> Predicate:
    """Atom-normalized predicate true at ``a`` iff ``f(a)`` is defined and satisfies ``psi``."""
    if isinstance(f, Identity):
        return psi
    if isinstance(f, Const):
        return TOP if holds(psi, f.value) else BOTTOM
    if isinstance(f, FiniteMap):
        return in_set(a for a, b in f.pairs if holds(psi, b))
    if isinstance(f, Composed):
        return preimage(f.first, preimage(f.second, psi))
    if isinstance(f, Affine):
        return _map_predicate(psi, lambda atom: _affine_preimage_atom(f, atom), _affine_defined(f))
    raise CapabilityError(f"no preimage rule for {f!r}")


# ---------------------------------------------------------------------------
# Theories
# ---------------------------------------------------------------------------


class Theory:
    """An effective label structure: universe membership, satisfiability, images."""

    kind: str = ""
    has_image: bool = True

    def contains(self, label: Label) -> bool:
        raise NotImplementedError

    def check_label(self, label: Label) -> Label:
        if not self.contains(label):
            raise DomainError(f"label {label!r} is outside the {self.kind} universe")
        return label

    def eval(self, p: Predicate, label: Label) -> bool:
        return holds(p, self.check_label(label))

    def witness(self, p: Predicate) -> Optional[Label]:
        raise NotImplementedError

    def is_empty(self, p: Predicate) -> bool:
        return self.witness(p) is None

    def is_valid(self, p: Predicate) -> bool:
        return self.witness(neg(p)) is None

    def equivalent(self, p: Predicate, q: Predicate) -> bool:
        return self.is_empty(disj(conj(p, neg(q)), conj(q, neg(p))))

    def minterms_with_signs(self, preds: Sequence[Predicate]) -> list:
        """Satisfiable sign-vector conjunctions as ``(signs, predicate)`` pairs."""
        cells = [((), TOP)]
        for phi in preds:
            nxt = []
            for signs, cell in cells:
                pos = conj(cell, phi)
                if not self.is_empty(pos):
                    nxt.append((signs + (True,), pos))
                negative = conj(cell, neg(phi))
                if not self.is_empty(negative):
                    nxt.append((signs + (False,), negative))
            cells = nxt
        return cells

    def minterms(self, preds: Sequence[Predicate]) -> list:
        return [cell for _, cell in self.minterms_with_signs(preds)]

    def preimage(self, f: FnTerm, psi: Predicate) -> Predicate:
        return preimage(f, psi)

    def image(self, f: FnTerm, phi: Predicate) -> Predicate:
        """Predicate denoting ``f([[phi]])``; ``phi`` is over this theory."""
        if not self.has_image:
            raise CapabilityError(f"{self.kind} theory does not support images")
        if isinstance(f, Identity):
            return phi
        if isinstance(f, Const):
            return BOTTOM if self.is_empty(phi) else Eq(f.value)
        if isinstance(f, Composed):
            mid = self.image(f.first, phi)
            return self.image(f.second, mid)
        return self._image(f, phi)

    def _image(self, f: FnTerm, phi: Predicate) -> Predicate:
        raise CapabilityError(f"no image rule for {f!r} in the {self.kind} theory")

    def parse_label(self, token: str) -> Label:
        raise NotImplementedError


@dataclass(frozen=True)
class IntegerTheory(Theory):
    kind = "int"

    def contains(self, label):
        return isinstance(label, int) and not isinstance(label, bool)

    def witness(self, p: Predicate) -> Optional[int]:
        return integer_witness(p)

    def _image(self, f, phi):
        if isinstance(f, Affine):
            if f.p == 0:
                if f.q % f.r:
                    return BOTTOM
                return BOTTOM if self.is_empty(phi) else Eq(f.q // f.r)
            # b = (p n + q)/r  <=>  n = (r b - q)/p
            inverse = Affine(f.r, -f.q, f.p) if f.p > 0 else Affine(-f.r, f.q, -f.p)
            return preimage(inverse, phi)
        if isinstance(f, FiniteMap):
            return in_set(b for a, b in f.pairs if holds(phi, a))
        return super()._image(f, phi)

    def parse_label(self, token):
        try:
            return int(token)
        except ValueError:
            raise DomainError(f"integer label expected, got {token!r}") from None

    def __str__(self):
        return "int"


@dataclass(frozen=True)
class FiniteTheory(Theory):
    """Labels from an explicit symbol set; ``ranks`` optionally ranks the symbols."""

    universe: frozenset
    ranks: tuple = ()
    kind = "finite"

    @staticmethod
    def of(symbols: Iterable[Label], ranks=None) -> "FiniteTheory":
        rank_items = tuple(sorted((ranks or {}).items(), key=lambda kv: _label_key(kv[0])))
        return FiniteTheory(frozenset(symbols) | frozenset(dict(rank_items)), rank_items)

    @property
    def rank_of(self) -> dict:
        return dict(self.ranks)

    @property
    def symbols(self) -> list:
        return sorted(self.universe, key=_label_key)

    def contains(self, label):
        return label in self.universe

    def denotation(self, p: Predicate) -> frozenset:
        return frozenset(a for a in self.universe if holds(p, a))

    def witness(self, p):
        for a in self.symbols:
            if holds(p, a):
                return a
        return None

    def _image(self, f, phi):
        out = set()
        for a in self.universe:
            if holds(phi, a):
                b = f.apply(a)
                if b is not None:
                    out.add(b)
        return in_set(out)

    def parse_label(self, token):
        label = _coerce_symbol(token)
        return self.check_label(label)

    def __str__(self):
        return "finite"


def _coerce_symbol(token: str) -> Label:
    try:
        return int(token)
    except ValueError:
        return token


INTEGERS = IntegerTheory()


def require_same_theory(*theories: Theory) -> Theory:
    first = theories[0]
    for t in theories[1:]:
        if t != first:
            raise TheoryMismatch(f"theory mismatch: {first} vs {t}")
    return first


# ---------------------------------------------------------------------------
# Integer decision procedure
# ---------------------------------------------------------------------------


def _vector_mask(atom: Predicate, xs: np.ndarray) -> np.ndarray:
    if isinstance(atom, Mod):
        return (xs % atom.modulus) == atom.residue
    if isinstance(atom, Range):
        mask = np.ones(xs.shape, dtype=bool)
        if atom.lo is not None:
            mask &= xs >= atom.lo
        if atom.hi is not None:
            mask &= xs <= atom.hi
        return mask
    if isinstance(atom, Eq):
        if not isinstance(atom.value, int):
            return np.zeros(xs.shape, dtype=bool)
        return xs == atom.value
    if isinstance(atom, In):
        ints = [s for s in atom.symbols if isinstance(s, int)]
        return np.isin(xs, ints) if ints else np.zeros(xs.shape, dtype=bool)
    raise TypeError(f"not an atom: {atom!r}")


def _closest_to_zero(values: Iterable[int]) -> Optional[int]:
    best = None
    for v in values:
        if best is None or (abs(v), v < 0) < (abs(best), best < 0):
            best = v
    return best


def _conjunct_witness(literals: tuple) -> Optional[int]:
    for atom, sign in literals:
        if sign and isinstance(atom, Eq):
            v = atom.value
            if not isinstance(v, int):
                return None
            ok = all(holds(a, v) == s for a, s in literals)
            return v if ok else None
        if sign and isinstance(atom, In):
            cands = sorted((s for s in atom.symbols if isinstance(s, int)), key=lambda v: (abs(v), v < 0))
            for v in cands:
                if all(holds(a, v) == s for a, s in literals):
                    return v
            return None
    # positive congruences fix a residue class to step through
    residue, step = 0, 1
    moduli = []
    constants = []
    for atom, sign in literals:
        if isinstance(atom, Mod):
            moduli.append(atom.modulus)
            if sign:
                combined = _crt(residue, step, atom.residue, atom.modulus)
                if combined is None:
                    return None
                residue, step = combined
        elif isinstance(atom, Range):
            constants.extend(c for c in (atom.lo, atom.hi) if c is not None)
        elif isinstance(atom, Eq) and isinstance(atom.value, int):
            constants.append(atom.value)
        elif isinstance(atom, In):
            constants.extend(s for s in atom.symbols if isinstance(s, int))
    period = reduce(math.lcm, moduli, 1)
    if constants:
        low, high = min(constants), max(constants)
    else:
        low, high = -period * K0, period * K0
    start = min(low, 0) - period
    stop = max(high, 0) + period
    first = start + (residue - start) % step
    xs = np.arange(first, stop + 1, step, dtype=np.int64)
    if xs.size == 0:
        return None
    mask = np.ones(xs.shape, dtype=bool)
    for atom, sign in literals:
        m = _vector_mask(atom, xs)
        mask &= m if sign else ~m
        if not mask.any():
            return None
    hits = xs[mask]
    order = np.lexsort(((hits < 0), np.abs(hits)))
    return int(hits[order[0]])


@lru_cache(maxsize=65536)
def integer_witness(p: Predicate) -> Optional[int]:
    """Smallest-magnitude integer satisfying ``p`` (ties go to the nonnegative one)."""
    if p is TOP:
        return 0
    if p is BOTTOM:
        return None
    atoms = list(dict.fromkeys(atoms_of(p)))
    found: list = []

    # Split on atoms one at a time; a branch dies as soon as its literals are
    # jointly unsatisfiable or the formula is already false under them.  When
    # the formula is decided true the branch's solutions are exactly the
    # integers meeting its literals.  Avoids the DNF blow-up on nested guards.
    def search(i, literals, assign):
        value = _eval3(p, assign)
        if value is False:
            return
        w = _conjunct_witness(literals)
        if w is None:
            return
        if value is True:
            found.append(w)
            return
        atom = atoms[i]
        for sign in (True, False):
            assign[atom] = sign
            search(i + 1, literals + ((atom, sign),), assign)
            del assign[atom]

    search(0, (), {})
    return _closest_to_zero(found)


def _eval3(p: Predicate, assign: dict):
    """Three-valued truth of ``p`` under a partial atom assignment (None = unknown)."""
    if p is TOP:
        return True
    if p is BOTTOM:
        return False
    if isinstance(p, ATOMS):
        return assign.get(p)
    if isinstance(p, Not):
        v = _eval3(p.arg, assign)
        return None if v is None else not v
    unknown = False
    stop = isinstance(p, Or)
    for q in p.args:
        v = _eval3(q, assign)
        if v is None:
            unknown = True
        elif v is stop:
            return stop
    return None if unknown else not stop


def satisfiable(p: Predicate, theory: Theory = INTEGERS) -> Optional[Label]:
    return theory.witness(p)


def eval_pred(p: Predicate, a: Label, theory: Theory = INTEGERS) -> bool:
    return theory.eval(p, a)


def minterms(preds: Sequence[Predicate], theory: Theory = INTEGERS) -> list:
    return theory.minterms(preds)


def image(f: FnTerm, phi: Predicate, theory: Theory = INTEGERS) -> Predicate:
    return theory.image(f, phi)

"""Domains, backward and forward application, ranges and type checking."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Optional

from .compose import syntactic_compose
from .errors import PreconditionError, TheoryMismatch
from .sta import Sta, StaRule, intersect, sta_empty, sta_included
from .srtg import Srtg, empty_srtg, srtg_normalize, srtg_reduce, srtg_to_sta, sta_to_srtg, universal_srtg
from .stt import Stt, identity_stt, non_linear_rules, non_simple_rules, stt_apply
from .theory import TOP, conj, eq
from .tree import Call, StateRef, Tree, format_tree


def _state_set(states) -> frozenset:
    return frozenset(states)


def domain_srtg(m: Stt) -> Srtg:
    """Grammar over subsets of M's states generating dom(M).

    A subset P = {p1..pm} derives ξ iff every p_j has an output on ξ.  For
    each arity and each choice of one rule per p_j the grammar has the rule
    ``P -> (φ1 ∧ ... ∧ φm)(P1, ..., Pl)`` where ``P_i`` collects the states
    called on x_i.  The empty subset generates every k-bounded tree.
    Subsets are explored lazily from ``{q0}``.
    """
    start = _state_set([m.init])
    order = {q: i for i, q in enumerate(m.states)}
    rules: list = []
    seen_rules: set = set()
    seen = {start}
    todo = [start]
    while todo:
        subset = todo.pop(0)
        members = sorted(subset, key=lambda q: order[q])
        for l in range(m.k + 1):
            options = [m.rules_for(p, l) for p in members]
            for choice in product(*options):
                guard = conj(*[r.guard for r in choice]) if choice else TOP
                if m.in_theory.is_empty(guard):
                    continue
                kids = []
                for i in range(1, l + 1):
                    kid = _state_set(c.state for r in choice for c in r.calls() if c.index == i)
                    kids.append(kid)
                    if kid not in seen:
                        seen.add(kid)
                        todo.append(kid)
                key = (subset, guard, tuple(kids))
                if key in seen_rules:
                    continue
                seen_rules.add(key)
                rules.append((subset, Tree(guard, [Tree(StateRef(s)) for s in kids])))
    return Srtg.build(m.k, m.in_theory, list(seen), start, rules)


def backward_apply(m: Stt, a: Sta) -> Srtg:
    """Grammar for ``M⁻¹(L(a)) = {ξ : some output of ξ is in L(a)}``."""
    if m.out_theory != a.theory:
        raise TheoryMismatch(f"transducer outputs {m.out_theory} labels but the automaton reads {a.theory}")
    if a.k < m.k:
        a = a.lift(m.k)
    return domain_srtg(syntactic_compose(m, identity_stt(a)))


def check_simple_linear(m: Stt):
    bad = non_simple_rules(m)
    if bad:
        raise PreconditionError(f"transducer is not simple: rule {bad[0]} has "
                                f"{len(bad[0].functions())} function symbols")
    bad = non_linear_rules(m)
    if bad:
        raise PreconditionError(f"transducer is not linear: rule {bad[0]} copies a variable")


def forward_apply_slin(m: Stt, g: Srtg) -> Srtg:
    """Grammar for M(L(g)) when M is simple and linear.

    With g in reduced normal form, a transducer rule
    ``q(φ(x1..xl)) -> f(q1(x_i1), ..., qn(x_in))`` and a grammar rule
    ``p -> ψ(p1..pl)`` give ``<q,p> -> f[φ∧ψ](<q1,p_i1>, ..., <qn,p_in>)``
    where ``f[χ]`` is the image of χ under f.
    """
    check_simple_linear(m)
    if g.theory != m.in_theory:
        raise TheoryMismatch(f"grammar over {g.theory} but transducer reads {m.in_theory}")
    for r in m.rules:
        if isinstance(r.rhs.label, Call) or any(not isinstance(c.label, Call) for c in r.rhs.children):
            raise PreconditionError(f"rule {r} is not of the form f(q1(x_i1), ..., qn(x_in))")
    gn = srtg_normalize(g)
    init = (m.init, gn.init)
    rules = []
    for r in m.rules:
        f = r.rhs.label
        for p, rhs in gn.rules:
            if len(rhs.children) != r.arity:
                continue
            phi = conj(r.guard, rhs.label)
            if m.in_theory.is_empty(phi):
                continue
            guard = m.in_theory.image(f, phi)
            if m.out_theory.is_empty(guard):
                continue
            kids = [Tree(StateRef((c.label.state, rhs.children[c.label.index - 1].label.state)))
                    for c in r.rhs.children]
            rules.append(((r.state, p), Tree(guard, kids)))
    out = Srtg.build(m.k, m.out_theory, [init], init, rules)
    return srtg_reduce(out)


def range_slin(m: Stt) -> Srtg:
    return forward_apply_slin(m, universal_srtg(m.in_theory, m.k))


# ---------------------------------------------------------------------------
# Type checking
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TypeCheckReport:
    verdict: str                 # "holds" or "fails"
    method: str                  # "forward-slin" or "backward"
    input_tree: Optional[Tree] = None
    output_tree: Optional[Tree] = None

    @property
    def holds(self) -> bool:
        return self.verdict == "holds"

    def __str__(self):
        if self.holds:
            return f"holds ({self.method})"
        out = "-" if self.output_tree is None else format_tree(self.output_tree)
        return f"fails ({self.method}): input {format_tree(self.input_tree)} output {out}"


def singleton_sta(t: Tree, theory, k: int) -> Sta:
    """Automaton accepting exactly ``t``."""
    rules = []
    counter = [0]

    def go(u: Tree):
        kids = [go(c) for c in u.children]
        q = f"n{counter[0]}"
        counter[0] += 1
        rules.append(StaRule(tuple(kids), eq(u.label), q))
        return q

    root = go(t)
    return Sta.build(k, theory, [r.rhs for r in rules], [root], rules)


def typecheck(m: Stt, l_in: Sta, l_out: Sta, mode: str = "forward") -> TypeCheckReport:
    """Decide ``M(L_in) ⊆ L_out`` (forward) or ``M⁻¹(L_out) ⊆ L_in`` (inverse)."""
    if mode == "forward":
        image = srtg_to_sta(forward_apply_slin(m, sta_to_srtg(l_in)))
        bad_out = sta_included(image, l_out)
        if bad_out is None:
            return TypeCheckReport("holds", "forward-slin")
        # some input of L_in produces bad_out
        pre = srtg_to_sta(backward_apply(m, singleton_sta(bad_out, m.out_theory, max(m.k, l_out.k))))
        bad_in = sta_empty(intersect(pre, l_in))
        return TypeCheckReport("fails", "forward-slin", bad_in, bad_out)
    if mode in ("inverse", "backward"):
        pre = srtg_to_sta(backward_apply(m, l_out))
        bad_in = sta_included(pre, l_in)
        if bad_in is None:
            return TypeCheckReport("holds", "backward")
        outs = sorted((z for z in stt_apply(m, bad_in) if l_out.lift(max(l_out.k, z.rank())).member(z)),
                      key=format_tree)
        return TypeCheckReport("fails", "backward", bad_in, outs[0] if outs else None)
    raise ValueError(f"unknown type-checking mode {mode!r}")

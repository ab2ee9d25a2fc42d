"""Textual syntax: s-expressions, predicates, label functions and trees.

Predicates and functions are written as s-expressions, e.g.
``(and (div 2) (not (range _ 10)))`` or ``(comp (affine 1 0 6) (const 9))``.
Trees use the compact term syntax ``6(12(4,6),7)``.
"""

from __future__ import annotations

import re
from typing import Optional

from .errors import ParseError
from .theory import (
    BOTTOM, IDENTITY, TOP, Range, Affine, Composed, Const, FiniteMap, FnTerm, Predicate,
    combine, div, eq, in_range, in_set, mod, neg,
)
from .tree import Tree

# ---------------------------------------------------------------------------
# s-expressions
# ---------------------------------------------------------------------------

_TOKEN = re.compile(r'\s+|;[^\n]*|(\()|(\))|"((?:[^"\\]|\\.)*)"|([^\s()";]+)')


class Sym(str):
    """A quoted atom; never coerced to an integer."""


def read_all(text: str) -> list:
    """Parse every top-level s-expression in ``text``.  Atoms stay strings."""
    stack: list = [[]]
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r} at offset {pos}")
        pos = m.end()
        if m.group(1):
            stack.append([])
        elif m.group(2):
            if len(stack) == 1:
                raise ParseError(f"unbalanced ')' at offset {m.start()}")
            done = stack.pop()
            stack[-1].append(done)
        elif m.group(3) is not None:
            stack[-1].append(Sym(bytes(m.group(3), "utf-8").decode("unicode_escape")))
        elif m.group(4):
            stack[-1].append(m.group(4))
    if len(stack) != 1:
        raise ParseError("unbalanced '(': input ended inside a list")
    return stack[0]


def read(text: str):
    forms = read_all(text)
    if len(forms) != 1:
        raise ParseError(f"expected one expression, found {len(forms)}")
    return forms[0]


def atom(x, what="atom") -> str:
    if isinstance(x, list):
        raise ParseError(f"expected {what}, got a list {write(x)}")
    return x


def write(x) -> str:
    if isinstance(x, list):
        return "(" + " ".join(write(e) for e in x) + ")"
    if isinstance(x, Sym) or x == "" or re.search(r'[\s()";]', str(x)):
        return '"' + str(x).replace("\\", "\\\\").replace('"', '\\"') + '"'
    return str(x)


def to_int(x, what="integer") -> int:
    try:
        return int(atom(x, what))
    except (TypeError, ValueError):
        raise ParseError(f"expected {what}, got {x!r}") from None


def to_label(x):
    """Numeric atoms become ints; anything else stays a symbol."""
    s = atom(x, "label")
    if isinstance(s, Sym):
        return str(s)
    try:
        return int(s)
    except ValueError:
        return s


def split_ranked(x) -> tuple:
    """``NAME/RANK`` into ``(name, rank)``."""
    s = atom(x, "NAME/RANK")
    name, sep, rank = s.rpartition("/")
    if not sep or not name:
        raise ParseError(f"expected NAME/RANK, got {s!r}")
    try:
        return to_label(name), int(rank)
    except ValueError:
        raise ParseError(f"bad rank in {s!r}") from None


def keywords(form: list, start: int = 1) -> dict:
    """``:key value`` pairs of a header form."""
    out = {}
    rest = form[start:]
    if len(rest) % 2:
        raise ParseError(f"dangling keyword in {write(form)}")
    for key, value in zip(rest[::2], rest[1::2]):
        key = atom(key, "keyword")
        if not key.startswith(":"):
            raise ParseError(f"expected a :keyword, got {key!r}")
        out[key[1:]] = value
    return out


# ---------------------------------------------------------------------------
# Predicates and functions
# ---------------------------------------------------------------------------

_TRUE = {"true", "top", "⊤"}
INT = Range(None, None)      # every integer, and nothing else
_FALSE = {"false", "bottom", "⊥"}


def _bound(x) -> Optional[int]:
    return None if atom(x) == "_" else to_int(x, "bound")


def parse_pred(x) -> Predicate:
    if isinstance(x, str):
        if x in _TRUE:
            return TOP
        if x in _FALSE:
            return BOTTOM
        if x == "int":
            return INT
        raise ParseError(f"unknown predicate {x!r}")
    if not x:
        raise ParseError("empty predicate form")
    head = atom(x[0], "predicate operator")
    args = x[1:]
    try:
        if head == "div" and len(args) == 1:
            return div(to_int(args[0]))
        if head == "mod" and len(args) == 2:
            return mod(to_int(args[0]), to_int(args[1]))
        if head == "range" and len(args) == 2:
            return in_range(_bound(args[0]), _bound(args[1]))
        if head == "eq" and len(args) == 1:
            return eq(to_label(args[0]))
        if head == "in":
            return in_set(to_label(a) for a in args)
        if head == "not" and len(args) == 1:
            return neg(parse_pred(args[0]))
        if head in ("and", "or"):
            return combine(head, *[parse_pred(a) for a in args])
    except ValueError as exc:
        if isinstance(exc, ParseError):
            raise
        raise ParseError(f"bad predicate {write(x)}: {exc}") from None
    raise ParseError(f"unknown predicate form {write(x)}")


def parse_pred_text(text: str) -> Predicate:
    return parse_pred(read(text))


def parse_fn(x) -> FnTerm:
    if isinstance(x, str):
        if x in ("id", "identity"):
            return IDENTITY
        raise ParseError(f"unknown function {x!r}")
    if not x:
        raise ParseError("empty function form")
    head = atom(x[0], "function name")
    args = x[1:]
    if head == "const" and len(args) == 1:
        return Const(to_label(args[0]))
    if head == "affine" and len(args) == 3:
        try:
            return Affine(*(to_int(a) for a in args))
        except ValueError as exc:
            raise ParseError(f"bad affine function {write(x)}: {exc}") from None
    if head == "map":
        pairs = []
        for pair in args:
            if not isinstance(pair, list) or len(pair) != 2:
                raise ParseError(f"map entries are (A B) pairs, got {write(pair)}")
            pairs.append((to_label(pair[0]), to_label(pair[1])))
        return FiniteMap.of(dict(pairs))
    if head == "comp" and len(args) == 2:
        return Composed(parse_fn(args[0]), parse_fn(args[1]))
    raise ParseError(f"unknown function form {write(x)}")


def parse_fn_text(text: str) -> FnTerm:
    return parse_fn(read(text))


# ---------------------------------------------------------------------------
# Trees
# ---------------------------------------------------------------------------

_TREE_TOKEN = re.compile(r"\s*(?:(-?\d+)|([A-Za-z_][\w.\-']*)|(\()|(\))|(,))")


def parse_tree(text: str) -> Tree:
    """Parse ``6(12(4,6),7)``; ``a()`` is the same leaf as ``a``."""
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TREE_TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            raise ParseError(f"bad tree syntax at offset {pos} in {text!r}")
        pos = m.end()
        if m.group(1):
            tokens.append(("label", int(m.group(1))))
        elif m.group(2):
            tokens.append(("label", m.group(2)))
        elif m.group(3):
            tokens.append(("(", None))
        elif m.group(4):
            tokens.append((")", None))
        elif m.group(5):
            tokens.append((",", None))
    if not tokens:
        raise ParseError("empty tree")
    i = 0

    def term():
        nonlocal i
        if i >= len(tokens) or tokens[i][0] != "label":
            raise ParseError(f"expected a label in tree {text!r}")
        label = tokens[i][1]
        i += 1
        kids = []
        if i < len(tokens) and tokens[i][0] == "(":
            i += 1
            if i < len(tokens) and tokens[i][0] == ")":
                i += 1
                return Tree(label)
            kids.append(term())
            while i < len(tokens) and tokens[i][0] == ",":
                i += 1
                kids.append(term())
            if i >= len(tokens) or tokens[i][0] != ")":
                raise ParseError(f"expected ')' in tree {text!r}")
            i += 1
        return Tree(label, kids)

    t = term()
    if i != len(tokens):
        raise ParseError(f"trailing input in tree {text!r}")
    return t

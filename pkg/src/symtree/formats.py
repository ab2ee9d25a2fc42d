"""Reading and writing the s-expression file formats.

Every file holds one object and starts with a header form naming its kind:

``(sta :theory int :k 2)``            states, final states, ``(rule (q1 .. ql) GUARD q)``
``(srtg :theory int :k 2)``           ``(init q)``, ``(rule q RHS)``, RHS ``(pred P CHILD..)`` / ``(state q)``
``(stt :in-theory int :out-theory int :k 2)``
                                      ``(init q)``, ``(rule q L GUARD RHS)``, RHS ``(fn F CHILD..)`` / ``(call q i)``
``(fta)``                             ``(alphabet NAME/RANK ..)``, ``(rule NAME (q1 .. ql) q)``, optional relabel
``(rtg)``                             ``(init q)``, ``(rule q RHS)``, RHS ``(sym NAME CHILD..)`` / ``(state q)``
``(vta)``                             ``(fta ..)`` block, ``(universe (rank L PRED) ..)``, ``(partition (a ..) (z ..) (y ..))``

A finite theory is declared as ``:theory finite :universe (a/0 f/2 b)``;
the optional ``/RANK`` ranks a symbol.  ``;`` starts a comment.
"""

from __future__ import annotations

import re
from pathlib import Path

from .classical import Fta, Rtg
from .errors import FormatError, ParseError
from .sta import Sta, StaRule, format_state
from .srtg import Srtg
from .stt import Stt, SttRule
from .syntax import atom, keywords, parse_fn, parse_pred, read_all, split_ranked, to_int, to_label, write
from .theory import INTEGERS, FiniteTheory, Theory, _label_key
from .tree import Call, Relabeling, StateRef, Tree
from .vta import Vta

_PLAIN = re.compile(r"^[^\s()\";/]+$")


# ---------------------------------------------------------------------------
# Shared pieces
# ---------------------------------------------------------------------------


def parse_theory(kind, universe=None) -> Theory:
    kind = atom(kind, "theory name")
    if kind == "int":
        return INTEGERS
    if kind == "finite":
        if universe is None or not isinstance(universe, list):
            raise ParseError("a finite theory needs :universe (SYMBOL ...)")
        syms, ranks = [], {}
        for item in universe:
            s = atom(item, "symbol")
            if "/" in s:
                name, rank = split_ranked(s)
                ranks[name] = rank
                syms.append(name)
            else:
                syms.append(to_label(s))
        return FiniteTheory.of(syms, ranks)
    raise ParseError(f"unknown theory {kind!r}")


def theory_words(theory: Theory, prefix: str = "") -> list:
    if isinstance(theory, FiniteTheory):
        ranks = theory.rank_of
        items = [f"{s}/{ranks[s]}" if s in ranks else str(s) for s in theory.symbols]
        return [f":{prefix}theory", "finite", f":{prefix}universe", "(" + " ".join(items) + ")"]
    return [f":{prefix}theory", str(theory)]


def _state(x):
    return to_label(atom(x, "state"))


def _state_text(q) -> str:
    return write(format_state(q))


def _body(forms: list, kind: str) -> tuple:
    if not forms or not isinstance(forms[0], list) or not forms[0] or forms[0][0] != kind:
        found = write(forms[0]) if forms else "nothing"
        raise FormatError(f"expected a ({kind} ...) header, found {found}")
    return keywords(forms[0]), forms[1:]


def _k(head: dict) -> int:
    if "k" not in head:
        raise ParseError("missing :k in header")
    k = to_int(head["k"], ":k")
    if k < 0:
        raise ParseError(":k must be nonnegative")
    return k


def _tagged(forms: list, tag: str) -> list:
    return [f for f in forms if isinstance(f, list) and f and f[0] == tag]


def _check_tags(forms: list, allowed: set):
    for f in forms:
        if not isinstance(f, list) or not f or atom(f[0]) not in allowed:
            raise ParseError(f"unexpected form {write(f)}; allowed: {', '.join(sorted(allowed))}")


# ---------------------------------------------------------------------------
# sta
# ---------------------------------------------------------------------------


def parse_sta(forms: list) -> Sta:
    head, body = _body(forms, "sta")
    theory = parse_theory(head.get("theory", "int"), head.get("universe"))
    _check_tags(body, {"states", "final", "rule"})
    states = [_state(s) for f in _tagged(body, "states") for s in f[1:]]
    final = [_state(s) for f in _tagged(body, "final") for s in f[1:]]
    rules = []
    for f in _tagged(body, "rule"):
        if len(f) != 4 or not isinstance(f[1], list):
            raise ParseError(f"sta rules read (rule (q1 ... ql) GUARD q), got {write(f)}")
        rules.append(StaRule(tuple(_state(s) for s in f[1]), parse_pred(f[2]), _state(f[3])))
    if _tagged(body, "states"):
        used = set(final) | {r.rhs for r in rules} | {q for r in rules for q in r.lhs}
        undeclared = sorted(map(str, used - set(states)))
        if undeclared:
            raise FormatError(f"state {undeclared[0]} is used but not listed in (states ...)")
    return Sta.build(_k(head), theory, states, final, rules)


def dump_sta(a: Sta) -> str:
    lines = ["(" + " ".join(["sta"] + theory_words(a.theory) + [":k", str(a.k)]) + ")"]
    lines.append("(states " + " ".join(_state_text(q) for q in a.states) + ")")
    lines.append("(final " + " ".join(_state_text(q) for q in a.states if q in a.final) + ")")
    for r in a.rules:
        lhs = " ".join(_state_text(q) for q in r.lhs)
        lines.append(f"(rule ({lhs}) {r.guard} {_state_text(r.rhs)})")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# srtg
# ---------------------------------------------------------------------------


def _parse_pred_rhs(x) -> Tree:
    if not isinstance(x, list) or not x:
        raise ParseError(f"grammar rhs must be (pred P ...) or (state q), got {write(x)}")
    if x[0] == "state" and len(x) == 2:
        return Tree(StateRef(_state(x[1])))
    if x[0] == "pred" and len(x) >= 2:
        return Tree(parse_pred(x[1]), [_parse_pred_rhs(c) for c in x[2:]])
    raise ParseError(f"grammar rhs must be (pred P ...) or (state q), got {write(x)}")


def _dump_pred_rhs(u: Tree) -> str:
    if isinstance(u.label, StateRef):
        return f"(state {_state_text(u.label.state)})"
    kids = "".join(" " + _dump_pred_rhs(c) for c in u.children)
    return f"(pred {u.label}{kids})"


def parse_srtg(forms: list) -> Srtg:
    head, body = _body(forms, "srtg")
    theory = parse_theory(head.get("theory", "int"), head.get("universe"))
    _check_tags(body, {"init", "states", "rule"})
    inits = _tagged(body, "init")
    if len(inits) != 1 or len(inits[0]) != 2:
        raise ParseError("an srtg file needs exactly one (init q) form")
    states = [_state(s) for f in _tagged(body, "states") for s in f[1:]]
    rules = []
    for f in _tagged(body, "rule"):
        if len(f) != 3:
            raise ParseError(f"srtg rules read (rule q RHS), got {write(f)}")
        rules.append((_state(f[1]), _parse_pred_rhs(f[2])))
    return Srtg.build(_k(head), theory, states, _state(inits[0][1]), rules)


def dump_srtg(g: Srtg) -> str:
    lines = ["(" + " ".join(["srtg"] + theory_words(g.theory) + [":k", str(g.k)]) + ")"]
    lines.append(f"(init {_state_text(g.init)})")
    lines.append("(states " + " ".join(_state_text(q) for q in g.states) + ")")
    for q, rhs in g.rules:
        lines.append(f"(rule {_state_text(q)} {_dump_pred_rhs(rhs)})")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# stt
# ---------------------------------------------------------------------------


def _parse_fn_rhs(x) -> Tree:
    if not isinstance(x, list) or not x:
        raise ParseError(f"transducer rhs must be (fn F ...) or (call q i), got {write(x)}")
    if x[0] == "call" and len(x) == 3:
        return Tree(Call(_state(x[1]), to_int(x[2], "variable index")))
    if x[0] == "fn" and len(x) >= 2:
        return Tree(parse_fn(x[1]), [_parse_fn_rhs(c) for c in x[2:]])
    raise ParseError(f"transducer rhs must be (fn F ...) or (call q i), got {write(x)}")


def _dump_fn_rhs(u: Tree) -> str:
    if isinstance(u.label, Call):
        return f"(call {_state_text(u.label.state)} {u.label.index})"
    kids = "".join(" " + _dump_fn_rhs(c) for c in u.children)
    return f"(fn {u.label}{kids})"


def parse_stt(forms: list) -> Stt:
    head, body = _body(forms, "stt")
    tin = parse_theory(head.get("in-theory", "int"), head.get("in-universe"))
    tout = parse_theory(head.get("out-theory", "int"), head.get("out-universe"))
    _check_tags(body, {"init", "states", "rule"})
    inits = _tagged(body, "init")
    if len(inits) != 1 or len(inits[0]) != 2:
        raise ParseError("an stt file needs exactly one (init q) form")
    states = [_state(s) for f in _tagged(body, "states") for s in f[1:]]
    rules = []
    for f in _tagged(body, "rule"):
        if len(f) != 5:
            raise ParseError(f"stt rules read (rule q L GUARD RHS), got {write(f)}")
        rules.append(SttRule(_state(f[1]), to_int(f[2], "rule arity"), parse_pred(f[3]), _parse_fn_rhs(f[4])))
    try:
        return Stt.build(_k(head), tin, tout, states, _state(inits[0][1]), rules)
    except TypeError as exc:
        raise FormatError(str(exc)) from None


def dump_stt(m: Stt) -> str:
    words = ["stt"] + theory_words(m.in_theory, "in-") + theory_words(m.out_theory, "out-") + [":k", str(m.k)]
    lines = ["(" + " ".join(words) + ")"]
    lines.append(f"(init {_state_text(m.init)})")
    lines.append("(states " + " ".join(_state_text(q) for q in m.states) + ")")
    for r in m.rules:
        lines.append(f"(rule {_state_text(r.state)} {r.arity} {r.guard} {_dump_fn_rhs(r.rhs)})")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Classical automata, grammars and relabelings
# ---------------------------------------------------------------------------


def _symbol_names(alphabet) -> dict:
    """Printable names; symbols that are not plain tokens become s1, s2, ..."""
    names = {}
    taken = {str(s) for s, _ in alphabet}
    n = 0
    for sym, _ in alphabet:
        text = str(sym)
        if _PLAIN.match(text):
            names[sym] = text
        else:
            n += 1
            while f"s{n}" in taken:
                n += 1
            names[sym] = f"s{n}"
            taken.add(names[sym])
    return names


def _parse_alphabet(body) -> dict:
    return dict(split_ranked(s) for f in _tagged(body, "alphabet") for s in f[1:])


def _parse_relabel(body):
    forms = _tagged(body, "relabel")
    if not forms:
        return None
    f = forms[0]
    head = keywords([f[0]] + [x for x in f[1:] if not isinstance(x, list)])
    theory = parse_theory(head.get("theory", "int"), head.get("universe"))
    pairs = {}
    for entry in f[1:]:
        if isinstance(entry, list):
            if len(entry) != 2:
                raise ParseError(f"relabel entries read (NAME/RANK PRED), got {write(entry)}")
            pairs[split_ranked(entry[0])] = parse_pred(entry[1])
    return Relabeling.of(pairs, theory)


def _dump_relabel(tau: Relabeling, names: dict) -> str:
    words = ["relabel"] + theory_words(tau.theory)
    entries = [f"({names.get(s, s)}/{r} {p})" for (s, r), p in tau.mapping]
    return "(" + " ".join(words + entries) + ")"


def parse_fta(forms: list):
    """An Fta, or ``(Fta, Relabeling)`` when the file has a relabel block."""
    _, body = _body(forms, "fta")
    _check_tags(body, {"alphabet", "states", "final", "rule", "relabel"})
    alphabet = _parse_alphabet(body)
    states = [_state(s) for f in _tagged(body, "states") for s in f[1:]]
    final = [_state(s) for f in _tagged(body, "final") for s in f[1:]]
    trans = []
    for f in _tagged(body, "rule"):
        if len(f) != 4 or not isinstance(f[2], list):
            raise ParseError(f"fta rules read (rule NAME (q1 ... ql) q), got {write(f)}")
        trans.append((to_label(f[1]), tuple(_state(s) for s in f[2]), _state(f[3])))
    fta = Fta.build(states, alphabet, trans, final)
    tau = _parse_relabel(body)
    return fta if tau is None else (fta, tau)


def dump_fta(a: Fta, tau: Relabeling = None) -> str:
    names = _symbol_names(a.alphabet)
    lines = ["(fta)", "(alphabet " + " ".join(f"{names[s]}/{r}" for s, r in a.alphabet) + ")"]
    lines.append("(states " + " ".join(_state_text(q) for q in a.states) + ")")
    lines.append("(final " + " ".join(_state_text(q) for q in a.states if q in a.final) + ")")
    for sym, lhs, q in sorted(a.transitions, key=lambda t: (names[t[0]], repr(t[1]), repr(t[2]))):
        lines.append(f"(rule {names[sym]} ({' '.join(_state_text(p) for p in lhs)}) {_state_text(q)})")
    if tau is not None:
        lines.append(_dump_relabel(tau, names))
    return "\n".join(lines) + "\n"


def _parse_sym_rhs(x) -> Tree:
    if not isinstance(x, list) or not x:
        raise ParseError(f"rtg rhs must be (sym NAME ...) or (state q), got {write(x)}")
    if x[0] == "state" and len(x) == 2:
        return Tree(StateRef(_state(x[1])))
    if x[0] == "sym" and len(x) >= 2:
        return Tree(to_label(x[1]), [_parse_sym_rhs(c) for c in x[2:]])
    raise ParseError(f"rtg rhs must be (sym NAME ...) or (state q), got {write(x)}")


def _dump_sym_rhs(u: Tree, names: dict) -> str:
    if isinstance(u.label, StateRef):
        return f"(state {_state_text(u.label.state)})"
    kids = "".join(" " + _dump_sym_rhs(c, names) for c in u.children)
    return f"(sym {names[u.label]}{kids})"


def parse_rtg(forms: list):
    _, body = _body(forms, "rtg")
    _check_tags(body, {"alphabet", "init", "states", "rule", "relabel"})
    inits = _tagged(body, "init")
    if len(inits) != 1 or len(inits[0]) != 2:
        raise ParseError("an rtg file needs exactly one (init q) form")
    states = [_state(s) for f in _tagged(body, "states") for s in f[1:]]
    rules = [(_state(f[1]), _parse_sym_rhs(f[2])) for f in _tagged(body, "rule")]
    g = Rtg.build(states, _parse_alphabet(body), _state(inits[0][1]), rules)
    tau = _parse_relabel(body)
    return g if tau is None else (g, tau)


def dump_rtg(g: Rtg, tau: Relabeling = None) -> str:
    names = _symbol_names(g.alphabet)
    lines = ["(rtg)", "(alphabet " + " ".join(f"{names[s]}/{r}" for s, r in g.alphabet) + ")"]
    lines.append(f"(init {_state_text(g.init)})")
    lines.append("(states " + " ".join(_state_text(q) for q in g.states) + ")")
    for q, rhs in g.rules:
        lines.append(f"(rule {_state_text(q)} {_dump_sym_rhs(rhs, names)})")
    if tau is not None:
        lines.append(_dump_relabel(tau, names))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# vta
# ---------------------------------------------------------------------------


def parse_vta(forms: list) -> Vta:
    _, body = _body(forms, "vta")
    _check_tags(body, {"fta", "universe", "partition"})
    blocks = _tagged(body, "fta")
    if len(blocks) != 1:
        raise ParseError("a vta file needs exactly one (fta ...) block")
    inner = parse_fta([["fta"]] + blocks[0][1:])
    if isinstance(inner, tuple):
        raise ParseError("the inner fta of a vta takes no relabel block")
    universe = {}
    for f in _tagged(body, "universe"):
        for entry in f[1:]:
            if not isinstance(entry, list) or len(entry) != 3 or entry[0] != "rank":
                raise ParseError(f"universe entries read (rank L PRED), got {write(entry)}")
            universe[to_int(entry[1], "rank")] = parse_pred(entry[2])
    parts = {"a": [], "z": [], "y": []}
    for f in _tagged(body, "partition"):
        for group in f[1:]:
            if not isinstance(group, list) or not group or group[0] not in parts:
                raise ParseError(f"partition groups read (a|z|y NAME/RANK ...), got {write(group)}")
            parts[group[0]].extend(split_ranked(s) for s in group[1:])
    return Vta.build(inner, universe, parts["a"], parts["z"], parts["y"])


def dump_vta(b: Vta) -> str:
    inner = dump_fta(b.inner).strip().splitlines()[1:]
    lines = ["(vta)", "(fta " + " ".join(inner) + ")"]
    lines.append("(universe " + " ".join(f"(rank {r} {p})" for r, p in b.universe) + ")")
    groups = []
    for tag, syms in (("a", b.a), ("z", b.z), ("y", b.y)):
        groups.append("(" + " ".join([tag] + [f"{s}/{r}" for s, r in syms]) + ")")
    lines.append("(partition " + " ".join(groups) + ")")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Dispatch
# ---------------------------------------------------------------------------

_PARSERS = {"sta": parse_sta, "srtg": parse_srtg, "stt": parse_stt,
            "fta": parse_fta, "rtg": parse_rtg, "vta": parse_vta}


def loads(text: str):
    forms = read_all(text)
    if not forms or not isinstance(forms[0], list) or not forms[0]:
        raise FormatError("empty file or missing header")
    kind = atom(forms[0][0], "header")
    if kind not in _PARSERS:
        raise FormatError(f"unknown file kind {kind!r}")
    return _PARSERS[kind](forms)


def load(path) -> object:
    return loads(Path(path).read_text(encoding="utf-8"))


def dumps(obj) -> str:
    if isinstance(obj, Sta):
        return dump_sta(obj)
    if isinstance(obj, Srtg):
        return dump_srtg(obj)
    if isinstance(obj, Stt):
        return dump_stt(obj)
    if isinstance(obj, Vta):
        return dump_vta(obj)
    if isinstance(obj, Fta):
        return dump_fta(obj)
    if isinstance(obj, Rtg):
        return dump_rtg(obj)
    if isinstance(obj, tuple) and len(obj) == 2 and isinstance(obj[1], Relabeling):
        return dump_fta(*obj) if isinstance(obj[0], Fta) else dump_rtg(*obj)
    raise TypeError(f"no file format for {type(obj).__name__}")


def dump(obj, path):
    Path(path).write_text(dumps(obj), encoding="utf-8")

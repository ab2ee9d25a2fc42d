"""Command-line front end.

Decision verbs print ``yes`` or ``no`` (with a witness on the next line when
there is one); construction verbs write the result to ``--out`` or stdout.
Exit codes: 0 ok, 1 a ``no`` answer, 2 parse or usage error, 3 refused
(missing capability or violated precondition).
"""

from __future__ import annotations

import argparse
import random
import sys

from . import formats
from .analysis import backward_apply, domain_srtg, forward_apply_slin, range_slin, typecheck
from .classical import Fta, Rtg, fta_to_rtg, rtg_to_fta
from .compose import compose_semantics_check, syntactic_compose
from .errors import (
    ArityError, BoundError, CapabilityError, DomainError, FormatError, ParseError, PartialFunctionError,
    PositionError, PreconditionError, TheoryMismatch,
)
from .sta import Sta, fta_to_sta, rename_states, sta_bool, sta_empty, sta_included, sta_to_fta
from .srtg import Srtg, rtg_to_srtg, srtg_sample, srtg_to_rtg, srtg_to_sta, sta_to_srtg
from .stt import Stt, rename_states as rename_stt, stt_apply, stt_props
from .syntax import parse_tree
from .tree import Relabeling, format_tree
from .vta import Vta, vta_member

USAGE_ERRORS = (ParseError, FormatError, DomainError, BoundError, TheoryMismatch, PositionError,
                ArityError, OSError)
REFUSALS = (CapabilityError, PreconditionError, PartialFunctionError)


class Answer(Exception):
    """A finished decision: ``ok`` selects exit 0 or 1."""

    def __init__(self, ok: bool):
        super().__init__()
        self.ok = ok


def _load(path, *kinds):
    obj = formats.load(path)
    if kinds and not isinstance(obj, kinds):
        names = "/".join(k.__name__ for k in kinds)
        raise FormatError(f"{path}: expected {names}, found {type(obj).__name__}")
    return obj


def _as_sta(obj, k=None) -> Sta:
    if isinstance(obj, Srtg):
        obj = srtg_to_sta(obj)
    if not isinstance(obj, Sta):
        raise FormatError(f"expected an automaton or grammar, got {type(obj).__name__}")
    if k is not None and k > obj.k:
        obj = obj.lift(k)
    return obj


def _as_srtg(obj) -> Srtg:
    if isinstance(obj, Sta):
        return sta_to_srtg(obj)
    if not isinstance(obj, Srtg):
        raise FormatError(f"expected a grammar or automaton, got {type(obj).__name__}")
    return obj


def _need(args, *names):
    for n in names:
        if getattr(args, n) is None:
            raise ParseError(f"{args.verb} needs --{n.replace('_', '-')}")


def _emit(obj, args, out):
    text = formats.dumps(obj)
    if args.out:
        formats.dump(obj, args.out)
        print(f"wrote {args.out}", file=out)
    else:
        out.write(text)


def _answer(ok: bool, out, witness=None, yes="yes", no="no"):
    print(yes if ok else no, file=out)
    if witness is not None:
        print(format_tree(witness), file=out)
    raise Answer(ok)


def _first_file(args):
    return args.auto or args.grammar or args.tt or args.vta or args.lang or args.file


# ---------------------------------------------------------------------------
# Verbs
# ---------------------------------------------------------------------------


def cmd_parse(args, out):
    if args.tree is not None:
        print(format_tree(parse_tree(args.tree)), file=out)
        return
    path = _first_file(args)
    if path is None:
        raise ParseError("parse needs a file or --tree")
    out.write(formats.dumps(formats.load(path)))


def cmd_member(args, out):
    _need(args, "tree")
    path = args.auto or args.grammar or args.file
    if path is None:
        raise ParseError("member needs --auto or --grammar")
    a = _as_sta(_load(path, Sta, Srtg), args.k)
    t = parse_tree(args.tree)
    a.theory.check_label(t.label)
    _answer(a.member(t), out)


def cmd_empty(args, out):
    path = args.auto or args.grammar or args.file
    if path is None:
        raise ParseError("empty needs --auto or --grammar")
    w = sta_empty(_as_sta(_load(path, Sta, Srtg)))
    _answer(w is None, out, w)


def cmd_include(args, out):
    _need(args, "left", "right")
    a = _as_sta(_load(args.left, Sta, Srtg), args.k)
    b = _as_sta(_load(args.right, Sta, Srtg), args.k)
    w = sta_included(a, b)
    _answer(w is None, out, w)


def cmd_bool(args, out):
    _need(args, "op", "left")
    a = _as_sta(_load(args.left, Sta, Srtg), args.k)
    if args.op == "not":
        if args.right:
            raise ParseError("--op not takes only --left")
        result = sta_bool("not", a)
    else:
        _need(args, "right")
        result = sta_bool(args.op, a, _as_sta(_load(args.right, Sta, Srtg), args.k))
    _emit(rename_states(result), args, out)


def cmd_apply(args, out):
    _need(args, "tt", "tree")
    m = _load(args.tt, Stt)
    outputs = sorted(format_tree(z) for z in stt_apply(m, parse_tree(args.tree)))
    if args.max_outputs is not None:
        outputs = outputs[:args.max_outputs]
    for z in outputs:
        print(z, file=out)


def cmd_props(args, out):
    path = args.tt or args.file
    if path is None:
        raise ParseError("props needs --tt")
    for name, value in stt_props(_load(path, Stt)).flags().items():
        print(f"{name}: {'true' if value else 'false'}", file=out)


def cmd_compose(args, out):
    _need(args, "left", "right")
    m = _load(args.left, Stt)
    n = _load(args.right, Stt)
    composite = rename_stt(syntactic_compose(m, n))
    guarantee = compose_semantics_check(m, n)
    print(f"; {guarantee}", file=sys.stderr if not args.out else out)
    _emit(composite, args, out)


def cmd_domain(args, out):
    _need(args, "tt")
    _emit(domain_srtg(_load(args.tt, Stt)), args, out)


def cmd_backward(args, out):
    _need(args, "tt")
    path = args.auto or args.lang
    if path is None:
        raise ParseError("backward needs --auto")
    a = _as_sta(_load(path, Sta, Srtg))
    _emit(backward_apply(_load(args.tt, Stt), a), args, out)


def cmd_forward(args, out):
    _need(args, "tt")
    path = args.lang or args.grammar or args.auto
    if path is None:
        raise ParseError("forward needs --lang")
    m = _load(args.tt, Stt)
    _emit(forward_apply_slin(m, _as_srtg(_load(path, Sta, Srtg))), args, out)


def cmd_range(args, out):
    _need(args, "tt")
    _emit(range_slin(_load(args.tt, Stt)), args, out)


def cmd_typecheck(args, out):
    _need(args, "tt", "left", "right")
    m = _load(args.tt, Stt)
    l_in = _as_sta(_load(args.left, Sta, Srtg))
    l_out = _as_sta(_load(args.right, Sta, Srtg))
    report = typecheck(m, l_in, l_out, "inverse" if args.inverse else "forward")
    print("yes" if report.holds else "no", file=out)
    if not report.holds:
        print(format_tree(report.input_tree), file=out)
        if report.output_tree is not None:
            print(format_tree(report.output_tree), file=out)
    raise Answer(report.holds)


def cmd_sample(args, out):
    path = args.grammar or args.auto or args.lang or args.file
    if path is None:
        raise ParseError("sample needs --grammar or --auto")
    g = _as_srtg(_load(path, Sta, Srtg))
    rng = random.Random(args.seed)
    for _ in range(args.count):
        t = srtg_sample(g, rng, args.depth)
        if t is not None:
            print(format_tree(t), file=out)


def cmd_convert(args, out):
    _need(args, "to")
    path = _first_file(args)
    if path is None:
        raise ParseError("convert needs an input file")
    obj = formats.load(path)
    k = args.k
    if args.to == "sta":
        if isinstance(obj, tuple):
            base, tau = obj
            base = base if isinstance(base, Fta) else rtg_to_fta(base)
            result = fta_to_sta(base, tau, k if k is not None else base.max_rank())
        else:
            result = _as_sta(obj, k)
        _emit(rename_states(result), args, out)
    elif args.to == "srtg":
        if isinstance(obj, tuple):
            base, tau = obj
            base = base if isinstance(base, Rtg) else fta_to_rtg(base)
            kk = k if k is not None else max([r for _, r in base.alphabet] + [0])
            result = rtg_to_srtg(base, tau, kk)
        else:
            result = _as_srtg(obj)
        _emit(result, args, out)
    elif args.to == "fta-rtg":
        if isinstance(obj, Sta):
            _emit(sta_to_fta(obj), args, out)
        elif isinstance(obj, Srtg):
            _emit(srtg_to_rtg(obj), args, out)
        elif isinstance(obj, Fta):
            _emit(fta_to_rtg(obj), args, out)
        elif isinstance(obj, Rtg):
            _emit(rtg_to_fta(obj), args, out)
        else:
            raise FormatError(f"cannot convert {type(obj).__name__} to fta-rtg")
    else:
        raise ParseError(f"unknown conversion target {args.to!r}")


def cmd_vta_member(args, out):
    _need(args, "tree")
    path = args.vta or args.file
    if path is None:
        raise ParseError("vta-member needs --vta")
    _answer(vta_member(_load(path, Vta), parse_tree(args.tree)), out)


VERBS = {
    "parse": cmd_parse, "member": cmd_member, "empty": cmd_empty, "include": cmd_include,
    "bool": cmd_bool, "apply": cmd_apply, "props": cmd_props, "compose": cmd_compose,
    "domain": cmd_domain, "backward": cmd_backward, "forward": cmd_forward, "range": cmd_range,
    "typecheck": cmd_typecheck, "sample": cmd_sample, "convert": cmd_convert,
    "vta-member": cmd_vta_member,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ParseError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="symtree", description="Symbolic tree automata, grammars and transducers.")
    p.add_argument("verb", choices=sorted(VERBS))
    p.add_argument("file", nargs="?", help="input file for verbs that take one")
    for flag in ("auto", "tt", "grammar", "vta", "lang", "tree", "out", "left", "right"):
        p.add_argument(f"--{flag}")
    p.add_argument("--k", type=int)
    p.add_argument("--op", choices=["and", "or", "not"])
    p.add_argument("--to", choices=["sta", "srtg", "fta-rtg"])
    p.add_argument("--inverse", action="store_true")
    p.add_argument("--max-outputs", type=int)
    p.add_argument("--depth", type=int, default=5)
    p.add_argument("--count", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    return p


def run(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_intermixed_args(argv)
        VERBS[args.verb](args, out)
        return 0
    except Answer as a:
        return 0 if a.ok else 1
    except REFUSALS as exc:
        print(f"error: {exc}", file=err)
        return 3
    except USAGE_ERRORS as exc:
        print(f"error: {exc}", file=err)
        return 2


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()

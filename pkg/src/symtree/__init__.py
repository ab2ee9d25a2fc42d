"""Symbolic tree automata, regular tree grammars and tree transducers over
label theories with decidable predicates."""

from .errors import (
    ArityError, BoundError, CapabilityError, DomainError, FormatError, ParseError,
    PartialFunctionError, PositionError, PreconditionError, SymtreeError, TheoryMismatch,
)
from .theory import (
    BOTTOM, IDENTITY, INTEGERS, TOP, Affine, Composed, Const, FiniteMap, FiniteTheory, IntegerTheory,
    compose_fn, conj, disj, div, eq, image, in_range, in_set, minterms, mod, neg, preimage, satisfiable,
)
from .tree import Call, Relabeling, StateRef, Tree, Var, format_tree
from .classical import Fta, Rtg, Tdtt, rtg_normalize, rtg_to_fta, fta_to_rtg
from .sta import (
    Sta, StaRule, complement, empty_sta, fta_to_sta, intersect, sta_bool, sta_empty, sta_included,
    sta_member, sta_to_fta, union, universal_sta,
)
from .vta import Vta, vta_member, vta_validate
from .srtg import (
    Srtg, rtg_to_srtg, srtg_clean, srtg_derive, srtg_normalize, srtg_sample, srtg_sta_convert,
    srtg_to_rtg, srtg_to_sta, sta_to_srtg, universal_srtg,
)
from .stt import Stt, SttRule, alphabetic_bridge, identity_stt, stt_apply, stt_props
from .compose import compose_semantics_check, sym_step, syntactic_compose
from .analysis import backward_apply, domain_srtg, forward_apply_slin, range_slin, typecheck, TypeCheckReport
from .syntax import parse_fn_text, parse_pred_text, parse_tree
from .formats import dumps, load, loads

__version__ = "0.1.0"

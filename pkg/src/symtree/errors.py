"""Exception hierarchy shared by every module.

The CLI maps these onto exit codes: ``ParseError`` and ``FormatError`` are
usage problems (exit 2), ``CapabilityError`` and ``PreconditionError`` are
refusals (exit 3).
"""


class SymtreeError(Exception):
    """Base class for all library errors."""


class ParseError(SymtreeError, ValueError):
    """Malformed textual input (trees, predicates, automaton files)."""


class FormatError(SymtreeError, ValueError):
    """Structurally invalid object, e.g. a rank mismatch or broken partitioning."""


class DomainError(SymtreeError, ValueError):
    """A label outside the universe of its theory."""


class TheoryMismatch(SymtreeError, TypeError):
    """Operands built over incompatible label theories."""


class BoundError(SymtreeError, ValueError):
    """A tree or alphabet exceeds the rank bound k."""


class PositionError(SymtreeError, IndexError):
    """A position that does not address a node of the tree."""


class ArityError(SymtreeError, ValueError):
    """A variable without a matching substitution argument."""


class CapabilityError(SymtreeError):
    """The theory or object lacks a capability the operation needs."""


class PreconditionError(SymtreeError):
    """An operation was called on an object outside its supported class."""


class PartialFunctionError(SymtreeError):
    """A partial label function was applied outside its domain inside a rule."""

"""Executable constructions on countable linear orders and o-minimal ladders.

Submodules: :mod:`order` (term algebra), :mod:`grammar`, :mod:`iso`
(EF types and isomorphism verdicts), :mod:`identities`, :mod:`pointlogic`,
:mod:`reductions` (f, g and class T), :mod:`models`, :mod:`invariants`,
:mod:`verify` and :mod:`cli`.
"""

from .grammar import format_term, parse_point, parse_term
from .iso import decide_iso, ef_equivalent, ktype
from .order import compare, enumerate_point, neighbor, tail_view
from .reductions import apply_f, apply_g, make_T, make_X, tail_iso_T

__all__ = [
    "apply_f",
    "apply_g",
    "compare",
    "decide_iso",
    "ef_equivalent",
    "enumerate_point",
    "format_term",
    "ktype",
    "make_T",
    "make_X",
    "neighbor",
    "parse_point",
    "parse_term",
    "tail_iso_T",
    "tail_view",
]

__version__ = "0.1.0"

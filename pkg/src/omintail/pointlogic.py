"""Classification of points by their local neighbourhood.

A point is *non-dense* when it has an immediate successor or predecessor.
Each side of a point ``v`` gets a character:

=========  ===============================================================
``none``   no points on that side (``v`` is an endpoint of the order/view)
``adj``    an immediate neighbour exists on that side
``dense``  no neighbour, and some nonempty interval on that side next to
           ``v`` contains no non-dense point
``limit``  no neighbour, and every interval next to ``v`` on that side
           contains non-dense points
=========  ===============================================================

The classes are composed from the two characters:

==========  =============================================================
PureDense   both sides ``dense`` (an open neighbourhood free of
            non-dense points)
P0          the successor exists and is a P1 point
P1          not PureDense, right side ``dense``
P2          not PureDense, left side ``dense``
P3          the predecessor exists and is a P2 point
Phi         none of the above
==========  =============================================================

The first matching row wins.  ``dense`` versus ``limit`` is read off the
term for the open segment next to the point (see :func:`bottom_germ`).
"""

from __future__ import annotations

import enum
from typing import Iterable, List, Optional, Union

from .order import (
    EtaT,
    Finite,
    OmegaStarT,
    OmegaT,
    OrderTerm,
    Point,
    Replace,
    Sum,
    TailView,
    ZetaT,
    above,
    below,
    check_point,
    cmp_points,
    greatest,
    interval,
    least,
    pred,
    succ,
    to_text,
)


class PointClass(enum.Enum):
    PURE_DENSE = "PureDense"
    P0 = "P0"
    P1 = "P1"
    P2 = "P2"
    P3 = "P3"
    PHI = "Phi"
    OTHER = "Other"


class NotClassT(ValueError):
    pass


def has_nondense(term: OrderTerm) -> bool:
    """Whether some point of ``term`` has an immediate neighbour inside ``term``."""
    if isinstance(term, Finite):
        return term.k >= 2
    if isinstance(term, (OmegaT, OmegaStarT, ZetaT)):
        return True
    if isinstance(term, EtaT):
        return False
    if isinstance(term, Sum):
        if any(has_nondense(p) for p in term.parts):
            return True
        return any(greatest(a) is not None and least(b) is not None
                   for a, b in zip(term.parts, term.parts[1:]))
    if has_nondense(term.minor):
        return True
    closed = least(term.minor) is not None and greatest(term.minor) is not None
    return closed and has_nondense(term.major)


def bottom_germ(term: OrderTerm) -> str:
    """``dense`` or ``limit`` for an order without a least element."""
    if isinstance(term, (Finite, OmegaT)):
        raise ValueError(f"{to_text(term)} has a least element")
    if isinstance(term, (OmegaStarT, ZetaT)):
        return "limit"
    if isinstance(term, EtaT):
        return "dense"
    if isinstance(term, Sum):
        return bottom_germ(term.parts[0])
    if least(term.major) is not None:
        return bottom_germ(term.minor)
    if has_nondense(term.minor):
        return "limit"
    if least(term.minor) is not None and greatest(term.minor) is not None:
        return bottom_germ(term.major)
    return "dense"


def top_germ(term: OrderTerm) -> str:
    """``dense`` or ``limit`` for an order without a greatest element."""
    if isinstance(term, (Finite, OmegaStarT)):
        raise ValueError(f"{to_text(term)} has a greatest element")
    if isinstance(term, (OmegaT, ZetaT)):
        return "limit"
    if isinstance(term, EtaT):
        return "dense"
    if isinstance(term, Sum):
        return top_germ(term.parts[-1])
    if greatest(term.major) is not None:
        return top_germ(term.minor)
    if has_nondense(term.minor):
        return "limit"
    if least(term.minor) is not None and greatest(term.minor) is not None:
        return top_germ(term.major)
    return "dense"


Where = Union[OrderTerm, TailView]


def _unpack(where: Where):
    if isinstance(where, TailView):
        return where.term, where.base
    return where, None


def right_character(where: Where, p: Point) -> str:
    term, _ = _unpack(where)
    if succ(term, p) is not None:
        return "adj"
    rest = above(term, p)
    if rest is None:
        return "none"
    return bottom_germ(rest)


def left_character(where: Where, p: Point) -> str:
    term, base = _unpack(where)
    if base is not None and cmp_points(term, p, base) == 0:
        return "none"
    if pred(term, p) is not None:
        return "adj"
    rest = below(term, p)
    if rest is None:
        return "none"
    return top_germ(rest)


def _pred_in(where: Where, p: Point) -> Optional[Point]:
    term, base = _unpack(where)
    if base is not None and cmp_points(term, p, base) == 0:
        return None
    return pred(term, p)


def classify_point(where: Where, p: Point) -> PointClass:
    """Class of ``p`` in a term or in a tail view (the view is the whole order)."""
    term, base = _unpack(where)
    check_point(term, p)
    if base is not None and cmp_points(term, p, base) < 0:
        raise ValueError(f"{p!r} lies below the view's base")
    lc, rc = left_character(where, p), right_character(where, p)
    if lc == "dense" and rc == "dense":
        return PointClass.PURE_DENSE
    s = succ(term, p)
    if s is not None and right_character(where, s) == "dense":
        return PointClass.P0
    if rc == "dense":
        return PointClass.P1
    if lc == "dense":
        return PointClass.P2
    r = _pred_in(where, p)
    if r is not None and left_character(where, r) == "dense":
        return PointClass.P3
    if lc in ("none", "adj", "limit") and rc in ("none", "adj", "limit"):
        return PointClass.PHI
    return PointClass.OTHER


def falsify(where: Where, p: Point, samples: Iterable[Point]) -> List[str]:
    """Sample-based cross-check of the neighbour facts behind a classification.

    Returns contradictions found (an empty list means nothing was refuted).
    This can refute but never confirm a label.
    """
    term, base = _unpack(where)
    problems = []
    s, r = succ(term, p), _pred_in(where, p)
    for q in samples:
        if base is not None and cmp_points(term, q, base) < 0:
            continue
        if s is not None and cmp_points(term, p, q) < 0 < cmp_points(term, s, q):
            problems.append(f"sample {q!r} lies between {p!r} and its successor")
        if r is not None and cmp_points(term, r, q) < 0 < cmp_points(term, p, q):
            problems.append(f"sample {q!r} lies between {p!r} and its predecessor")
        if cmp_points(term, q, p) > 0 and s is None and interval(term, p, q) is None:
            problems.append(f"{q!r} is an immediate successor the classifier missed")
        if cmp_points(term, q, p) < 0 and r is None and interval(term, q, p) is None:
            if base is None or cmp_points(term, q, base) >= 0:
                problems.append(f"{q!r} is an immediate predecessor the classifier missed")
    return problems


def locate_phi_base(view: TailView) -> Point:
    """Least separator point at or above the base of a tail of a class-T order."""
    from .reductions import class_t_source

    if class_t_source(view.term) is None:
        raise NotClassT(f"{to_text(view.term)} is not of the form g(f(L))")
    n, (part, _) = view.base
    if part == 1:
        return view.base
    return (n, (1, 0))

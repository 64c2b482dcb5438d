"""The maps f and g on linear orders and the class T = g(f(LO)).

``X`` is the order ``{0} + [1, 2]_Q + {3}``, written as five blocks
``Finite 1, Finite 1, Eta, Finite 1, Finite 1``.  ``f(L) = L x X``
replaces every point of ``L`` by a copy of ``X`` and ``g(L)`` stacks
omega copies of ``L``, each followed by one separator point.

On ``T`` tail isomorphism coincides with isomorphism: above any base point
the separators are exactly the Phi-classified points, two consecutive
separators bound a copy of ``f(L)``, and the P1 points of that copy are a
copy of ``L``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional

from .iso import IsoVerdict, decide_iso
from .order import (
    Eta,
    Finite,
    Omega,
    OrderTerm,
    Point,
    Replace,
    Sum,
    TailView,
    check_point,
    cmp_points,
    enumerate_point,
    interval,
    size,
    to_text,
)
from .pointlogic import PointClass, classify_point, locate_phi_base

X_BLOCKS = ("0", "1", "dense", "2", "3")


def make_X() -> OrderTerm:
    return Sum((Finite(1), Finite(1), Eta, Finite(1), Finite(1)))


def x_point(name: str) -> Point:
    """Point of ``X`` by its value: ``"0"``, ``"3"``, or a rational in [1, 2]."""
    q = Fraction(name)
    if q == 0:
        return (0, 0)
    if q == 3:
        return (4, 0)
    if q == 1:
        return (1, 0)
    if q == 2:
        return (3, 0)
    if 1 < q < 2:
        return (2, q - 1)
    raise ValueError(f"{name} is not a point of X")


def apply_f(L: OrderTerm) -> OrderTerm:
    return Replace(L, make_X())


def apply_g(L: OrderTerm) -> OrderTerm:
    return Replace(Omega, Sum((L, Finite(1))))


def g_separator(L: OrderTerm, n: int) -> Point:
    """The separator after the ``n``-th copy of ``L`` in ``apply_g(L)``."""
    last = len(L.parts) if isinstance(L, Sum) else 1
    return (n, (last, 0))


def class_t_source(term: OrderTerm) -> Optional[OrderTerm]:
    """``L`` when ``term`` is syntactically ``g(f(L))``, else ``None``."""
    if not (isinstance(term, Replace) and term.major == Omega and isinstance(term.minor, Sum)):
        return None
    parts = term.minor.parts
    if len(parts) != 2 or parts[1] != Finite(1):
        return None
    body = parts[0]
    if isinstance(body, Replace) and body.minor == make_X():
        return body.major
    return None


@dataclass(frozen=True)
class Role:
    kind: str  # "separator" or "body"
    omega_index: int
    l_point: Optional[Point] = None
    x_block: Optional[str] = None

    def describe(self) -> str:
        if self.kind == "separator":
            return f"infinity-point, omega-index {self.omega_index}"
        return f"copy {self.omega_index}, L-point {self.l_point!r}, X-block {self.x_block}"


@dataclass(frozen=True)
class ClassTCertificate:
    source: OrderTerm
    result: OrderTerm

    def label(self, p: Point) -> Role:
        check_point(self.result, p)
        n, (part, sub) = p
        if part == 1:
            return Role("separator", n)
        l, (block, _) = sub
        return Role("body", n, l_point=l, x_block=X_BLOCKS[block])

    def separator(self, n: int) -> Point:
        return (n, (1, 0))

    def is_separator(self, p: Point) -> bool:
        return self.label(p).kind == "separator"


def make_T(L: OrderTerm) -> ClassTCertificate:
    return ClassTCertificate(L, apply_g(apply_f(L)))


def sample_basepoints(cert: ClassTCertificate, count: int = 5) -> List[Point]:
    """First ``count`` enumerated points: the deterministic tail bases."""
    return [enumerate_point(cert.result, i) for i in range(count)]


class RecoveryError(ValueError):
    pass


def _segment_by_labels(cert: ClassTCertificate, base: Point) -> OrderTerm:
    n = cert.label(base).omega_index
    # the next two separators strictly above the base's copy
    segment = interval(cert.result, cert.separator(n + 1), cert.separator(n + 2))
    if not (isinstance(segment, Replace) and segment.minor == make_X()):
        raise RecoveryError("segment between separators is not a copy of f(L)")
    return segment.major


def _next_phi(view: TailView, after: Point, scan: int) -> Point:
    best = None
    for p in view.points(scan):
        if cmp_points(view.term, p, after) > 0 and classify_point(view, p) is PointClass.PHI:
            if best is None or cmp_points(view.term, p, best) < 0:
                best = p
    if best is None:
        raise RecoveryError(f"no Phi point found above {after!r} in {scan} enumerated points")
    return best


def strip_x(segment: OrderTerm, scan: int = 200) -> OrderTerm:
    """Recover ``L`` from an order ``L x Y`` through its P1 points.

    The P1 points must all share one minor coordinate ``y``; every sampled
    ``(l, y)`` must be P1 and the recovered order is the major factor.
    """
    if not isinstance(segment, Replace):
        raise RecoveryError(f"{to_text(segment)} is not a lexicographic block")
    total = size(segment)
    limit = scan if total is None else min(scan, total)
    minors = set()
    for i in range(limit):
        p = enumerate_point(segment, i)
        if classify_point(segment, p) is PointClass.P1:
            minors.add(p[1])
    if len(minors) != 1:
        raise RecoveryError(f"P1 points do not sit at a single position of the block: {minors!r}")
    (y,) = minors
    major_size = size(segment.major)
    count = 20 if major_size is None else min(20, major_size)
    for i in range(count):
        if classify_point(segment, (enumerate_point(segment.major, i), y)) is not PointClass.P1:
            raise RecoveryError("a point at the P1 position is not P1")
    return segment.major


def recover_source(cert: ClassTCertificate, base: Optional[Point] = None,
                   use_labels: bool = True, scan: int = 200) -> OrderTerm:
    """Recover the source order from a tail of ``cert.result``."""
    if base is None:
        base = enumerate_point(cert.result, 0)
    check_point(cert.result, base)
    if use_labels:
        return _segment_by_labels(cert, base)
    view = TailView(cert.result, base)
    b = locate_phi_base(view)
    c = _next_phi(view, b, scan)
    c2 = _next_phi(view, c, scan)
    segment = interval(cert.result, c, c2)
    if segment is None:
        raise RecoveryError("consecutive Phi points bound an empty segment")
    return strip_x(segment, scan)


def tail_iso_T(a: ClassTCertificate, b: ClassTCertificate,
               base_a: Optional[Point] = None, base_b: Optional[Point] = None,
               use_labels: bool = True) -> IsoVerdict:
    """Tail-isomorphism verdict for two class-T orders, from the given tail bases."""
    la = recover_source(a, base_a, use_labels)
    lb = recover_source(b, base_b, use_labels)
    return decide_iso(la, lb)

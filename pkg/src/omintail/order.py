"""Countable linear orders as finite terms.

An :class:`OrderTerm` is built from the atoms ``Finite(k)``, ``Omega``,
``OmegaStar``, ``Zeta`` and ``Eta`` with n-ary ordered sums and the
lexicographic replacement ``Replace(major, minor)`` (every point of
``major`` is replaced by a copy of ``minor``).

Points are plain Python values addressing one element of a term:

=============  ==========================================================
term           point
=============  ==========================================================
Finite(k)      ``int`` in ``0..k-1``
Omega          ``int >= 0``
OmegaStar      ``int >= 0``, counted down from the top (``0`` is greatest)
Zeta           ``int``
Eta            :class:`~fractions.Fraction` strictly between 0 and 1
Sum            ``(part_index, sub_point)``
Replace        ``(major_point, minor_point)``
=============  ==========================================================

Enumeration is a fixed bijection between the naturals and the points of a
term: Eta walks the Stern-Brocot tree of ``(0, 1)`` in heap order, sums are
dovetailed round-robin over the parts that still have points, and
replacements use the Cantor pairing when both factors are infinite.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional, Tuple, Union


class InvalidPoint(ValueError):
    pass


class Ordering(enum.IntEnum):
    LESS = -1
    EQUAL = 0
    GREATER = 1


class Direction(enum.Enum):
    SUCC = "succ"
    PRED = "pred"


@dataclass(frozen=True)
class Finite:
    k: int

    def __post_init__(self):
        if isinstance(self.k, bool) or not isinstance(self.k, int) or self.k < 1:
            raise ValueError(f"Finite requires k >= 1, got {self.k!r}")


@dataclass(frozen=True)
class _Atom:
    pass


@dataclass(frozen=True)
class OmegaT(_Atom):
    pass


@dataclass(frozen=True)
class OmegaStarT(_Atom):
    pass


@dataclass(frozen=True)
class ZetaT(_Atom):
    pass


@dataclass(frozen=True)
class EtaT(_Atom):
    pass


Omega = OmegaT()
OmegaStar = OmegaStarT()
Zeta = ZetaT()
Eta = EtaT()


@dataclass(frozen=True)
class Sum:
    parts: tuple

    def __post_init__(self):
        flat = []
        for part in self.parts:
            if isinstance(part, Sum):
                flat.extend(part.parts)
            else:
                flat.append(part)
        if not flat:
            raise ValueError("Sum requires at least one part")
        object.__setattr__(self, "parts", tuple(flat))


@dataclass(frozen=True)
class Replace:
    major: "OrderTerm"
    minor: "OrderTerm"


OrderTerm = Union[Finite, OmegaT, OmegaStarT, ZetaT, EtaT, Sum, Replace]
Point = Union[int, Fraction, Tuple["Point", "Point"]]


def sum_of(*parts: Optional[OrderTerm]) -> Optional[OrderTerm]:
    """Ordered sum of the non-empty parts; ``None`` stands for the empty order."""
    kept = [p for p in parts if p is not None]
    if not kept:
        return None
    if len(kept) == 1:
        return kept[0]
    return Sum(tuple(kept))


def rep_of(major: Optional[OrderTerm], minor: Optional[OrderTerm]) -> Optional[OrderTerm]:
    if major is None or minor is None:
        return None
    return Replace(major, minor)


# ---------------------------------------------------------------- printing

def to_text(term: OrderTerm) -> str:
    if isinstance(term, Finite):
        return f"n:{term.k}"
    if isinstance(term, OmegaT):
        return "w"
    if isinstance(term, OmegaStarT):
        return "w*"
    if isinstance(term, ZetaT):
        return "z"
    if isinstance(term, EtaT):
        return "eta"
    if isinstance(term, Sum):
        return "sum(" + ",".join(to_text(p) for p in term.parts) + ")"
    if isinstance(term, Replace):
        return f"rep({to_text(term.major)},{to_text(term.minor)})"
    raise TypeError(f"not an order term: {term!r}")


def is_term(obj) -> bool:
    return isinstance(obj, (Finite, _Atom, Sum, Replace))


# ---------------------------------------------------------------- validity

def _is_int(x) -> bool:
    return isinstance(x, int) and not isinstance(x, bool)


def is_valid(term: OrderTerm, p: Point) -> bool:
    if isinstance(term, Finite):
        return _is_int(p) and 0 <= p < term.k
    if isinstance(term, (OmegaT, OmegaStarT)):
        return _is_int(p) and p >= 0
    if isinstance(term, ZetaT):
        return _is_int(p)
    if isinstance(term, EtaT):
        return isinstance(p, Fraction) and 0 < p < 1
    if not (isinstance(p, tuple) and len(p) == 2):
        return False
    if isinstance(term, Sum):
        i, sub = p
        return _is_int(i) and 0 <= i < len(term.parts) and is_valid(term.parts[i], sub)
    if isinstance(term, Replace):
        return is_valid(term.major, p[0]) and is_valid(term.minor, p[1])
    raise TypeError(f"not an order term: {term!r}")


def check_point(term: OrderTerm, p: Point) -> None:
    if not is_valid(term, p):
        raise InvalidPoint(f"{p!r} is not a point of {to_text(term)}")


# ---------------------------------------------------------------- comparison

def _cmp(term: OrderTerm, p: Point, q: Point) -> int:
    if isinstance(term, (Finite, OmegaT, ZetaT, EtaT)):
        return (p > q) - (p < q)
    if isinstance(term, OmegaStarT):
        return (p < q) - (p > q)
    if isinstance(term, Sum):
        if p[0] != q[0]:
            return -1 if p[0] < q[0] else 1
        return _cmp(term.parts[p[0]], p[1], q[1])
    c = _cmp(term.major, p[0], q[0])
    if c:
        return c
    return _cmp(term.minor, p[1], q[1])


def compare(term: OrderTerm, p: Point, q: Point) -> Ordering:
    check_point(term, p)
    check_point(term, q)
    return Ordering(_cmp(term, p, q))


def cmp_points(term: OrderTerm, p: Point, q: Point) -> int:
    """Unchecked three-way comparison, for hot loops over known-valid points."""
    return _cmp(term, p, q)


# ---------------------------------------------------------------- size and bounds

def size(term: OrderTerm) -> Optional[int]:
    """Number of points, or ``None`` when the order is infinite."""
    if isinstance(term, Finite):
        return term.k
    if isinstance(term, _Atom):
        return None
    if isinstance(term, Sum):
        total = 0
        for part in term.parts:
            s = size(part)
            if s is None:
                return None
            total += s
        return total
    a, b = size(term.major), size(term.minor)
    if a is None or b is None:
        return None
    return a * b


def least(term: OrderTerm) -> Optional[Point]:
    if isinstance(term, (Finite, OmegaT)):
        return 0
    if isinstance(term, (OmegaStarT, ZetaT, EtaT)):
        return None
    if isinstance(term, Sum):
        sub = least(term.parts[0])
        return None if sub is None else (0, sub)
    a, b = least(term.major), least(term.minor)
    return None if a is None or b is None else (a, b)


def greatest(term: OrderTerm) -> Optional[Point]:
    if isinstance(term, Finite):
        return term.k - 1
    if isinstance(term, OmegaStarT):
        return 0
    if isinstance(term, (OmegaT, ZetaT, EtaT)):
        return None
    if isinstance(term, Sum):
        last = len(term.parts) - 1
        sub = greatest(term.parts[last])
        return None if sub is None else (last, sub)
    a, b = greatest(term.major), greatest(term.minor)
    return None if a is None or b is None else (a, b)


def bounds(term: OrderTerm) -> Tuple[bool, bool]:
    """``(has_least, has_greatest)``."""
    return least(term) is not None, greatest(term) is not None


# ---------------------------------------------------------------- enumeration

def _stern_brocot(n: int) -> Fraction:
    # heap index n >= 1 in the Stern-Brocot tree of (0, 1)
    ln, ld, hn, hd = 0, 1, 1, 1
    for bit in bin(n)[3:]:
        mn, md = ln + hn, ld + hd
        if bit == "0":
            hn, hd = mn, md
        else:
            ln, ld = mn, md
    return Fraction(ln + hn, ld + hd)


def _stern_brocot_index(x: Fraction) -> int:
    ln, ld, hn, hd = 0, 1, 1, 1
    n = 1
    while True:
        m = Fraction(ln + hn, ld + hd)
        if x == m:
            return n
        if x < m:
            hn, hd = m.numerator, m.denominator
            n = 2 * n
        else:
            ln, ld = m.numerator, m.denominator
            n = 2 * n + 1


def _sum_segments(sizes):
    """Yield ``(start_round, end_round_or_None, active_part_indices)``."""
    cuts = sorted({s for s in sizes if s is not None})
    start = 0
    for cut in cuts + [None]:
        active = [j for j, s in enumerate(sizes) if s is None or s > start]
        if not active:
            return
        yield start, cut, active
        if cut is None:
            return
        start = cut


def enumerate_point(term: OrderTerm, i: int) -> Point:
    """The ``i``-th point of ``term`` under the fixed enumeration."""
    if i < 0:
        raise IndexError(i)
    if isinstance(term, Finite):
        if i >= term.k:
            raise IndexError(f"{to_text(term)} has only {term.k} points")
        return i
    if isinstance(term, (OmegaT, OmegaStarT)):
        return i
    if isinstance(term, ZetaT):
        return (i + 1) // 2 if i % 2 else -(i // 2)
    if isinstance(term, EtaT):
        return _stern_brocot(i + 1)
    if isinstance(term, Sum):
        sizes = [size(p) for p in term.parts]
        rest = i
        for start, end, active in _sum_segments(sizes):
            c = len(active)
            if end is None or rest < (end - start) * c:
                r = start + rest // c
                j = active[rest % c]
                return (j, enumerate_point(term.parts[j], r))
            rest -= (end - start) * c
        raise IndexError(f"{to_text(term)} has only {size(term)} points")
    m, n = size(term.major), size(term.minor)
    if n is not None:
        a, b = divmod(i, n)
        return (enumerate_point(term.major, a), enumerate_point(term.minor, b))
    if m is not None:
        b, a = divmod(i, m)
        return (enumerate_point(term.major, a), enumerate_point(term.minor, b))
    w = (math.isqrt(8 * i + 1) - 1) // 2
    y = i - w * (w + 1) // 2
    return (enumerate_point(term.major, w - y), enumerate_point(term.minor, y))


def _index(term: OrderTerm, p: Point) -> int:
    if isinstance(term, (Finite, OmegaT, OmegaStarT)):
        return p
    if isinstance(term, ZetaT):
        return 2 * p - 1 if p > 0 else -2 * p
    if isinstance(term, EtaT):
        return _stern_brocot_index(p) - 1
    if isinstance(term, Sum):
        j, sub = p
        r = _index(term.parts[j], sub)
        sizes = [size(q) for q in term.parts]
        offset = 0
        for start, end, active in _sum_segments(sizes):
            c = len(active)
            if end is None or r < end:
                return offset + (r - start) * c + active.index(j)
            offset += (end - start) * c
        raise AssertionError("unreachable")
    m, n = size(term.major), size(term.minor)
    a, b = _index(term.major, p[0]), _index(term.minor, p[1])
    if n is not None:
        return a * n + b
    if m is not None:
        return b * m + a
    return (a + b) * (a + b + 1) // 2 + b


def index_of(term: OrderTerm, p: Point) -> int:
    """Inverse of :func:`enumerate_point`."""
    check_point(term, p)
    return _index(term, p)


def iter_points(term: OrderTerm, limit: Optional[int] = None) -> Iterator[Point]:
    i = 0
    total = size(term)
    while (limit is None or i < limit) and (total is None or i < total):
        yield enumerate_point(term, i)
        i += 1


# ---------------------------------------------------------------- neighbours

def _succ(term: OrderTerm, p: Point) -> Optional[Point]:
    if isinstance(term, Finite):
        return p + 1 if p + 1 < term.k else None
    if isinstance(term, (OmegaT, ZetaT)):
        return p + 1
    if isinstance(term, OmegaStarT):
        return p - 1 if p > 0 else None
    if isinstance(term, EtaT):
        return None
    if isinstance(term, Sum):
        i, sub = p
        s = _succ(term.parts[i], sub)
        if s is not None:
            return (i, s)
        if i + 1 < len(term.parts) and sub == greatest(term.parts[i]):
            nxt = least(term.parts[i + 1])
            if nxt is not None:
                return (i + 1, nxt)
        return None
    a, b = p
    s = _succ(term.minor, b)
    if s is not None:
        return (a, s)
    if b == greatest(term.minor):
        ma, mb = _succ(term.major, a), least(term.minor)
        if ma is not None and mb is not None:
            return (ma, mb)
    return None


def _pred(term: OrderTerm, p: Point) -> Optional[Point]:
    if isinstance(term, Finite):
        return p - 1 if p > 0 else None
    if isinstance(term, OmegaT):
        return p - 1 if p > 0 else None
    if isinstance(term, ZetaT):
        return p - 1
    if isinstance(term, OmegaStarT):
        return p + 1
    if isinstance(term, EtaT):
        return None
    if isinstance(term, Sum):
        i, sub = p
        s = _pred(term.parts[i], sub)
        if s is not None:
            return (i, s)
        if i > 0 and sub == least(term.parts[i]):
            prv = greatest(term.parts[i - 1])
            if prv is not None:
                return (i - 1, prv)
        return None
    a, b = p
    s = _pred(term.minor, b)
    if s is not None:
        return (a, s)
    if b == least(term.minor):
        ma, mb = _pred(term.major, a), greatest(term.minor)
        if ma is not None and mb is not None:
            return (ma, mb)
    return None


def neighbor(term: OrderTerm, p: Point, direction: Direction) -> Optional[Point]:
    """Immediate successor or predecessor of ``p``, or ``None`` if there is none."""
    check_point(term, p)
    if direction is Direction.SUCC:
        return _succ(term, p)
    return _pred(term, p)


def succ(term: OrderTerm, p: Point) -> Optional[Point]:
    return _succ(term, p)


def pred(term: OrderTerm, p: Point) -> Optional[Point]:
    return _pred(term, p)


# ---------------------------------------------------------------- sub-orders

def above(term: OrderTerm, p: Point) -> Optional[OrderTerm]:
    """Term for the open final segment ``(p, oo)``; ``None`` if empty."""
    if isinstance(term, Finite):
        return Finite(term.k - p - 1) if term.k - p - 1 > 0 else None
    if isinstance(term, (OmegaT, ZetaT)):
        return Omega
    if isinstance(term, OmegaStarT):
        return Finite(p) if p > 0 else None
    if isinstance(term, EtaT):
        return Eta
    if isinstance(term, Sum):
        i, sub = p
        return sum_of(above(term.parts[i], sub), *term.parts[i + 1:])
    a, b = p
    return sum_of(above(term.minor, b), rep_of(above(term.major, a), term.minor))


def below(term: OrderTerm, p: Point) -> Optional[OrderTerm]:
    """Term for the open initial segment ``(-oo, p)``; ``None`` if empty."""
    if isinstance(term, (Finite, OmegaT)):
        return Finite(p) if p > 0 else None
    if isinstance(term, (OmegaStarT, ZetaT)):
        return OmegaStar
    if isinstance(term, EtaT):
        return Eta
    if isinstance(term, Sum):
        i, sub = p
        return sum_of(*term.parts[:i], below(term.parts[i], sub))
    a, b = p
    return sum_of(rep_of(below(term.major, a), term.minor), below(term.minor, b))


def interval(term: OrderTerm, p: Point, q: Point) -> Optional[OrderTerm]:
    """Term for the open interval ``(p, q)``; ``None`` if empty or ``p >= q``."""
    if _cmp(term, p, q) >= 0:
        return None
    if isinstance(term, (Finite, OmegaT, ZetaT)):
        return Finite(q - p - 1) if q - p - 1 > 0 else None
    if isinstance(term, OmegaStarT):
        return Finite(p - q - 1) if p - q - 1 > 0 else None
    if isinstance(term, EtaT):
        return Eta
    if isinstance(term, Sum):
        (i, s), (j, t) = p, q
        if i == j:
            return interval(term.parts[i], s, t)
        return sum_of(above(term.parts[i], s), *term.parts[i + 1:j], below(term.parts[j], t))
    (a, b), (c, d) = p, q
    if a == c:
        return interval(term.minor, b, d)
    return sum_of(
        above(term.minor, b),
        rep_of(interval(term.major, a, c), term.minor),
        below(term.minor, d),
    )


def tail_term(term: OrderTerm, p: Point) -> OrderTerm:
    """Term for the closed final segment ``[p, oo)``."""
    check_point(term, p)
    return sum_of(Finite(1), above(term, p))


@dataclass(frozen=True)
class TailView:
    """The suborder ``[base, oo)`` of ``term``; never empty."""

    term: OrderTerm
    base: Point

    def __contains__(self, p: Point) -> bool:
        return is_valid(self.term, p) and _cmp(self.term, p, self.base) >= 0

    def compare(self, p: Point, q: Point) -> Ordering:
        self._check(p)
        self._check(q)
        return Ordering(_cmp(self.term, p, q))

    def _check(self, p: Point) -> None:
        if p not in self:
            raise InvalidPoint(f"{p!r} is not in the tail from {self.base!r}")

    def points(self, limit: Optional[int] = None) -> Iterator[Point]:
        """Enumeration of the term, filtered to the view."""
        count = 0
        for p in iter_points(self.term):
            if limit is not None and count >= limit:
                return
            if _cmp(self.term, p, self.base) >= 0:
                count += 1
                yield p

    def enumerate(self, i: int) -> Point:
        for k, p in enumerate(self.points(i + 1)):
            if k == i:
                return p
        raise IndexError(i)

    def index_of(self, p: Point) -> int:
        self._check(p)
        target = _index(self.term, p)
        count = 0
        for k in range(target):
            if _cmp(self.term, enumerate_point(self.term, k), self.base) >= 0:
                count += 1
        return count

    def neighbor(self, p: Point, direction: Direction) -> Optional[Point]:
        self._check(p)
        if direction is Direction.SUCC:
            return _succ(self.term, p)
        if p == self.base:
            return None
        return _pred(self.term, p)

    def to_term(self) -> OrderTerm:
        return tail_term(self.term, self.base)


def tail_view(term: OrderTerm, base: Point) -> TailView:
    check_point(term, base)
    return TailView(term, base)

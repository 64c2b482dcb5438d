"""Concrete o-minimal structures indexed by an order term.

Three theories are modelled:

* ``DiscreteOrder``: discrete orders without endpoints.  The model over
  ``L`` is ``L x Z`` (one Z-chain per point of ``L``) and the only
  definable unary maps are shifts.
* ``Odag``: ordered divisible abelian groups.  The model over ``L`` is the
  Hahn-style group of finitely supported maps ``L -> Q`` and the
  designated type is ``x > 0``.
* ``AffineOdag``: the same carrier over ``Sum(Finite 2, L)`` with only
  affine combinations (coefficients summing to 1) definable.

Closures are exact: shift orbits, rational spans and affine hulls, decided
by echelon reduction on leading indices.  ``arch_sim`` uses the structural
rules below; ``arch_sim_oracle`` unfolds the definition by witness search
and exists only to test them.

Structural rules, with ``lead`` the largest index in a support and
``Lambda(V)`` the set of leading indices of nonzero vectors of a span ``V``:

* DiscreteOrder: with ``C_a`` the chains of ``B`` and ``a``,
  ``a ~_B b`` iff ``min C_a <= chain(b) <= max C_a`` and symmetrically.
* Odag: ``a ~_B b`` iff ``min Lambda(V_a) <= lead(b) <= max Lambda(V_a)``
  and symmetrically, where ``V_a = span(B + {a})``.
* AffineOdag: ``a ~_B b`` iff ``a = b`` or ``lead(a - b)`` is at most both
  ``max Lambda(span(B - a))`` and ``max Lambda(span(B - b))``.
"""

from __future__ import annotations

import enum
import functools
import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

from .order import (
    Eta,
    Finite,
    Omega,
    OrderTerm,
    Point,
    Sum,
    above,
    check_point,
    cmp_points,
    enumerate_point,
    size,
    to_text,
)


class TheoryId(enum.Enum):
    DISCRETE = "DiscreteOrder"
    ODAG = "Odag"
    AFFINE = "AffineOdag"

    @classmethod
    def parse(cls, name: str) -> "TheoryId":
        for t in cls:
            if t.value.lower() == name.lower():
                return t
        raise ValueError(f"unknown theory {name!r}; expected one of {[t.value for t in cls]}")


class TypePreconditionError(ValueError):
    pass


class MixedStructures(ValueError):
    pass


# ---------------------------------------------------------------- elements


@dataclass(frozen=True)
class DiscreteElement:
    index: OrderTerm
    chain: Point
    offset: int

    def shift(self, k: int) -> "DiscreteElement":
        return DiscreteElement(self.index, self.chain, self.offset + k)

    def compare(self, other: "DiscreteElement") -> int:
        c = cmp_points(self.index, self.chain, other.chain)
        if c:
            return c
        return (self.offset > other.offset) - (self.offset < other.offset)

    def __lt__(self, other):
        return self.compare(other) < 0

    def __le__(self, other):
        return self.compare(other) <= 0

    def to_json(self):
        return {"chain": _point_json(self.chain), "offset": self.offset}


@dataclass(frozen=True)
class HahnVector:
    """Finitely supported map from points of ``index`` to nonzero rationals.

    ``terms`` is sorted by index, largest first, so ``terms[0]`` is the
    leading term.
    """

    index: OrderTerm
    terms: Tuple[Tuple[Point, Fraction], ...] = ()

    @classmethod
    def of(cls, index: OrderTerm, coeffs: Mapping[Point, Union[int, Fraction]]) -> "HahnVector":
        items = [(p, Fraction(c)) for p, c in coeffs.items() if c != 0]
        for p, _ in items:
            check_point(index, p)
        key = functools.cmp_to_key(lambda x, y: cmp_points(index, y[0], x[0]))
        return cls(index, tuple(sorted(items, key=key)))

    @classmethod
    def unit(cls, index: OrderTerm, p: Point) -> "HahnVector":
        return cls.of(index, {p: 1})

    def as_dict(self) -> Dict[Point, Fraction]:
        return dict(self.terms)

    def __bool__(self):
        return bool(self.terms)

    @property
    def lead(self) -> Optional[Point]:
        return self.terms[0][0] if self.terms else None

    @property
    def lead_coeff(self) -> Fraction:
        return self.terms[0][1] if self.terms else Fraction(0)

    def _check(self, other: "HahnVector"):
        if self.index != other.index:
            raise MixedStructures("vectors over different index orders")

    def __add__(self, other: "HahnVector") -> "HahnVector":
        self._check(other)
        return HahnVector(self.index, tuple(_merge(self.index, self.terms, other.terms, 1)))

    def __neg__(self) -> "HahnVector":
        return HahnVector(self.index, tuple((p, -c) for p, c in self.terms))

    def __sub__(self, other: "HahnVector") -> "HahnVector":
        return self + (-other)

    def scale(self, q) -> "HahnVector":
        q = Fraction(q)
        if q == 0:
            return HahnVector(self.index)
        return HahnVector(self.index, tuple((p, c * q) for p, c in self.terms))

    __rmul__ = scale

    def sign(self) -> int:
        if not self.terms:
            return 0
        return 1 if self.lead_coeff > 0 else -1

    def compare(self, other: "HahnVector") -> int:
        self._check(other)
        for _, c in _merge(self.index, self.terms, other.terms, -1):
            return 1 if c > 0 else -1
        return 0

    def __lt__(self, other):
        return self.compare(other) < 0

    def __le__(self, other):
        return self.compare(other) <= 0

    def coefficient_sum(self) -> Fraction:
        return sum((c for _, c in self.terms), Fraction(0))

    def to_json(self):
        return [[_point_json(p), str(c)] for p, c in self.terms]


Element = Union[DiscreteElement, HahnVector]


def _merge(index, xs, ys, sign):
    """Terms of ``xs + sign * ys``, both sorted largest index first, lazily."""
    i = j = 0
    while i < len(xs) or j < len(ys):
        if j == len(ys):
            c = 1
        elif i == len(xs):
            c = -1
        else:
            c = cmp_points(index, xs[i][0], ys[j][0])
        if c > 0:
            yield xs[i]
            i += 1
        elif c < 0:
            yield (ys[j][0], sign * ys[j][1])
            j += 1
        else:
            total = xs[i][1] + sign * ys[j][1]
            if total:
                yield (xs[i][0], total)
            i += 1
            j += 1


def _point_json(p: Point):
    if isinstance(p, tuple):
        return [_point_json(x) for x in p]
    if isinstance(p, Fraction):
        return str(p)
    return p


def _max_index(index: OrderTerm, points) -> Optional[Point]:
    best = None
    for p in points:
        if best is None or cmp_points(index, p, best) > 0:
            best = p
    return best


def _min_index(index: OrderTerm, points) -> Optional[Point]:
    best = None
    for p in points:
        if best is None or cmp_points(index, p, best) < 0:
            best = p
    return best


# ---------------------------------------------------------------- linear algebra


class Echelon:
    """Basis of a rational span, one vector per leading index."""

    def __init__(self, index: OrderTerm, vectors: Sequence[HahnVector] = ()):
        self.index = index
        self.basis: Dict[Point, HahnVector] = {}
        for v in vectors:
            self.add(v)

    def reduce(self, v: HahnVector) -> HahnVector:
        # each step removes the current leading index, and the new leading
        # index is strictly smaller, so this terminates on a finite support
        while v and v.lead in self.basis:
            v = v - self.basis[v.lead].scale(v.lead_coeff)
        return v

    def add(self, v: HahnVector) -> bool:
        r = self.reduce(v)
        if not r:
            return False
        self.basis[r.lead] = r.scale(1 / r.lead_coeff)
        return True

    def __contains__(self, v: HahnVector) -> bool:
        return not self.reduce(v)

    @property
    def leading_indices(self) -> List[Point]:
        return list(self.basis)

    def max_lead(self) -> Optional[Point]:
        return _max_index(self.index, self.basis)

    def min_lead(self) -> Optional[Point]:
        return _min_index(self.index, self.basis)

    @property
    def dimension(self) -> int:
        return len(self.basis)


# ---------------------------------------------------------------- structures


def _affine_index(L: OrderTerm) -> OrderTerm:
    return Sum((Finite(2), L))


def _embed(L: OrderTerm, p: Point) -> Point:
    # Sum flattens, so a Sum source shifts its part indices by one
    if isinstance(L, Sum):
        part, sub = p
        return (part + 1, sub)
    return (1, p)


def _unembed(L: OrderTerm, p: Point) -> Optional[Point]:
    part, sub = p
    if part == 0:
        return None
    return (part - 1, sub) if isinstance(L, Sum) else sub


@dataclass(frozen=True)
class Structure:
    theory: TheoryId
    source: OrderTerm
    index: OrderTerm

    def generator(self, p: Point) -> Element:
        """The generator attached to the point ``p`` of the source order."""
        check_point(self.source, p)
        if self.theory is TheoryId.DISCRETE:
            return DiscreteElement(self.index, p, 0)
        if self.theory is TheoryId.ODAG:
            return HahnVector.unit(self.index, p)
        return HahnVector.unit(self.index, _embed(self.source, p))

    def prefix(self, i: int) -> HahnVector:
        """The ``i``-th generator of the ``Finite 2`` prefix (AffineOdag only)."""
        if self.theory is not TheoryId.AFFINE:
            raise ValueError("only AffineOdag models carry a prefix")
        return HahnVector.unit(self.index, (0, i))

    def source_point(self, index_point: Point) -> Optional[Point]:
        if self.theory is TheoryId.AFFINE:
            return _unembed(self.source, index_point)
        return index_point

    def realizes(self, x: Element) -> bool:
        if self.theory is TheoryId.DISCRETE:
            return isinstance(x, DiscreteElement)
        if not isinstance(x, HahnVector):
            return False
        if self.theory is TheoryId.ODAG:
            return x.sign() > 0
        return x.coefficient_sum() == 1

    def random_element(self, rng: random.Random, spread: int = 30, support: int = 4,
                       height: int = 8) -> Element:
        """Seeded element of the generated model.

        Discrete: a random chain among the first ``spread`` points, offset
        in [-50, 50].  Odag: positive vector with at most ``support`` terms.
        AffineOdag: affine combination of at most ``support`` generators.
        """
        pts = _first_points(self.index, spread)
        if self.theory is TheoryId.DISCRETE:
            return DiscreteElement(self.index, rng.choice(pts), rng.randint(-50, 50))
        k = rng.randint(1, min(support, len(pts)))
        chosen = rng.sample(pts, k)
        coeffs = {p: random_rational(rng, height) for p in chosen}
        if self.theory is TheoryId.ODAG:
            v = HahnVector.of(self.index, coeffs)
            return v if v.sign() > 0 else -v
        last = chosen[-1]
        coeffs[last] = 0
        coeffs[last] = 1 - sum(coeffs.values())
        return HahnVector.of(self.index, coeffs)

    def to_json(self):
        return {"theory": self.theory.value, "source": to_text(self.source), "index": to_text(self.index)}


def build_model(theory: TheoryId, L: OrderTerm) -> Structure:
    index = _affine_index(L) if theory is TheoryId.AFFINE else L
    return Structure(theory, L, index)


def _first_points(term: OrderTerm, count: int) -> List[Point]:
    n = size(term)
    count = count if n is None else min(count, n)
    return [enumerate_point(term, i) for i in range(count)]


def random_rational(rng: random.Random, height: int = 8, nonzero: bool = True) -> Fraction:
    while True:
        q = Fraction(rng.randint(-height, height), rng.randint(1, height))
        if q or not nonzero:
            return q


# ---------------------------------------------------------------- closure


@dataclass(frozen=True)
class ParamSet:
    theory: TheoryId
    elements: Tuple[Element, ...] = ()

    @property
    def size(self) -> int:
        return len(self.elements)


@dataclass
class ClosureDescriptor:
    theory: TheoryId
    generators: Tuple[Element, ...]
    chains: Tuple[Point, ...] = ()
    origin: Optional[HahnVector] = None
    span: Optional[Echelon] = None

    def contains(self, x: Element) -> bool:
        if self.theory is TheoryId.DISCRETE:
            return x.chain in self.chains
        if self.theory is TheoryId.ODAG:
            return x in self.span
        if self.origin is None:
            return False
        return (x - self.origin) in self.span

    def realized_contains(self, x: Element) -> bool:
        """Membership in the closure restricted to the designated type."""
        if self.theory is TheoryId.ODAG and x.sign() <= 0:
            return False
        if self.theory is TheoryId.AFFINE and x.coefficient_sum() != 1:
            return False
        return self.contains(x)

    def to_json(self):
        out = {"theory": self.theory.value, "generators": len(self.generators)}
        if self.span is not None:
            out["dimension"] = self.span.dimension
            out["leading_indices"] = [_point_json(p) for p in self.span.leading_indices]
        else:
            out["chains"] = [_point_json(p) for p in self.chains]
        return out


def _same_index(elements: Sequence[Element]) -> OrderTerm:
    indices = {e.index for e in elements}
    if len(indices) > 1:
        raise MixedStructures("parameters come from different structures")
    return next(iter(indices))


def closure(theory: TheoryId, B: ParamSet, extra: Optional[Element] = None) -> ClosureDescriptor:
    gens = tuple(B.elements) + ((extra,) if extra is not None else ())
    if not gens:
        return ClosureDescriptor(theory, gens, span=None if theory is TheoryId.DISCRETE else Echelon(None))
    index = _same_index(gens)
    if theory is TheoryId.DISCRETE:
        return ClosureDescriptor(theory, gens, chains=tuple(dict.fromkeys(g.chain for g in gens)))
    if theory is TheoryId.ODAG:
        return ClosureDescriptor(theory, gens, span=Echelon(index, gens))
    origin = gens[0]
    return ClosureDescriptor(theory, gens, origin=origin, span=Echelon(index, [g - origin for g in gens[1:]]))


def membership(theory: TheoryId, B: ParamSet, x: Element) -> bool:
    return closure(theory, B).contains(x)


# ---------------------------------------------------------------- Archimedean equivalence


def _check_type(theory: TheoryId, *xs: Element):
    for x in xs:
        if theory is TheoryId.DISCRETE and not isinstance(x, DiscreteElement):
            raise TypePreconditionError("DiscreteOrder expects DiscreteElement values")
        if theory is not TheoryId.DISCRETE and not isinstance(x, HahnVector):
            raise TypePreconditionError(f"{theory.value} expects HahnVector values")
        if theory is TheoryId.ODAG and x.sign() <= 0:
            raise TypePreconditionError("Odag's designated type is x > 0")
        if theory is TheoryId.AFFINE and x.coefficient_sum() != 1:
            raise TypePreconditionError("AffineOdag elements are affine combinations of generators")


def arch_sim(theory: TheoryId, B: ParamSet, a: Element, b: Element) -> bool:
    _check_type(theory, a, b)
    if B.elements:
        _same_index(list(B.elements) + [a, b])
    if theory is TheoryId.DISCRETE:
        return _flanked_chains(B, a, b) and _flanked_chains(B, b, a)
    if theory is TheoryId.ODAG:
        return _flanked_leads(B, a, b) and _flanked_leads(B, b, a)
    if a == b:
        return True
    d = (a - b).lead
    index = a.index
    for x in (a, b):
        top = Echelon(index, [e - x for e in B.elements]).max_lead()
        if top is None or cmp_points(index, d, top) > 0:
            return False
    return True


def _flanked_chains(B: ParamSet, a: DiscreteElement, b: DiscreteElement) -> bool:
    chains = [e.chain for e in B.elements] + [a.chain]
    lo, hi = _min_index(a.index, chains), _max_index(a.index, chains)
    return cmp_points(a.index, lo, b.chain) <= 0 <= cmp_points(a.index, hi, b.chain)


def _flanked_leads(B: ParamSet, a: HahnVector, b: HahnVector) -> bool:
    span = Echelon(a.index, list(B.elements) + [a])
    lo, hi = span.min_lead(), span.max_lead()
    return cmp_points(a.index, lo, b.lead) <= 0 <= cmp_points(a.index, hi, b.lead)


SCALES = tuple(Fraction(2) ** j for j in range(-12, 13))


def _witnesses(theory: TheoryId, B: ParamSet, a: Element, radius: int) -> Iterator[Element]:
    """Finitely many elements of the closure of ``B + {a}`` in the type.

    Discrete: shifts by at most ``radius``.  Odag: signed power-of-two
    multiples of the generators and their echelon basis.  AffineOdag:
    ``a + t (e - a)`` for parameters ``e`` and the same multipliers ``t``.
    """
    if theory is TheoryId.DISCRETE:
        for base in (a,) + tuple(B.elements):
            for k in range(-radius, radius + 1):
                yield base.shift(k)
        return
    if theory is TheoryId.ODAG:
        dirs = list(B.elements) + [a] + list(Echelon(a.index, list(B.elements) + [a]).basis.values())
        for v in dirs:
            for t in SCALES:
                for w in (v.scale(t), v.scale(-t)):
                    if w.sign() > 0:
                        yield w
        return
    yield a
    for e in B.elements:
        for t in SCALES:
            yield a + (e - a).scale(t)
            yield a + (e - a).scale(-t)


def _flanked_by_search(theory: TheoryId, B: ParamSet, a: Element, b: Element, radius: int) -> bool:
    low = high = False
    for w in _witnesses(theory, B, a, radius):
        c = w.compare(b)
        low = low or c <= 0
        high = high or c >= 0
        if low and high:
            return True
    return False


def arch_sim_oracle(theory: TheoryId, B: ParamSet, a: Element, b: Element, radius: int = 200) -> bool:
    """The definition of ``a ~_B b`` checked by bounded witness search.

    Sound (a found witness is a real witness).  Complete when Discrete
    offsets differ by at most ``radius`` and Hahn coefficient ratios stay
    below 2^12, which all seeded draws here satisfy.
    """
    _check_type(theory, a, b)
    return (_flanked_by_search(theory, B, a, b, radius)
            and _flanked_by_search(theory, B, b, a, radius))


# ---------------------------------------------------------------- ladders


@dataclass
class LadderPresentation:
    """Ladder classes labelled by points of the model's index order.

    ``labels`` are the index points carrying a class, in the index order;
    ``claimed_order`` is the term those labels form.
    """

    theory: TheoryId
    params: ParamSet
    model: Structure
    claimed_order: OrderTerm
    floor: Optional[Point] = None  # labels are the index points above this one

    def is_label(self, p: Point) -> bool:
        return self.floor is None or cmp_points(self.model.index, p, self.floor) > 0

    def labels(self, limit: int, scan: int = 10_000) -> List[Point]:
        """The first ``limit`` labels in enumeration order of the index."""
        out = []
        for p in _first_points(self.model.index, scan):
            if len(out) == limit:
                break
            if self.is_label(p):
                out.append(p)
        return out

    def representative(self, p: Point) -> Element:
        if not self.is_label(p):
            raise ValueError(f"{p!r} labels no ladder class")
        if self.theory is TheoryId.AFFINE:
            b1 = self.params.elements[0]
            return b1 + (HahnVector.unit(self.model.index, p) - self.model.prefix(0))
        return self.model.generator(p)

    def class_of(self, x: Element) -> Optional[Point]:
        """Label of the class of ``x``; ``None`` outside the presented type."""
        if self.theory is TheoryId.DISCRETE:
            return x.chain
        if self.theory is TheoryId.ODAG:
            return x.lead if x.sign() > 0 else None
        d = x - self.params.elements[0]
        if d.sign() <= 0 or not self.is_label(d.lead):
            return None
        return d.lead

    def classes(self, limit: int) -> Iterator[Tuple[Point, Element]]:
        for p in self.labels(limit):
            yield p, self.representative(p)

    def to_json(self, limit: int = 10):
        return {
            "theory": self.theory.value,
            "params": len(self.params.elements),
            "claimed_order": to_text(self.claimed_order),
            "classes": [{"label": _point_json(p), "representative": r.to_json()}
                        for p, r in self.classes(limit)],
        }


def ladder(theory: TheoryId, B: ParamSet, model: Structure) -> LadderPresentation:
    """The Archimedean ladder of the designated type in the generated model.

    DiscreteOrder and Odag take ``B`` empty; the ladder is the source order
    with one class per generator.  AffineOdag takes two distinct parameters
    ``b1, b2`` and presents the ladder of the non-cut above their hull: the
    classes are the indices above ``lead(b2 - b1)``, a tail of the index
    order, and the class of ``x`` is ``lead(x - b1)``.
    """
    if theory is not model.theory:
        raise MixedStructures("parameter theory and model theory differ")
    if theory is not TheoryId.AFFINE:
        if B.elements:
            raise ValueError(f"the {theory.value} ladder is taken over the empty set")
        return LadderPresentation(theory, B, model, model.source)
    if len(B.elements) != 2 or B.elements[0] == B.elements[1]:
        raise ValueError("the AffineOdag ladder needs two distinct parameters")
    b1, b2 = B.elements
    floor = (b2 - b1).lead
    tail = above(model.index, floor)
    if tail is None:
        raise ValueError("no indices above the parameters' hull")
    return LadderPresentation(theory, B, model, tail, floor)


# ---------------------------------------------------------------- nonsimplicity


@dataclass(frozen=True)
class DefinableFunction:
    kind: str  # "shift" or "linear"
    coefficients: Tuple[Fraction, ...] = ()
    amount: int = 0

    @property
    def arity(self) -> int:
        return 1 if self.kind == "shift" else len(self.coefficients)

    def apply(self, xs: Sequence[Element]) -> Element:
        if self.kind == "shift":
            return xs[0].shift(self.amount)
        out = xs[0].scale(0)
        for c, x in zip(self.coefficients, xs):
            out = out + x.scale(c)
        return out

    def describe(self) -> str:
        names = "xyzwuv"
        if self.kind == "shift":
            sign = "+" if self.amount > 0 else "-"
            return f"x{sign}{abs(self.amount)}"
        text = ""
        for i in reversed(range(self.arity)):
            c = self.coefficients[i]
            if c == 0:
                continue
            mag = "" if abs(c) == 1 else f"{abs(c)}"
            if c < 0:
                text += "-"
            elif text:
                text += "+"
            text += mag + names[i]
        return text or "0"


@dataclass
class NonsimplicityCertificate:
    theory: TheoryId
    n: int
    witness_fn: DefinableFunction
    witness_tuple: Tuple[Element, ...]
    produced: Element
    height: int
    ruled_out: Dict[int, int]  # arity -> candidates exhausted without a witness

    def to_json(self):
        return {
            "theory": self.theory.value,
            "n": self.n,
            "witness": self.witness_fn.describe(),
            "witness_tuple": [x.to_json() for x in self.witness_tuple],
            "produced": self.produced.to_json(),
            "height": self.height,
            "ruled_out": {str(k): v for k, v in sorted(self.ruled_out.items())},
        }


class NoWitnessFound(LookupError):
    def __init__(self, theory: TheoryId, n_max: int, height: int, ruled_out: Dict[int, int]):
        super().__init__(f"no nonsimplicity witness for {theory.value} with arity <= {n_max} "
                         f"and height <= {height}")
        self.ruled_out = ruled_out


def rationals_of_height(h: int) -> List[Fraction]:
    """All rationals p/q with |p| <= h and 1 <= q <= h, simplest first."""
    qs = {Fraction(p, q) for q in range(1, h + 1) for p in range(-h, h + 1)}
    return sorted(qs, key=lambda q: (max(abs(q.numerator), q.denominator), q.denominator, q < 0, abs(q)))


def candidate_functions(theory: TheoryId, n: int, height: int) -> Iterator[DefinableFunction]:
    if theory is TheoryId.DISCRETE:
        if n == 1:
            for k in sorted(range(-height, height + 1), key=lambda k: (abs(k), k < 0)):
                yield DefinableFunction("shift", amount=k)
        return
    qs = rationals_of_height(height)
    pools = [qs] * n

    def rank(cs):
        return (max(max(abs(c.numerator), c.denominator) for c in cs),
                sum(c.denominator != 1 for c in cs),
                tuple(-c for c in reversed(cs)))

    combos = itertools.product(*pools)
    if theory is TheoryId.AFFINE:
        combos = (cs for cs in combos if sum(cs) == 1)
    for cs in sorted(combos, key=rank):
        yield DefinableFunction("linear", coefficients=tuple(cs))


def _test_tuple(model: Structure, n: int) -> Tuple[Element, ...]:
    pts = _first_points(model.source, max(n, 1))
    if len(pts) < n:
        raise ValueError("source order too small for the requested arity")
    gens = sorted((model.generator(p) for p in pts), key=functools.cmp_to_key(lambda x, y: x.compare(y)))
    return tuple(gens[:n])


def nonsimplicity_search(theory: TheoryId, n_max: int, height: int = 8,
                         source: Optional[OrderTerm] = None) -> NonsimplicityCertificate:
    """Least-arity definable function producing a new realization from a tuple.

    Every candidate of each arity below the certificate's is checked and
    counted in ``ruled_out``; for the affine theory the arity-1 family of
    height ``height`` is exhausted outright.
    """
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    model = build_model(theory, source if source is not None else Omega)
    ruled_out: Dict[int, int] = {}
    for n in range(1, n_max + 1):
        xs = _test_tuple(model, n)
        count = 0
        for fn in candidate_functions(theory, n, height):
            count += 1
            y = fn.apply(xs)
            if model.realizes(y) and y not in xs:
                assert closure(theory, ParamSet(theory, xs)).realized_contains(y)
                return NonsimplicityCertificate(theory, n, fn, xs, y, height, ruled_out)
        ruled_out[n] = count
    raise NoWitnessFound(theory, n_max, height, ruled_out)


# ---------------------------------------------------------------- canonical tail


@dataclass
class CanonicalTailReport:
    source: str
    trials: int
    seed: int
    checked: int = 0
    skipped: int = 0
    equivalent: int = 0
    disagreements: int = 0
    rule_mismatches: int = 0
    counterexample: Optional[dict] = None

    @property
    def ok(self) -> bool:
        return self.disagreements == 0 and self.rule_mismatches == 0

    def to_json(self):
        return dict(self.__dict__, ok=self.ok)


def above_hull(params: Sequence[HahnVector], x: HahnVector) -> bool:
    """Whether ``x`` exceeds every element of the affine hull of ``params``."""
    origin = params[0]
    top = Echelon(x.index, [p - origin for p in params[1:]]).max_lead()
    d = x - origin
    if d.sign() <= 0:
        return False
    return top is None or cmp_points(x.index, d.lead, top) > 0


def canonical_tail_check(L: OrderTerm, trials: int, seed: int, use_oracle: bool = True) -> CanonicalTailReport:
    """Compare ``~_A`` and ``~_B`` on pairs above the hull of ``A + B``.

    ``A``, ``B`` are random 2-element sets of the AffineOdag model over ``L``.
    ``c`` is ``a1`` plus a positive multiple of ``e_lam - e_0``, with ``lam``
    usually above the hull's leading indices, plus lower-order noise; ``d``
    is either ``c`` lifted the same way at an unconstrained index or an
    independent draw.  Pairs failing the hull precondition are
    skipped.  Both relations come from the witness-search oracle and are
    compared with the structural rule as well.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    theory = TheoryId.AFFINE
    model = build_model(theory, L)
    rng = random.Random(seed)
    index = model.index
    pts = _first_points(index, 40)
    base = model.prefix(0)
    report = CanonicalTailReport(to_text(L), trials, seed)

    def draw_pair():
        while True:
            x, y = model.random_element(rng), model.random_element(rng)
            if x != y:
                return (x, y)

    def lift(origin: HahnVector, floor: Optional[Point]) -> HahnVector:
        # mostly aim above the hull; one draw in ten is unconstrained so the
        # precondition filter is exercised
        higher = [p for p in pts if floor is None or cmp_points(index, p, floor) > 0]
        if not higher or rng.random() < 0.1:
            higher = pts
        lam = rng.choice(higher)
        lower = [p for p in pts if cmp_points(index, p, lam) < 0 and p != (0, 0)]
        out = origin + (HahnVector.unit(index, lam) - base).scale(Fraction(rng.randint(1, 8), rng.randint(1, 8)))
        for p in rng.sample(lower, min(len(lower), rng.randint(0, 2))):
            out = out + (HahnVector.unit(index, p) - base).scale(random_rational(rng))
        return out

    for _ in range(trials):
        A, B = draw_pair(), draw_pair()
        joint = list(A) + list(B)
        floor = Echelon(index, [x - A[0] for x in joint[1:]]).max_lead()
        c = lift(A[0], floor)
        if rng.random() < 0.5:
            d = lift(c, None)
        else:
            d = lift(A[0], floor)
        if not (above_hull(joint, c) and above_hull(joint, d)):
            report.skipped += 1
            continue
        report.checked += 1
        pa, pb = ParamSet(theory, A), ParamSet(theory, B)
        rel = arch_sim_oracle if use_oracle else arch_sim
        sa, sb = rel(theory, pa, c, d), rel(theory, pb, c, d)
        report.equivalent += sa
        if use_oracle and (sa != arch_sim(theory, pa, c, d) or sb != arch_sim(theory, pb, c, d)):
            report.rule_mismatches += 1
        if sa != sb:
            report.disagreements += 1
            if report.counterexample is None:
                report.counterexample = {
                    "A": [x.to_json() for x in A], "B": [x.to_json() for x in B],
                    "c": c.to_json(), "d": d.to_json(), "sim_A": sa, "sim_B": sb,
                }
    return report


# ---------------------------------------------------------------- faithfulness


@dataclass
class FaithfulnessReport:
    theory: str
    sample_size: int
    seed: int
    mode: str
    checked: int = 0
    excluded: int = 0
    violations: int = 0
    example: Optional[dict] = None

    @property
    def ok(self) -> bool:
        return self.violations == 0

    def to_json(self):
        return dict(self.__dict__, ok=self.ok)


def faithfulness_check(theory: TheoryId, sample_size: int, seed: int, mode: str = "inequivalent",
                       source: Optional[OrderTerm] = None, height: int = 8) -> FaithfulnessReport:
    """Sample ``c`` in the closure of a set ``B`` of realizations and test ``c ~ b``.

    ``mode="inequivalent"`` draws ``B`` pairwise inequivalent, as when a
    ladder is built from one realization per class.  ``mode="arbitrary"``
    drops that restriction; for Odag this exposes sets whose span reaches
    a new Archimedean class (``x > 0`` is an isolated type, not a non-cut).
    """
    if theory is TheoryId.AFFINE:
        raise ValueError("faithfulness is checked for DiscreteOrder and Odag")
    if mode not in ("inequivalent", "arbitrary"):
        raise ValueError(f"unknown sampling mode {mode!r}")
    model = build_model(theory, source if source is not None else Eta)
    rng = random.Random(seed)
    report = FaithfulnessReport(theory.value, sample_size, seed, mode)
    empty = ParamSet(theory)
    pts = _first_points(model.index, 30)
    while report.checked < sample_size:
        k = rng.randint(1, 4)
        if theory is TheoryId.DISCRETE:
            B = [model.random_element(rng) for _ in range(k)]
            c = rng.choice(B).shift(rng.randint(-50, 50))
        else:
            if mode == "inequivalent":
                leads = rng.sample(pts, k)
                B = []
                for lam in leads:
                    lower = [p for p in pts if cmp_points(model.index, p, lam) < 0]
                    coeffs = {lam: abs(random_rational(rng, height))}
                    for p in rng.sample(lower, min(len(lower), rng.randint(0, 3))):
                        coeffs[p] = random_rational(rng, height)
                    B.append(HahnVector.of(model.index, coeffs))
            else:
                # a narrow index pool makes leading indices collide
                B = [model.random_element(rng, spread=3) for _ in range(k)]
            c = B[0].scale(0)
            for b in B:
                c = c + b.scale(random_rational(rng, height, nonzero=False))
            if c.sign() <= 0:
                report.excluded += 1
                continue
        report.checked += 1
        if not any(arch_sim(theory, empty, c, b) for b in B):
            report.violations += 1
            if report.example is None:
                report.example = {"B": [b.to_json() for b in B], "c": c.to_json()}
    return report

"""Isomorphism invariants for a theory whose 1-types are all simple.

The concrete theory is DLO with, for every designated cut, an ascending
omega-family of constants below it and a descending omega*-family above
it.  A countable model is determined up to isomorphism by what fills each
cut, and each filling is one of six dense-fragment orders:

    0: empty   1: singleton   2: eta   3: 1+eta   4: eta+1   5: 1+eta+1

With finitely many cuts the invariant is the vector of indices (smooth).
With cuts named by rationals it is the set of (code, index) pairs for the
realized cuts (countable set of reals).

File formats (JSON)::

    theory: {"kind": "finite", "cuts": ["c1", "c2"]}  |  {"kind": "rational"}
    model:  {"fillings": {"c1": 5}}  |  {"listing": [["1/2", 2], ["1/3", 3]]}
"""

from __future__ import annotations

import enum
import itertools
import json
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, FrozenSet, Hashable, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from .iso import NotDenseFragment, ef_equivalent, normalize_dense
from .order import Eta, Finite, Omega, OmegaStar, OrderTerm, Sum, sum_of, to_text


class SixType(enum.IntEnum):
    EMPTY = 0
    SINGLETON = 1
    ETA = 2
    ONE_ETA = 3
    ETA_ONE = 4
    ONE_ETA_ONE = 5

    def term(self) -> Optional[OrderTerm]:
        return _FILLINGS[self]

    @property
    def label(self) -> str:
        return ("empty", "1", "eta", "1+eta", "eta+1", "1+eta+1")[self]


_FILLINGS = {
    SixType.EMPTY: None,
    SixType.SINGLETON: Finite(1),
    SixType.ETA: Eta,
    SixType.ONE_ETA: Sum((Finite(1), Eta)),
    SixType.ETA_ONE: Sum((Eta, Finite(1))),
    SixType.ONE_ETA_ONE: Sum((Finite(1), Eta, Finite(1))),
}


class UnknownCut(KeyError):
    pass


class MixedTheories(ValueError):
    pass


class OutsideSixTypes(ValueError):
    pass


CutName = Hashable


@dataclass(frozen=True)
class SimpleTheorySpec:
    """Cut index: an explicit finite list, or ``None`` for rational-indexed cuts."""

    cuts: Optional[Tuple[str, ...]] = None

    @classmethod
    def finitely_many(cls, names: Iterable[str]) -> "SimpleTheorySpec":
        names = tuple(names)
        if len(set(names)) != len(names):
            raise ValueError("cut names must be distinct")
        return cls(names)

    @classmethod
    def rational_indexed(cls) -> "SimpleTheorySpec":
        return cls(None)

    @property
    def is_small(self) -> bool:
        return self.cuts is not None

    def ordered_cuts(self, names: Iterable[CutName]) -> List[CutName]:
        names = set(names)
        if self.is_small:
            unknown = names - set(self.cuts)
            if unknown:
                raise UnknownCut(f"unknown cut(s) {sorted(map(str, unknown))}")
            return [c for c in self.cuts if c in names]
        if not all(isinstance(c, Fraction) for c in names):
            raise MixedTheories("rational-indexed cuts are named by rationals")
        return sorted(names)

    def to_json(self):
        return {"kind": "finite", "cuts": list(self.cuts)} if self.is_small else {"kind": "rational"}

    @classmethod
    def from_json(cls, doc) -> "SimpleTheorySpec":
        if doc.get("kind") == "finite":
            return cls.finitely_many(doc["cuts"])
        if doc.get("kind") == "rational":
            return cls.rational_indexed()
        raise ValueError("theory kind must be 'finite' or 'rational'")


@dataclass(frozen=True)
class SimpleModelSpec:
    """Fillings of the realized cuts; index-0 fillings are dropped."""

    fillings: Tuple[Tuple[CutName, SixType], ...]

    @classmethod
    def of(cls, fillings: Union[Mapping[CutName, int], Sequence[Tuple[CutName, int]]]) -> "SimpleModelSpec":
        pairs = fillings.items() if isinstance(fillings, Mapping) else fillings
        seen: Dict[CutName, SixType] = {}
        for name, k in pairs:
            t = SixType(k)
            if name in seen and seen[name] != t:
                raise ValueError(f"cut {name!r} listed with two fillings")
            seen[name] = t
        kept = [(n, t) for n, t in seen.items() if t is not SixType.EMPTY]
        return cls(tuple(sorted(kept, key=lambda nt: (str(type(nt[0])), nt[0]))))

    def as_dict(self) -> Dict[CutName, SixType]:
        return dict(self.fillings)

    def to_json(self):
        if all(isinstance(n, Fraction) for n, _ in self.fillings) and self.fillings:
            return {"listing": [[str(n), int(t)] for n, t in self.fillings]}
        return {"fillings": {str(n): int(t) for n, t in self.fillings}}

    @classmethod
    def from_json(cls, doc) -> "SimpleModelSpec":
        if "listing" in doc:
            return cls.of([(Fraction(code), k) for code, k in doc["listing"]])
        return cls.of(doc.get("fillings", {}))


@dataclass(frozen=True)
class RealizedModel:
    """An order term with provenance: the part range filled by each cut."""

    term: OrderTerm
    segments: Tuple[Tuple[CutName, int, int], ...]  # (cut, first part, end part)
    constants: Tuple[int, ...]  # part indices holding constant families

    def segment(self, cut: CutName) -> Optional[OrderTerm]:
        for name, lo, hi in self.segments:
            if name == cut:
                return sum_of(*self.term.parts[lo:hi])
        raise UnknownCut(f"cut {cut!r} is not present in the model")


def realize_model(theory: SimpleTheorySpec, spec: SimpleModelSpec) -> RealizedModel:
    """Splice each cut's filling between its constant families.

    Every cut of a finite theory appears, realized or not; a rational
    theory shows the listed cuts in code order.  Only the constants
    themselves are drawn: the dense stretches between consecutive
    constants realize isolated types and carry no invariant data.
    """
    fill = spec.as_dict()
    names = theory.ordered_cuts(fill)
    if theory.is_small:
        names = theory.cuts
    parts: List[OrderTerm] = []
    segments, constants = [], []
    for name in names:
        constants.append(len(parts))
        parts.append(Omega)
        filling = fill.get(name, SixType.EMPTY).term()
        start = len(parts)
        if filling is not None:
            parts.extend(filling.parts if isinstance(filling, Sum) else (filling,))
        segments.append((name, start, len(parts)))
        constants.append(len(parts))
        parts.append(OmegaStar)
    return RealizedModel(Sum(tuple(parts)), tuple(segments), tuple(constants))


def classify_segment(segment: Optional[OrderTerm]) -> SixType:
    if segment is None:
        return SixType.EMPTY
    try:
        norm = normalize_dense(segment)
    except NotDenseFragment as exc:
        raise OutsideSixTypes(str(exc)) from exc
    for t, term in _FILLINGS.items():
        if term == norm:
            return t
    raise OutsideSixTypes(f"{to_text(norm)} is not one of the six filling types")


def classify_filling(theory: SimpleTheorySpec, model: RealizedModel, cut: CutName) -> SixType:
    theory.ordered_cuts([cut])
    return classify_segment(model.segment(cut))


@dataclass(frozen=True)
class InvariantVector:
    entries: Tuple[Tuple[str, int], ...]

    def as_dict(self) -> Dict[str, int]:
        return dict(self.entries)

    def to_json(self):
        return {n: k for n, k in self.entries}


F2Set = FrozenSet[Tuple[Fraction, int]]


def smooth_invariant(theory: SimpleTheorySpec, spec: SimpleModelSpec) -> InvariantVector:
    if not theory.is_small:
        raise MixedTheories("rational-indexed theories use f2_invariant")
    fill = spec.as_dict()
    theory.ordered_cuts(fill)
    return InvariantVector(tuple((c, int(fill.get(c, SixType.EMPTY))) for c in theory.cuts))


def f2_invariant(theory: SimpleTheorySpec, spec: SimpleModelSpec) -> F2Set:
    if theory.is_small:
        raise MixedTheories("finite cut lists use smooth_invariant")
    fill = spec.as_dict()
    theory.ordered_cuts(fill)
    return frozenset((code, int(t)) for code, t in fill.items())


def invariant(theory: SimpleTheorySpec, spec: SimpleModelSpec):
    return smooth_invariant(theory, spec) if theory.is_small else f2_invariant(theory, spec)


def apparent_iso(theory: SimpleTheorySpec, a: SimpleModelSpec, b: SimpleModelSpec) -> bool:
    return invariant(theory, a) == invariant(theory, b)


def f2_to_json(s: F2Set):
    return [[str(code), k] for code, k in sorted(s)]


def load_json(path: str):
    with open(path) as fh:
        return json.load(fh)


# ---------------------------------------------------------------- checks


def all_specs(theory: SimpleTheorySpec) -> List[SimpleModelSpec]:
    if not theory.is_small:
        raise MixedTheories("enumeration needs a finite cut list")
    return [SimpleModelSpec.of(dict(zip(theory.cuts, ks)))
            for ks in itertools.product(range(6), repeat=len(theory.cuts))]


def _segments_equivalent(x: Optional[OrderTerm], y: Optional[OrderTerm], max_depth: int) -> bool:
    if x is None or y is None:
        return x is y
    return all(ef_equivalent(x, y, k) for k in range(max_depth + 1))


def realized_iso_surrogate(theory: SimpleTheorySpec, a: SimpleModelSpec, b: SimpleModelSpec,
                           max_depth: int = 6) -> bool:
    """EF-equivalence up to ``max_depth`` of the realized models, constants fixed.

    An isomorphism must fix every constant, so it maps each cut's
    realization onto the same cut's realization; the models are compared
    cut by cut on the segments located through provenance.
    """
    ma, mb = realize_model(theory, a), realize_model(theory, b)
    names = [n for n, _, _ in ma.segments]
    if names != [n for n, _, _ in mb.segments]:
        return False
    return all(_segments_equivalent(ma.segment(n), mb.segment(n), max_depth) for n in names)


def order_reduct_equivalent(theory: SimpleTheorySpec, a: SimpleModelSpec, b: SimpleModelSpec,
                            max_depth: int = 6) -> bool:
    """EF-equivalence of the bare orders, forgetting which constants are which.

    Coarser than isomorphism of models: it cannot tell which cut carries
    a filling when the families around the cuts look alike.
    """
    ta, tb = realize_model(theory, a).term, realize_model(theory, b).term
    return all(ef_equivalent(ta, tb, k) for k in range(max_depth + 1))


def random_spec_pairs(theory: SimpleTheorySpec, count: int, seed: int,
                      same_rate: float = 0.3) -> List[Tuple[SimpleModelSpec, SimpleModelSpec]]:
    """Seeded pairs of specs; about ``same_rate`` of them repeat the first spec."""
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        a = {c: rng.randrange(6) for c in theory.cuts}
        b = dict(a) if rng.random() < same_rate else {c: rng.randrange(6) for c in theory.cuts}
        out.append((SimpleModelSpec.of(a), SimpleModelSpec.of(b)))
    return out

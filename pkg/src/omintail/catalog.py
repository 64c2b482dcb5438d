"""The fixed catalog of test orders used by the verification suites."""

from __future__ import annotations

from typing import List, Tuple

from .grammar import parse_term
from .order import OrderTerm

CATALOG_TEXT: Tuple[str, ...] = (
    "n:1",
    "n:2",
    "n:3",
    "n:4",
    "w",
    "w*",
    "z",
    "eta",
    "sum(n:1,eta)",
    "sum(eta,n:1)",
    "sum(n:1,eta,n:1)",
    "sum(w,w*)",
    "sum(eta,n:1,eta)",
    "rep(w,n:2)",
)


def catalog() -> List[OrderTerm]:
    return [parse_term(t) for t in CATALOG_TEXT]


def catalog_pairs() -> List[Tuple[OrderTerm, OrderTerm]]:
    terms = catalog()
    return [(a, b) for a in terms for b in terms]

"""Registry of order identities used to certify isomorphism.

Each rule rewrites a term into an isomorphic one.  :func:`canonical`
applies the rules bottom-up to a fixpoint; two terms with the same
canonical form are isomorphic.  Adding an identity means appending a
:class:`Identity` to ``REGISTRY``; the isomorphism engine is untouched.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Tuple

from .iso import is_dense_fragment, normalize_dense
from .order import (
    EtaT,
    Finite,
    OmegaStar,
    OmegaStarT,
    OmegaT,
    OrderTerm,
    Replace,
    Sum,
    Zeta,
    ZetaT,
    sum_of,
)


@dataclass(frozen=True)
class Identity:
    name: str
    statement: str
    rewrite: Callable[[OrderTerm], Optional[OrderTerm]]


def _pairwise(rule: Callable[[OrderTerm, OrderTerm], Optional[Tuple[OrderTerm, ...]]]):
    """Lift a rewrite of two adjacent summands to a rewrite of a Sum."""

    def apply(term: OrderTerm) -> Optional[OrderTerm]:
        if not isinstance(term, Sum):
            return None
        parts = list(term.parts)
        for i in range(len(parts) - 1):
            out = rule(parts[i], parts[i + 1])
            if out is not None:
                return sum_of(*parts[:i], *out, *parts[i + 2:])
        return None

    return apply


def _dense_runs(term: OrderTerm) -> Optional[OrderTerm]:
    if not isinstance(term, Sum):
        return None
    parts = list(term.parts)
    i = 0
    while i < len(parts):
        j = i
        while j < len(parts) and isinstance(parts[j], (Finite, EtaT)):
            j += 1
        if j - i >= 2:
            run = Sum(tuple(parts[i:j]))
            norm = normalize_dense(run) if is_dense_fragment(run) else run
            if norm != run:
                return sum_of(*parts[:i], norm, *parts[j:])
        i = max(j, i + 1)
    return None


def _major_absorbs_finite(term: OrderTerm) -> Optional[OrderTerm]:
    if isinstance(term, Replace) and isinstance(term.minor, Finite):
        if isinstance(term.major, (OmegaT, OmegaStarT, ZetaT)):
            return term.major
    return None


def _unit(term: OrderTerm) -> Optional[OrderTerm]:
    if isinstance(term, Replace):
        if term.major == Finite(1):
            return term.minor
        if term.minor == Finite(1):
            return term.major
    return None


def _eta_eta(term: OrderTerm) -> Optional[OrderTerm]:
    if isinstance(term, Replace) and isinstance(term.major, EtaT) and is_dense_fragment(term.minor):
        if isinstance(normalize_dense(term.minor), EtaT):
            return EtaT()
    return None


def _periodic_block(term: OrderTerm) -> Optional[OrderTerm]:
    # omega * (B^j) = omega * B, and the same for omega* and zeta
    if not (isinstance(term, Replace) and isinstance(term.major, (OmegaT, OmegaStarT, ZetaT))):
        return None
    minor = term.minor
    if isinstance(minor, Replace) and isinstance(minor.major, Finite):
        return Replace(term.major, minor.minor)
    if isinstance(minor, Sum):
        parts = minor.parts
        n = len(parts)
        for period in range(1, n // 2 + 1):
            if n % period == 0 and all(parts[i] == parts[i % period] for i in range(n)):
                return Replace(term.major, sum_of(*parts[:period]))
    return None


def _block(term: OrderTerm, major_type) -> Optional[OrderTerm]:
    if isinstance(term, Replace) and isinstance(term.major, major_type):
        return term.minor
    return None


def _prefix_into_omega(left: OrderTerm, right: OrderTerm):
    if _block(right, OmegaT) == left and left is not None:
        return (right,)
    if isinstance(right, OmegaT) and isinstance(left, Finite):
        return (right,)
    return None


def _suffix_into_omega_star(left: OrderTerm, right: OrderTerm):
    if _block(left, OmegaStarT) == right and right is not None:
        return (left,)
    if isinstance(left, OmegaStarT) and isinstance(right, Finite):
        return (left,)
    return None


def _zeta(left: OrderTerm, right: OrderTerm):
    if isinstance(left, OmegaStarT) and isinstance(right, OmegaT):
        return (Zeta,)
    a, b = _block(left, OmegaStarT), _block(right, OmegaT)
    if a is not None and a == b:
        return (Replace(Zeta, a),)
    return None


def _merge_finite(left: OrderTerm, right: OrderTerm):
    if isinstance(left, Finite) and isinstance(right, Finite):
        return (Finite(left.k + right.k),)
    return None


REGISTRY: Tuple[Identity, ...] = (
    Identity("finite-merge", "n + m = n+m", _pairwise(_merge_finite)),
    Identity("dense-run", "a + eta + ... + eta + b = a + eta + b", _dense_runs),
    Identity("unit", "1 x A = A x 1 = A", _unit),
    Identity("omega-absorbs-finite", "omega x n = omega (also omega*, zeta)", _major_absorbs_finite),
    Identity("eta-eta", "eta x eta = eta", _eta_eta),
    Identity("periodic-block", "omega x (B + ... + B) = omega x B", _periodic_block),
    Identity("omega-prefix", "B + omega x B = omega x B; n + omega = omega", _pairwise(_prefix_into_omega)),
    Identity("omega-star-suffix", "omega* x B + B = omega* x B; omega* + n = omega*",
             _pairwise(_suffix_into_omega_star)),
    Identity("zeta", "omega* + omega = zeta; omega* x B + omega x B = zeta x B", _pairwise(_zeta)),
)


def _children(term: OrderTerm) -> OrderTerm:
    if isinstance(term, Sum):
        return sum_of(*(canonical(p) for p in term.parts))
    if isinstance(term, Replace):
        return Replace(canonical(term.major), canonical(term.minor))
    return term


def canonical(term: OrderTerm) -> OrderTerm:
    """Rewrite to a fixpoint of the registry; the result is isomorphic to ``term``."""
    current = _children(term)
    changed = True
    while changed:
        changed = False
        for identity in REGISTRY:
            out = identity.rewrite(current)
            if out is not None and out != current:
                current = _children(out)
                changed = True
                break
    return current

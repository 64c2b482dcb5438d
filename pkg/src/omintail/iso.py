"""Isomorphism of order terms: k-types, EF games and normal forms.

A depth-``k`` type of a linear order ``L`` is computed recursively:

* depth 0 has a single code shared by every order (empty or not);
* depth ``k+1`` is the set of pairs ``(type_k(L_<x), type_k(L_>x))`` over
  all points ``x`` of ``L``.

Two orders have the same depth-``k`` code iff Duplicator wins the
``k``-round Ehrenfeucht-Fraisse game on them.  Codes are interned per
depth as small integers, so each code at depth ``k+1`` is a frozen set of
integer pairs.  Every operation on terms goes through three compositional
rules: concatenation of two orders, the ``omega``/``omega*`` powers (a
fixpoint over the eventually periodic sequence of finite powers) and the
``eta``-shuffle of a block.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from typing import Dict, FrozenSet, List, Optional, Tuple

from .order import (
    EtaT,
    Finite,
    OmegaStarT,
    OmegaT,
    OrderTerm,
    Replace,
    Sum,
    ZetaT,
    size,
    sum_of,
    to_text,
)

DEFAULT_MAX_DEPTH = 6


class DepthLimitExceeded(ValueError):
    pass


class NotDenseFragment(ValueError):
    pass


class KTypeAlgebra:
    """Interned k-type codes with memoised composition.

    Tables are guarded by a lock so one algebra can be shared across
    threads; the integer ids are private to the instance.
    """

    def __init__(self):
        self._codes: List[List[FrozenSet[Tuple[int, int]]]] = [[frozenset()]]
        self._ids: List[Dict[FrozenSet[Tuple[int, int]], int]] = [{frozenset(): 0}]
        self._memo: Dict[tuple, object] = {}
        self._lock = threading.RLock()

    def _intern(self, depth: int, pairs) -> int:
        pairs = frozenset(pairs)
        while len(self._ids) <= depth:
            self._ids.append({})
            self._codes.append([])
        table = self._ids[depth]
        code = table.get(pairs)
        if code is None:
            code = len(self._codes[depth])
            table[pairs] = code
            self._codes[depth].append(pairs)
        return code

    def pairs(self, code: int, depth: int) -> FrozenSet[Tuple[int, int]]:
        return self._codes[depth][code]

    def empty(self, depth: int) -> int:
        if depth == 0:
            return 0
        return self._intern(depth, ())

    def point(self, depth: int) -> int:
        if depth == 0:
            return 0
        e = self.empty(depth - 1)
        return self._intern(depth, [(e, e)])

    def truncate(self, code: int, depth: int) -> int:
        """Code at ``depth - 1`` of any order whose code at ``depth`` is ``code``."""
        if depth <= 1:
            return 0
        key = ("trunc", code, depth)
        hit = self._memo.get(key)
        if hit is None:
            hit = self._intern(
                depth - 1,
                [(self.truncate(l, depth - 1), self.truncate(r, depth - 1))
                 for l, r in self.pairs(code, depth)],
            )
            self._memo[key] = hit
        return hit

    def concat(self, a: int, b: int, depth: int) -> int:
        if depth == 0:
            return 0
        key = ("cat", a, b, depth)
        hit = self._memo.get(key)
        if hit is None:
            ta, tb = self.truncate(a, depth), self.truncate(b, depth)
            d = depth - 1
            out = {(l, self.concat(r, tb, d)) for l, r in self.pairs(a, depth)}
            out.update((self.concat(ta, l, d), r) for l, r in self.pairs(b, depth))
            hit = self._intern(depth, out)
            self._memo[key] = hit
        return hit

    def power(self, code: int, n: int, depth: int) -> int:
        result, base = self.empty(depth), code
        while n:
            if n & 1:
                result = self.concat(result, base, depth)
            base = self.concat(base, base, depth)
            n >>= 1
        return result

    def powers(self, code: int, depth: int) -> FrozenSet[int]:
        """All codes of finite powers ``A^n`` (``n >= 0``); the sequence is eventually periodic."""
        key = ("pows", code, depth)
        hit = self._memo.get(key)
        if hit is None:
            seen = []
            x = self.empty(depth)
            while x not in seen:
                seen.append(x)
                x = self.concat(x, code, depth)
            hit = frozenset(seen)
            self._memo[key] = hit
        return hit

    def omega(self, code: int, depth: int) -> int:
        """Code of ``A * omega`` (omega copies of ``A`` in increasing order)."""
        if depth == 0 or code == self.empty(depth):
            return code
        key = ("omega", code, depth)
        hit = self._memo.get(key)
        if hit is None:
            d = depth - 1
            low = self.truncate(code, depth)
            tail = self.omega(low, d)
            heads = self.powers(low, d)
            hit = self._intern(
                depth,
                [(self.concat(h, l, d), self.concat(r, tail, d))
                 for h in heads for l, r in self.pairs(code, depth)],
            )
            self._memo[key] = hit
        return hit

    def omega_star(self, code: int, depth: int) -> int:
        if depth == 0 or code == self.empty(depth):
            return code
        key = ("omega*", code, depth)
        hit = self._memo.get(key)
        if hit is None:
            d = depth - 1
            low = self.truncate(code, depth)
            head = self.omega_star(low, d)
            tails = self.powers(low, d)
            hit = self._intern(
                depth,
                [(self.concat(head, l, d), self.concat(r, t, d))
                 for t in tails for l, r in self.pairs(code, depth)],
            )
            self._memo[key] = hit
        return hit

    def shuffle(self, code: int, depth: int) -> int:
        """Code of ``A * eta`` (a dense, endpoint-free family of copies of ``A``)."""
        if depth == 0 or code == self.empty(depth):
            return code
        key = ("eta", code, depth)
        hit = self._memo.get(key)
        if hit is None:
            d = depth - 1
            w = self.shuffle(self.truncate(code, depth), d)
            hit = self._intern(
                depth,
                [(self.concat(w, l, d), self.concat(r, w, d)) for l, r in self.pairs(code, depth)],
            )
            self._memo[key] = hit
        return hit

    def replace(self, major: OrderTerm, minor_code: int, depth: int) -> int:
        if isinstance(major, Finite):
            return self.power(minor_code, major.k, depth)
        if isinstance(major, OmegaT):
            return self.omega(minor_code, depth)
        if isinstance(major, OmegaStarT):
            return self.omega_star(minor_code, depth)
        if isinstance(major, ZetaT):
            return self.concat(self.omega_star(minor_code, depth), self.omega(minor_code, depth), depth)
        if isinstance(major, EtaT):
            return self.shuffle(minor_code, depth)
        if isinstance(major, Sum):
            acc = self.empty(depth)
            for part in major.parts:
                acc = self.concat(acc, self.replace(part, minor_code, depth), depth)
            return acc
        if isinstance(major, Replace):
            return self.replace(major.major, self.replace(major.minor, minor_code, depth), depth)
        raise TypeError(f"not an order term: {major!r}")

    def of_term(self, term: Optional[OrderTerm], depth: int) -> int:
        """Code of ``term`` at ``depth``; ``None`` is the empty order."""
        if term is None:
            return self.empty(depth)
        with self._lock:
            key = ("term", term, depth)
            hit = self._memo.get(key)
            if hit is None:
                hit = self.replace(term, self.point(depth), depth)
                self._memo[key] = hit
            return hit

    def expand(self, code: int, depth: int):
        """Canonical nested-tuple form of a code, independent of interning order."""
        if depth == 0:
            return ()
        return tuple(sorted(
            (self.expand(l, depth - 1), self.expand(r, depth - 1)) for l, r in self.pairs(code, depth)
        ))


_DEFAULT = KTypeAlgebra()


@dataclass(frozen=True)
class KType:
    depth: int
    code: int
    algebra: KTypeAlgebra

    def __eq__(self, other):
        if not isinstance(other, KType) or other.depth != self.depth:
            return NotImplemented
        if other.algebra is self.algebra:
            return other.code == self.code
        return self.canonical() == other.canonical()

    def __hash__(self):
        return hash((self.depth, self.code, id(self.algebra)))

    def canonical(self):
        return self.algebra.expand(self.code, self.depth)


def ktype(term: Optional[OrderTerm], k: int, algebra: Optional[KTypeAlgebra] = None) -> KType:
    algebra = algebra or _DEFAULT
    return KType(k, algebra.of_term(term, k), algebra)


def ef_equivalent(a: OrderTerm, b: OrderTerm, k: int, max_depth: int = DEFAULT_MAX_DEPTH,
                  algebra: Optional[KTypeAlgebra] = None) -> bool:
    """Whether Duplicator wins the ``k``-round EF game on ``a`` and ``b``."""
    if k > max_depth:
        raise DepthLimitExceeded(f"depth {k} exceeds the configured maximum {max_depth}")
    if k < 0:
        raise ValueError("depth must be non-negative")
    algebra = algebra or _DEFAULT
    return algebra.of_term(a, k) == algebra.of_term(b, k)


# ---------------------------------------------------------------- brute force

BRUTE_MAX_SIZE = 25
BRUTE_MAX_DEPTH = 4


def brute_force_ef(a, b, k: int) -> bool:
    """Exhaustive ``k``-round EF game on two finite orders (sizes or ``Finite`` terms).

    Positions are reduced to the sequence of gap lengths between pebbles,
    which determines the pebbled structure up to isomorphism.
    """
    m = a.k if isinstance(a, Finite) else a
    n = b.k if isinstance(b, Finite) else b
    if not (isinstance(m, int) and isinstance(n, int)):
        raise TypeError("brute_force_ef needs finite orders")
    if max(m, n) > BRUTE_MAX_SIZE or k > BRUTE_MAX_DEPTH:
        raise DepthLimitExceeded(
            f"brute force limited to sizes <= {BRUTE_MAX_SIZE} and depth <= {BRUTE_MAX_DEPTH}")
    return _gap_game((m,), (n,), k)


_GAME_MEMO: Dict[tuple, bool] = {}


def _responses(t: int, g: int, h: int):
    # copy the move from the near end first; every reply is still tried
    first = [s for s in (t, h - (g - t)) if 0 <= s < h]
    yield from dict.fromkeys(first)
    for s in range(h):
        if s not in first:
            yield s


def _gap_game(ga: tuple, gb: tuple, rounds: int) -> bool:
    if rounds == 0:
        return True
    if ga == gb:
        return True
    # the game is invariant under swapping the boards and under reversing both
    key = min((ga, gb), (gb, ga), (ga[::-1], gb[::-1]), (gb[::-1], ga[::-1])) + (rounds,)
    hit = _GAME_MEMO.get(key)
    if hit is not None:
        return hit
    result = True
    for left, right in ((ga, gb), (gb, ga)):
        for i, g in enumerate(left):
            h = right[i]
            for t in range(g):
                split = left[:i] + (t, g - t - 1) + left[i + 1:]
                if not any(_gap_game(split, right[:i] + (s, h - s - 1) + right[i + 1:], rounds - 1)
                           for s in _responses(t, g, h)):
                    result = False
                    break
            if not result:
                break
        if not result:
            break
    _GAME_MEMO[key] = result
    return result


# ---------------------------------------------------------------- normal forms

def _dense_parts(term: OrderTerm):
    if isinstance(term, (Finite, EtaT)):
        return [term]
    if not (isinstance(term, Sum) and all(isinstance(p, (Finite, EtaT)) for p in term.parts)):
        raise NotDenseFragment(f"{to_text(term)} is not built from Finite and Eta under Sum")
    parts = []
    for p in term.parts:
        if isinstance(p, Finite) and parts and isinstance(parts[-1], Finite):
            parts[-1] = Finite(parts[-1].k + p.k)
        else:
            parts.append(p)
    # two adjacent points between dense blocks survive; no a + eta + b form exists
    for p in parts[1:-1]:
        if isinstance(p, Finite) and p.k > 1:
            raise NotDenseFragment(f"{to_text(term)} has an interior block of {p.k} points")
    return parts


def normalize_dense(term: OrderTerm) -> OrderTerm:
    """Normal form ``Finite(a)`` or ``a + Eta + b`` of a sum of Finite and Eta parts."""
    parts = _dense_parts(term)
    etas = [i for i, p in enumerate(parts) if isinstance(p, EtaT)]
    if not etas:
        return Finite(sum(p.k for p in parts))
    lead = sum(p.k for p in parts[:etas[0]])
    trail = sum(p.k for p in parts[etas[-1] + 1:])
    return sum_of(Finite(lead) if lead else None, EtaT(), Finite(trail) if trail else None)


def is_dense_fragment(term: OrderTerm) -> bool:
    try:
        _dense_parts(term)
    except NotDenseFragment:
        return False
    return True


# ---------------------------------------------------------------- verdicts

@dataclass(frozen=True)
class IsoVerdict:
    kind: str  # "Iso", "NotIso" or "Unknown"
    depth: Optional[int] = None
    witness: Optional[str] = None

    @property
    def is_iso(self) -> bool:
        return self.kind == "Iso"

    def to_dict(self) -> dict:
        out = {"verdict": self.kind}
        if self.depth is not None:
            out["depth"] = self.depth
        if self.witness is not None:
            out["witness"] = self.witness
        return out


def distinguishing_depth(a: OrderTerm, b: OrderTerm, kmax: int = DEFAULT_MAX_DEPTH,
                         algebra: Optional[KTypeAlgebra] = None) -> Optional[int]:
    algebra = algebra or _DEFAULT
    for k in range(1, kmax + 1):
        if algebra.of_term(a, k) != algebra.of_term(b, k):
            return k
    return None


def decide_iso(a: OrderTerm, b: OrderTerm, kmax: int = DEFAULT_MAX_DEPTH,
               algebra: Optional[KTypeAlgebra] = None) -> IsoVerdict:
    """Sound isomorphism verdict: normal forms prove Iso, k-types prove NotIso."""
    from .identities import canonical

    if a == b:
        return IsoVerdict("Iso", witness="syntactic")
    sa, sb = size(a), size(b)
    if sa is not None and sb is not None:
        if sa == sb:
            return IsoVerdict("Iso", witness=f"finite bijection on {sa} points")
    ca, cb = canonical(a), canonical(b)
    if ca == cb:
        return IsoVerdict("Iso", witness=f"normal form {to_text(ca)}")
    k = distinguishing_depth(a, b, kmax, algebra)
    if k is not None:
        return IsoVerdict("NotIso", depth=k)
    return IsoVerdict("Unknown", depth=kmax)

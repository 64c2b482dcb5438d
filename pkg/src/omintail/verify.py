"""Verification suites behind ``omintail verify``.

Each suite returns a :class:`SuiteResult` whose checks carry counts and a
status.  Reports are plain data: sorted by suite then check id, with all
timings collected in one place so two runs with the same seed serialize
identically once the timing field is dropped.
"""

from __future__ import annotations

import functools
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional

from .catalog import CATALOG_TEXT, catalog
from .invariants import (
    SimpleModelSpec,
    SimpleTheorySpec,
    all_specs,
    apparent_iso,
    classify_filling,
    f2_invariant,
    random_spec_pairs,
    realize_model,
    realized_iso_surrogate,
    smooth_invariant,
)
from .iso import brute_force_ef, decide_iso, ef_equivalent
from .models import (
    ParamSet,
    TheoryId,
    arch_sim,
    arch_sim_oracle,
    build_model,
    canonical_tail_check,
    faithfulness_check,
    ladder,
    nonsimplicity_search,
    rationals_of_height,
)
from .order import Eta, Omega, TailView, cmp_points, enumerate_point, interval, size, succ, to_text
from .pointlogic import PointClass, classify_point, locate_phi_base
from .reductions import apply_f, make_T, recover_source, sample_basepoints, tail_iso_T


@dataclass
class Check:
    id: str
    status: str  # "pass", "fail" or "skip"
    counts: Dict[str, object] = field(default_factory=dict)
    detail: Optional[str] = None

    def to_json(self):
        out = {"id": self.id, "status": self.status, "counts": dict(sorted(self.counts.items()))}
        if self.detail is not None:
            out["detail"] = self.detail
        return out


@dataclass
class SuiteResult:
    name: str
    anchor: str
    seeds: List[int]
    checks: List[Check]
    elapsed: float = 0.0
    limit: Optional[float] = None  # seconds

    @property
    def status(self) -> str:
        if any(c.status == "fail" for c in self.checks):
            return "fail"
        if self.limit is not None and self.elapsed >= self.limit:
            return "fail"
        return "pass"

    def to_json(self):
        return {
            "suite": self.name,
            "anchor": self.anchor,
            "seeds": self.seeds,
            "status_checks": "fail" if any(c.status == "fail" for c in self.checks) else "pass",
            "time_limit_s": self.limit,
            "checks": [c.to_json() for c in sorted(self.checks, key=lambda c: c.id)],
        }


def _check(cid: str, ok: bool, **counts) -> Check:
    return Check(cid, "pass" if ok else "fail", counts)


SUITES: Dict[str, Callable[[int], SuiteResult]] = {}
ANCHORS: Dict[str, str] = {}
LIMITS: Dict[str, Optional[float]] = {}


def suite(name: str, anchor: str, limit: Optional[float] = None):
    def register(fn):
        @functools.wraps(fn)
        def run(seed: int) -> SuiteResult:
            start = time.perf_counter()
            checks, seeds = fn(seed)
            result = SuiteResult(name, anchor, seeds, checks, limit=limit)
            result.elapsed = time.perf_counter() - start
            return result

        SUITES[name] = run
        ANCHORS[name] = anchor
        LIMITS[name] = limit
        return run

    return register


# ---------------------------------------------------------------- order suites


@suite("f-lemma", "L1 and L2 are isomorphic exactly when f(L1) and f(L2) are", limit=60)
def _f_lemma(seed):
    agree = unknown = 0
    mismatches = []
    for a in catalog():
        for b in catalog():
            v1, v2 = decide_iso(a, b), decide_iso(apply_f(a), apply_f(b))
            unknown += (v1.kind == "Unknown") + (v2.kind == "Unknown")
            if v1.kind == v2.kind:
                agree += 1
            else:
                mismatches.append(f"{to_text(a)} vs {to_text(b)}")
    checks = [
        _check("verdicts-agree", not mismatches, pairs=agree + len(mismatches), mismatches=len(mismatches)),
        _check("no-unknown", unknown == 0, unknown=unknown),
    ]
    if mismatches:
        checks[0].detail = "; ".join(mismatches[:5])
    return checks, []


@suite("class-t", "on the class g(f(LO)), tail isomorphism coincides with isomorphism", limit=180)
def _class_t(seed):
    terms = catalog()
    certs = [make_T(L) for L in terms]
    bases = [sample_basepoints(c) for c in certs]
    recovered = {}
    path_mismatch = 0
    for i, c in enumerate(certs):
        for base in bases[i]:
            fast = recover_source(c, base)
            slow = recover_source(c, base, use_labels=False)
            path_mismatch += fast != slow
            recovered[i, base] = slow

    iff_fail = whole_fail = unknown = combos = 0
    for i, a in enumerate(certs):
        for j, b in enumerate(certs):
            source = decide_iso(a.source, b.source).is_iso
            whole = decide_iso(a.result, b.result)
            unknown += whole.kind == "Unknown"
            whole_fail += whole.is_iso != source
            for ba in bases[i]:
                for bb in bases[j]:
                    combos += 1
                    v = decide_iso(recovered[i, ba], recovered[j, bb])
                    unknown += v.kind == "Unknown"
                    iff_fail += v.is_iso != source
    # the public entry point, once per pair
    api_fail = sum(tail_iso_T(a, b).is_iso != decide_iso(a.source, b.source).is_iso
                   for a in certs for b in certs)
    return [
        _check("tail-iff-iso", iff_fail == 0, combinations=combos, failures=iff_fail),
        _check("whole-iff-iso", whole_fail == 0, pairs=len(certs) ** 2, failures=whole_fail),
        _check("label-free-path-agrees", path_mismatch == 0, recoveries=len(recovered), mismatches=path_mismatch),
        _check("tailiso-api", api_fail == 0, pairs=len(certs) ** 2, failures=api_fail),
        _check("no-unknown", unknown == 0, unknown=unknown),
    ], []


@suite("phi-claim", "above the first separator of a tail, the Phi points are exactly the separators")
def _phi_claim(seed):
    mismatches = other = scanned = base_errors = 0
    for L in catalog():
        cert = make_T(L)
        for base in sample_basepoints(cert):
            view = TailView(cert.result, base)
            b = locate_phi_base(view)
            # b is a separator at or above the base, in the base's own copy
            if not cert.is_separator(b) or cmp_points(cert.result, b, base) < 0 \
                    or cert.label(b).omega_index != cert.label(base).omega_index:
                base_errors += 1
            count = 0
            for p in view.points():
                if cmp_points(cert.result, p, b) < 0:
                    continue
                k = classify_point(view, p)
                other += k is PointClass.OTHER
                mismatches += (k is PointClass.PHI) != cert.is_separator(p)
                count += 1
                if count == 200:
                    break
            scanned += count
    return [
        _check("phi-matches-labels", mismatches == 0, points=scanned, mismatches=mismatches),
        _check("no-other", other == 0, other=other),
        _check("base-is-first-separator", base_errors == 0, errors=base_errors),
    ], []


@suite("ef-threshold", "k-round EF equivalence of finite orders: m = m' or min(m, m') >= 2^k - 1", limit=30)
def _ef_threshold(seed):
    from .order import Finite

    brute_rule = engine_rule = 0
    cases = 0
    for k in range(0, 5):
        for m in range(1, 21):
            for n in range(1, 21):
                cases += 1
                rule = m == n or min(m, n) >= 2 ** k - 1
                bf = brute_force_ef(m, n, k)
                ef = ef_equivalent(Finite(m), Finite(n), k)
                brute_rule += bf != rule
                engine_rule += ef != rule
    return [
        _check("brute-force-vs-rule", brute_rule == 0, cases=cases, disagreements=brute_rule),
        _check("engine-vs-rule", engine_rule == 0, cases=cases, disagreements=engine_rule),
    ], []


# ---------------------------------------------------------------- model suites


def _ladder_order_check(lad, limit: int = 20):
    """Representatives: order matches labels, pairwise inequivalent."""
    theory, index = lad.theory, lad.model.index
    reps = list(lad.classes(limit))
    empty = ParamSet(theory)
    bad = 0
    for i, (p, x) in enumerate(reps):
        for q, y in reps[i + 1:]:
            bad += (cmp_points(index, p, q) > 0) != (x.compare(y) > 0)
            bad += arch_sim(theory, empty, x, y)
    return bad, len(reps)


@suite("discrete-ladder", "the Z-chain model over L has Archimedean ladder L")
def _discrete_ladder(seed):
    rng = random.Random(seed)
    theory = TheoryId.DISCRETE
    iso_fail = order_bad = oracle_bad = rule_bad = surj_bad = pairs = 0
    for L in catalog():
        model = build_model(theory, L)
        lad = ladder(theory, ParamSet(theory), model)
        iso_fail += not decide_iso(lad.claimed_order, L).is_iso
        bad, _ = _ladder_order_check(lad)
        order_bad += bad
        for _ in range(100):
            a = model.random_element(rng)
            b = a.shift(rng.randint(-60, 60)) if rng.random() < 0.5 else model.random_element(rng)
            pairs += 1
            expected = a.chain == b.chain
            oracle_bad += arch_sim_oracle(theory, ParamSet(theory), a, b) != expected
            rule_bad += arch_sim(theory, ParamSet(theory), a, b) != expected
            surj_bad += not arch_sim(theory, ParamSet(theory), a, lad.representative(lad.class_of(a)))
    return [
        _check("ladder-iso-source", iso_fail == 0, orders=len(CATALOG_TEXT), failures=iso_fail),
        _check("ladder-order", order_bad == 0, violations=order_bad),
        _check("oracle-vs-chain-rule", oracle_bad == 0, pairs=pairs, disagreements=oracle_bad),
        _check("structural-vs-chain-rule", rule_bad == 0, pairs=pairs, disagreements=rule_bad),
        _check("every-element-classified", surj_bad == 0, elements=pairs, failures=surj_bad),
    ], [seed]


@suite("hahn-ladder", "the Hahn group over L has Archimedean ladder L, one class per leading index")
def _hahn_ladder(seed):
    rng = random.Random(seed)
    theory = TheoryId.ODAG
    model = build_model(theory, Eta)
    empty = ParamSet(theory)
    disagree = same = 0
    for _ in range(1000):
        u = model.random_element(rng)
        v = model.random_element(rng)
        if rng.random() < 0.5:
            # a rescaled copy of u with a small perturbation usually keeps u's lead
            v = u.scale(Fraction(rng.randint(1, 8), rng.randint(1, 8))) + v.scale(Fraction(1, 64))
            v = v if v.sign() > 0 else -v
        rule = u.lead == v.lead
        same += rule
        disagree += arch_sim_oracle(theory, empty, u, v) != rule
        disagree += arch_sim(theory, empty, u, v) != rule
    iso_fail = order_bad = cls_bad = 0
    for L in catalog():
        m = build_model(theory, L)
        lad = ladder(theory, empty, m)
        iso_fail += not decide_iso(lad.claimed_order, L).is_iso
        bad, _ = _ladder_order_check(lad)
        order_bad += bad
        for _ in range(20):
            x = m.random_element(rng)
            cls_bad += not arch_sim(theory, empty, x, lad.representative(lad.class_of(x)))
    return [
        _check("leading-index-vs-oracle", disagree == 0, pairs=1000, same_lead=same, disagreements=disagree),
        _check("ladder-iso-source", iso_fail == 0, orders=len(CATALOG_TEXT), failures=iso_fail),
        _check("ladder-order", order_bad == 0, violations=order_bad),
        _check("every-element-classified", cls_bad == 0, failures=cls_bad),
    ], [seed]


@suite("canonical-tail", "for 2-element A, B the relations ~_A and ~_B agree above the hull of A and B")
def _canonical_tail(seed):
    checks = []
    seeds = [seed, seed + 7]
    for name, L in (("eta", Eta), ("w", Omega)):
        for s in seeds:
            r = canonical_tail_check(L, 1000, s)
            checks.append(_check(f"{name}-seed-{s}", r.ok and r.checked > 0, trials=r.trials, checked=r.checked,
                                 skipped=r.skipped, equivalent=r.equivalent, disagreements=r.disagreements,
                                 rule_mismatches=r.rule_mismatches))
    return checks, seeds


@suite("nonsimplicity", "least-arity nonsimplicity witnesses: successor, doubling, and 2y-x in the affine case")
def _nonsimplicity(seed):
    expected = {TheoryId.DISCRETE: (1, "x+1"), TheoryId.ODAG: (1, "2x"), TheoryId.AFFINE: (2, "2y-x")}
    checks = []
    for theory, (n, text) in expected.items():
        cert = nonsimplicity_search(theory, 3, height=8)
        ok = cert.n == n and cert.witness_fn.describe() == text
        checks.append(_check(f"{theory.value}-witness", ok, n=cert.n, witness=cert.witness_fn.describe()))
    cert = nonsimplicity_search(TheoryId.AFFINE, 3, height=8)
    pool = len(rationals_of_height(8))
    checks.append(_check("AffineOdag-no-arity-1", 1 in cert.ruled_out and cert.n == 2,
                         rationals_examined=pool, affine_candidates=cert.ruled_out.get(1, 0)))
    return checks, []


@suite("faithfulness", "closures of realizations open no new Archimedean classes")
def _faithfulness(seed):
    checks = []
    for theory in (TheoryId.ODAG, TheoryId.DISCRETE):
        r = faithfulness_check(theory, 500, seed)
        checks.append(_check(f"{theory.value}", r.ok, samples=r.checked, excluded=r.excluded,
                             violations=r.violations, mode=r.mode))
    return checks, [seed]


# ---------------------------------------------------------------- invariants


@suite("invariants", "models are apparently isomorphic exactly when isomorphic; six filling types")
def _invariants(seed):
    theory = SimpleTheorySpec.finitely_many(["c1", "c2"])
    specs = all_specs(theory)
    round_trip = sum(
        [int(classify_filling(theory, realize_model(theory, s), c)) for c in theory.cuts]
        == [int(s.as_dict().get(c, 0)) for c in theory.cuts]
        for s in specs
    )
    vectors = {smooth_invariant(theory, s) for s in specs}

    pairs = random_spec_pairs(theory, 50, seed)
    iff_bad = sum(apparent_iso(theory, a, b) != realized_iso_surrogate(theory, a, b) for a, b in pairs)
    equal_pairs = sum(apparent_iso(theory, a, b) for a, b in pairs)

    rng = random.Random(seed)
    rational = SimpleTheorySpec.rational_indexed()
    perm_bad = 0
    for _ in range(20):
        listing = [(Fraction(rng.randint(1, 20), rng.randint(1, 20)), rng.randint(1, 5)) for _ in range(6)]
        listing = list({code: k for code, k in listing}.items())
        shuffled = listing[:] + [rng.choice(listing)]
        rng.shuffle(shuffled)
        perm_bad += f2_invariant(rational, SimpleModelSpec.of(listing)) != \
            f2_invariant(rational, SimpleModelSpec.of(shuffled))

    dense_bad = dense_pairs = 0
    for s in specs:
        model = realize_model(theory, s)
        for c, lo, hi in model.segments:
            if hi == lo:
                continue
            pts = []
            for part in range(lo, hi):
                sub = model.term.parts[part]
                for i in range(min(size(sub) or 6, 6)):
                    pts.append((part, enumerate_point(sub, i)))
            for i, p in enumerate(pts):
                for q in pts[i + 1:]:
                    lo_p, hi_p = sorted((p, q), key=functools.cmp_to_key(lambda x, y: cmp_points(model.term, x, y)))
                    dense_pairs += 1
                    dense_bad += succ(model.term, lo_p) == hi_p or interval(model.term, lo_p, hi_p) is None
    return [
        _check("round-trip", round_trip == len(specs), specs=len(specs), reproduced=round_trip),
        _check("distinct-vectors", len(vectors) == 36, vectors=len(vectors)),
        _check("apparent-iff-ef", iff_bad == 0, pairs=len(pairs), apparently_iso=equal_pairs, failures=iff_bad),
        _check("f2-order-insensitive", perm_bad == 0, listings=20, failures=perm_bad),
        _check("filling-density", dense_bad == 0, pairs=dense_pairs, failures=dense_bad),
    ], [seed]


# ---------------------------------------------------------------- runner


def run_suites(names: List[str], seed: int = 0) -> List[SuiteResult]:
    unknown = [n for n in names if n not in SUITES]
    if unknown:
        raise KeyError(f"unknown suite(s): {', '.join(unknown)}")
    return [SUITES[n](seed) for n in sorted(names)]


def report(results: List[SuiteResult], seed: int) -> dict:
    return {
        "schema": "omintail.verify/1",
        "seed": seed,
        "status": "fail" if any(r.status == "fail" for r in results) else "pass",
        "suites": [r.to_json() | {"status": r.status} for r in results],
        "timing": {r.name: round(r.elapsed, 3) for r in results},
    }

"""Specialization of the Kummer layer at rational points and the discriminant census."""

from __future__ import annotations

import itertools
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from heistorsor import kernels
from heistorsor.arith.integers import (
    IncompleteFactorization,
    factor_int,
    rational_nth_root,
    squarefree_part_rational,
)
from heistorsor.jacobian.mumford import SupportCollision
from heistorsor.specialization.bqf import (
    DEFAULT_ENUMERATION_BOUND,
    ClassGroupBQF,
    DiscriminantTooLarge,
    class_group_bqf,
    ideal_form,
    n_rank,
    witness_rank,
)
from heistorsor.specialization.quadratic import (
    QuadElt,
    QuadField,
    ValuationProfile,
    is_local_nth_power,
    is_nth_power,
    valuation_profile,
)

UNKNOWN = None
CLASS_NUMBER_BOUND = 10**10


@dataclass(frozen=True)
class SSet:
    primes: frozenset[int]
    archimedean: bool = True

    @classmethod
    def of(cls, primes, archimedean: bool = True) -> SSet:
        return cls(frozenset(int(p) for p in primes), archimedean)

    def contains_divisors_of(self, n: int) -> bool:
        return all(p in self.primes for p in factor_int(n).primes())

    def to_json(self) -> dict:
        return {"primes": [str(p) for p in sorted(self.primes)], "archimedean": self.archimedean}


# -- points ---------------------------------------------------------------------------------


def enumerate_points(f, H: int):
    """x0 = a/b in lowest terms with max(|a|, b) <= H, f(x0) nonzero and not a rational square.

    Ordered by height, then numerator, then denominator.
    """
    if H < 1:
        raise ValueError("H >= 1")
    for h in range(0, H + 1):
        for a in range(-h, h + 1):
            for b in range(1, h + 1):
                if max(abs(a), b) != h or math.gcd(a, b) != 1:
                    continue
                x0 = Fraction(a, b)
                v = f(x0)
                if v == 0 or rational_nth_root(v, 2) is not None:
                    continue
                yield x0


# -- records -------------------------------------------------------------------------------


@dataclass
class SpecializationRecord:
    x0: Fraction
    fx0: Fraction
    field: QuadField | None
    alphas: list[QuadElt] = field(default_factory=list)
    profile: ValuationProfile | None = None
    unramified_outside_S: bool | None = UNKNOWN
    split_at_S: bool | None = UNKNOWN
    connected: bool | None = UNKNOWN
    class_group: dict | None = None
    flags: list[str] = field(default_factory=list)
    split_detail: dict = field(default_factory=dict)

    @property
    def all_true(self) -> bool:
        return self.unramified_outside_S is True and self.split_at_S is True and self.connected is True

    def to_json(self) -> dict:
        return {
            "x0": str(self.x0),
            "f_x0": str(self.fx0),
            "field": self.field.to_json() if self.field else None,
            "alphas": [a.to_json() for a in self.alphas],
            "valuation_profile": self.profile.to_json() if self.profile and self.profile.complete else None,
            "unramified_outside_S": self.unramified_outside_S,
            "split_at_S": self.split_at_S,
            "connected": self.connected,
            "class_group": self.class_group,
            "flags": list(self.flags),
        }


def _y0(L: QuadField, s: Fraction) -> QuadElt:
    return QuadElt(0, s, L.d)


def specialize(bundle: dict, x0, S: SSet | None = None, class_group_bound: int = DEFAULT_ENUMERATION_BOUND, **effort) -> SpecializationRecord:
    """Evaluate every Kummer function at (x0, sqrt f(x0)) and run the downstream tests."""
    cert = bundle["certificate"]
    n = cert.n
    kummer = bundle["kummer_L"] + bundle["kummer_Lp"]
    model = kummer[0].model
    x0 = Fraction(x0)
    fx0 = model.even.f(x0)
    if fx0 == 0:
        raise ValueError("x0 is a Weierstrass point")
    S = S if S is not None else SSet.of(factor_int(n).primes())
    try:
        d, s = squarefree_part_rational(fx0, **effort)
    except IncompleteFactorization:
        return SpecializationRecord(x0, fx0, None, flags=["incomplete-factorization"])
    if d == 1:
        raise ValueError("f(x0) is a square; the point is rational")
    L = QuadField(d)
    rec = SpecializationRecord(x0, fx0, L)
    y0 = _y0(L, s)
    try:
        rec.alphas = [_evaluate(h, x0, y0) for h in kummer]
    except SupportCollision:
        rec.flags.append("support-collision")
        return rec
    if math.gcd(n, 6) > 1 and d == -3:
        # extra roots of unity break the unit-group argument
        rec.flags.append("excluded-extra-units")
    rec.profile = valuation_profile(rec.alphas, L, sorted(S.primes), **effort)
    if not rec.profile.complete:
        rec.flags.append("incomplete-factorization")
        return rec
    unramified_and_split_tests(rec, S, n)
    rec.connected = connectedness_test(rec, n)
    if L.imaginary and rec.all_true and "excluded-extra-units" not in rec.flags:
        rec.class_group = class_group_check(rec, n, class_group_bound)
    return rec


def _evaluate(h, x0: Fraction, y0: QuadElt) -> QuadElt:
    try:
        return h.at_even_point(x0, y0)
    except SupportCollision:
        return h.at_even_point_factored(x0, y0)


def unramified_and_split_tests(rec: SpecializationRecord, S: SSet, n: int) -> tuple[bool | None, bool | None]:
    prof = rec.profile
    if prof is None or not prof.complete:
        rec.unramified_outside_S = rec.split_at_S = UNKNOWN
        return UNKNOWN, UNKNOWN
    unram = True
    for P in prof.primes():
        if P.q in S.primes:
            continue
        if any(v % n for v in prof.values[P]):
            unram = False
            rec.split_detail.setdefault("ramified_at", []).append(P.label())
    split = True
    for P in prof.primes():
        if P.q not in S.primes:
            continue
        root = prof.roots.get(P.q, (None, 0))[0]
        for i, al in enumerate(rec.alphas):
            if not is_local_nth_power(al, prof.field, P, n, prof.values[P][i], root):
                split = False
                rec.split_detail.setdefault("not_split_at", []).append(P.label())
                break
    # archimedean places: n odd makes x -> x^n bijective on R; complex places are split
    if S.archimedean and n % 2 == 0 and not prof.field.imaginary and split:
        split = UNKNOWN
    rec.unramified_outside_S, rec.split_at_S = unram, split
    return unram, split


def connectedness_test(rec: SpecializationRecord, n: int) -> bool | None:
    """True iff no nonzero combination prod alpha_i^{e_i} (e mod n) is an n-th power in L."""
    prof = rec.profile
    if prof is None or not prof.complete or not rec.alphas:
        return UNKNOWN
    k = len(rec.alphas)
    for e in itertools.product(range(n), repeat=k):
        if not any(e):
            continue
        beta = QuadElt(1, 0, rec.field.d)
        for ei, al in zip(e, rec.alphas):
            if ei:
                beta = beta * al**ei
        vals = [sum(ei * vs[i] for i, ei in enumerate(e)) for vs in prof.values.values()]
        if is_nth_power(beta, n, vals):
            return False
    return True


def class_group_check(rec: SpecializationRecord, n: int, bound: int = DEFAULT_ENUMERATION_BOUND) -> dict:
    """BQF side of the cross-check: ideal classes a_i with a_i^n = (alpha_i), plus exact n-rank when |disc| is small."""
    L, prof = rec.field, rec.profile
    D = L.disc
    roots = {q: r for q, (r, _) in prof.roots.items()}
    forms = []
    for i in range(len(rec.alphas)):
        exps = {}
        for P, vs in prof.values.items():
            if vs[i] % n:
                raise ArithmeticError("class-group check needs valuations divisible by n")
            exps[P] = vs[i] // n
        forms.append(ideal_form(D, exps, roots))
    wit = witness_rank(D, forms, n)
    out = {"disc": str(D), "witness": wit.to_json()}
    try:
        cg: ClassGroupBQF = class_group_bqf(D, bound)
    except DiscriminantTooLarge:
        out["method"] = "witness"
        out["rank_n"] = None
        out["rank_n_lower"] = str(wit.rank_lower_bound)
        if -D <= CLASS_NUMBER_BOUND:
            # form count alone, no Kummer input: rank >= k forces n^k | h
            h = kernels.class_number(D)
            out["h"] = str(h)
            out["h_divisible"] = h % n ** len(forms) == 0
        return out
    r = n_rank(cg, n)
    out["method"] = "enumeration"
    out.update(cg.to_json())
    out["rank_n"] = str(r)
    out["rank_n_lower"] = str(wit.rank_lower_bound)
    return out


def class_group_rank(rec: SpecializationRecord) -> int | None:
    """Exact n-rank if enumerated, else the certified lower bound."""
    cg = rec.class_group
    if cg is None:
        return None
    if cg.get("rank_n") is not None:
        return int(cg["rank_n"])
    return int(cg["rank_n_lower"])


# -- batch runs ----------------------------------------------------------------------------


_WORKER_BUNDLE = None


def _worker_init(n: int, lam: str):
    global _WORKER_BUNDLE
    from heistorsor.certifier import certify, family_spec, heis_data
    from heistorsor.jacobian.curve import FamilyParams

    _WORKER_BUNDLE = heis_data(certify(family_spec(FamilyParams(n, Fraction(lam)))))


def _worker_run(args):
    xs, S, bound, effort = args
    return [specialize(_WORKER_BUNDLE, x, S, bound, **effort).to_json() for x in xs]


def run_specialization(
    bundle: dict,
    H: int,
    S: SSet,
    workers: int = 1,
    class_group_bound: int = DEFAULT_ENUMERATION_BOUND,
    chunk: int = 500,
    effort: dict | None = None,
) -> list[dict]:
    """All records for points of height <= H, as JSON dicts in enumeration order."""
    effort = effort or {}
    model = bundle["kummer_L"][0].model
    xs = list(enumerate_points(model.even.f, H))
    if workers <= 1:
        return [specialize(bundle, x, S, class_group_bound, **effort).to_json() for x in xs]
    fam = bundle["certificate"].spec.family
    chunks = [(xs[i : i + chunk], S, class_group_bound, effort) for i in range(0, len(xs), chunk)]
    out: list[dict] = []
    with ProcessPoolExecutor(workers, initializer=_worker_init, initargs=(fam.n, str(fam.lam))) as ex:
        for part in ex.map(_worker_run, chunks):
            out += part
    return out


def default_workers() -> int:
    return max(1, min(8, os.cpu_count() or 1))


# -- census --------------------------------------------------------------------------------


@dataclass
class CensusReport:
    grid: list[tuple[int, int]]
    fitted_exponent: float | None
    benchmark_exponent: Fraction
    fields: list[dict]

    def to_json(self) -> dict:
        return {
            "grid": [{"N": str(N), "count": str(c)} for N, c in self.grid],
            "fitted_exponent": None if self.fitted_exponent is None else f"{self.fitted_exponent:.6f}",
            "benchmark_exponent": str(self.benchmark_exponent),
            "fields": self.fields,
        }


def census_from_records(records: list[dict], grid: list[int], genus: int) -> CensusReport:
    """Deduplicate passing records by d, count by |disc| <= N, fit log count against log N."""
    best: dict[int, dict] = {}
    for r in records:
        if not (r["unramified_outside_S"] is True and r["split_at_S"] is True and r["connected"] is True):
            continue
        if r["field"] is None or "excluded-extra-units" in r["flags"]:
            continue
        d = int(r["field"]["d"])
        if d in best:
            continue
        cg = r.get("class_group") or {}
        rank = cg.get("rank_n") if cg.get("rank_n") is not None else cg.get("rank_n_lower")
        best[d] = {"d": str(d), "delta": r["field"]["disc"], "rank_n": rank, "x0": r["x0"]}
    fields = sorted(best.values(), key=lambda e: (abs(int(e["delta"])), int(e["d"])))
    grid = sorted(set(grid))
    counts = [(N, sum(1 for e in fields if abs(int(e["delta"])) <= N)) for N in grid]
    pts = [(math.log(N), math.log(c)) for N, c in counts if c > 0 and N > 1]
    fitted = None
    if len(pts) >= 2 and len({x for x, _ in pts}) >= 2:
        xs, ys = np.array([p[0] for p in pts]), np.array([p[1] for p in pts])
        fitted = float(np.polyfit(xs, ys, 1)[0])
    return CensusReport(counts, fitted, Fraction(1, 4 * genus + 2), fields)


def census(bundle: dict, H: int, S: SSet, grid: list[int], workers: int = 1, class_group_bound: int = DEFAULT_ENUMERATION_BOUND) -> CensusReport:
    records = run_specialization(bundle, H, S, workers, class_group_bound)
    return census_from_records(records, grid, bundle["kummer_L"][0].model.genus)

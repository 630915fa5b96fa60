"""Command-line front end: every subcommand writes a replayable JSON artifact.

Exit codes: 0 success, 2 validation error, 3 refusal or negative verdict,
4 effort budget exhausted.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from fractions import Fraction

from heistorsor import kernels

EXIT_OK, EXIT_INVALID, EXIT_NEGATIVE, EXIT_BUDGET = 0, 2, 3, 4
BUDGET_ENV = "HEISTORSOR_BUDGET"
DEFAULT_EFFORT = {
    "pairing": 200,
    "trial": 10**5,
    "rho": 200_000,
    "prime_bound": 10_000,
    "class_group": 10**7,
}


class ValidationError(ValueError):
    pass


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def effort_from_env(env: dict | None = None) -> dict:
    """Effort bounds, overridable by HEISTORSOR_BUDGET='pairing=400,rho=10**6,...'."""
    env = os.environ if env is None else env
    out = dict(DEFAULT_EFFORT)
    raw = env.get(BUDGET_ENV, "").strip()
    if not raw:
        return out
    for item in raw.split(","):
        if not item.strip():
            continue
        key, _, val = item.partition("=")
        key = key.strip()
        if key not in out:
            raise ValidationError(f"{BUDGET_ENV}: unknown key {key!r}")
        try:
            out[key] = int(val)
        except ValueError:
            raise ValidationError(f"{BUDGET_ENV}: {key} needs an integer") from None
        if out[key] <= 0:
            raise ValidationError(f"{BUDGET_ENV}: {key} must be positive")
    return out


# -- validation ----------------------------------------------------------------------


def _odd_n(n: int) -> int:
    if n < 3 or n % 2 == 0:
        raise ValidationError("n must be an odd integer > 1")
    return n


def _lam(text: str) -> Fraction:
    try:
        lam = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise ValidationError(f"lambda {text!r} is not a rational number") from None
    if lam == 0 or lam * lam == 1:
        raise ValidationError("lambda must satisfy lambda != 0 and lambda^2 != 1")
    return lam


def _int_list(text: str | None) -> list[int]:
    if not text:
        return []
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise ValidationError(f"expected comma-separated integers, got {text!r}") from None


def _family(cfg: dict):
    from heistorsor.jacobian.curve import FamilyParams

    return FamilyParams(_odd_n(int(cfg["n"])), _lam(cfg["lambda"]))


def _bundle(cfg: dict):
    from heistorsor.certifier import certify, family_spec, heis_data

    eff = cfg["effort"]
    cert = certify(family_spec(_family(cfg)), seed=int(cfg["seed"]), prime_bound=int(eff["prime_bound"]), budget=int(eff["pairing"]))
    return heis_data(cert)


def _factor_effort(cfg: dict) -> dict:
    eff = cfg["effort"]
    return {"trial_bound": int(eff["trial"]), "rho_iterations": int(eff["rho"])}


# -- subcommands -----------------------------------------------------------------------
# each run_* takes a JSON-ready config and returns (artifact, exit code)


def run_group(cfg: dict):
    from heistorsor.heisenberg import HeisGroup, check_structure, gsp_order

    n, d = int(cfg["n"]), int(cfg["d"])
    if n < 2 or d < 1:
        raise ValidationError("need n > 1 and d >= 1")
    G = HeisGroup(n, d)
    res = check_structure(G, exhaustive=cfg["exhaustive"], samples=int(cfg["samples"]), seed=int(cfg["seed"]))
    if not cfg["check_axioms"]:
        res["checks"] = {k: v for k, v in res["checks"].items() if k not in ("associative", "identity", "inverse")}
    out = {
        "order": str(res["order"]),
        "counted_order": None if res["counted_order"] is None else str(res["counted_order"]),
        "exponent": str(res["exponent"]),
        "center_order": str(res["center_order"]),
        "checks": res["checks"],
        "ok": res["ok"],
    }
    if d == 1 or n < 50:
        out["gsp_order"] = str(gsp_order(d, n))
    return out, EXIT_OK if res["ok"] else EXIT_NEGATIVE


def run_curve(cfg: dict):
    from heistorsor.jacobian.curve import family_curve, good_primes, seed_identity_holds
    from heistorsor.jacobian.mumford import order_from_multiple
    from heistorsor.jacobian.pointcount import MAX_GENUS, jacobian_order_mod_p, l_polynomial
    from heistorsor.jacobian.torsion import torsion_search

    fam = _family(cfg)
    C = family_curve(fam)
    res = torsion_search(C, fam.n, prime_bound=int(cfg["effort"]["prime_bound"]))
    M = res.model
    primes = _int_list(cfg.get("primes")) or good_primes(M, fam.n, 3, congruent_one=False, bound=int(cfg["effort"]["prime_bound"]))
    per_prime = []
    for p in primes:
        Mp = M.reduce_mod_p(p, fam.n)
        entry = {"p": str(p)}
        if Mp.odd.genus <= MAX_GENUS:
            Lp = l_polynomial(Mp.odd)
            J = jacobian_order_mod_p(Mp.odd)
            entry["l_polynomial"] = [str(a) for a in Lp]
            entry["jacobian_order"] = str(J)
            entry["class_orders"] = [str(order_from_multiple(c.divisor.reduce_mod_p(Mp.odd), J)) for c in res.classes]
        per_prime.append(entry)
    out = {
        "f": [str(c) for c in C.f.c],
        "genus": str(C.genus),
        "odd_model": [str(c) for c in M.odd.f.c],
        "p0": [str(M.x_w), "0"],
        "seed_identity": seed_identity_holds(fam),
        "classes": [{"label": c.label, **c.divisor.to_json()} for c in res.classes],
        "independence_prime": str(res.independence_prime),
        "primes": per_prime,
        "log": res.log,
    }
    return out, EXIT_OK


def run_pairing(cfg: dict):
    import random

    from heistorsor.pairing import pairing_profile, toy_full_torsion_curve

    seed = int(cfg["seed"])
    if cfg.get("toy"):
        p = int(cfg["toy"])
        C, basis = toy_full_torsion_curve(p, 3)
        prof = pairing_profile(basis, 3, random.Random(seed))
        out = {
            "curve": {"p": str(p), "f": [str(c) for c in C.f.c]},
            "basis": [D.to_json() for D in basis],
            "logs": [[str(x) for x in row] for row in prof.logs],
            "nondegenerate": any(x for row in prof.logs for x in row),
        }
        return out, EXIT_OK
    from heistorsor.jacobian.curve import family_curve, good_primes
    from heistorsor.jacobian.torsion import torsion_search

    fam = _family(cfg)
    res = torsion_search(family_curve(fam), fam.n)
    M = res.model
    primes = _int_list(cfg.get("primes")) or good_primes(M, fam.n, 3, congruent_one=True, bound=int(cfg["effort"]["prime_bound"]))
    rows = []
    for p in primes:
        if p % fam.n != 1:
            raise ValidationError(f"p={p} is not 1 mod {fam.n}")
        Mp = M.reduce_mod_p(p, fam.n)
        cls = [c.divisor.reduce_mod_p(Mp.odd) for c in res.classes]
        prof = pairing_profile(cls, fam.n, random.Random(seed * 1_000_003 + p))
        rows.append({"p": str(p), "logs": [[str(x) for x in r] for r in prof.logs], "independent": prof.independent})
    trivial = all(x == "0" for r in rows for row in r["logs"] for x in row)
    return {"classes": [c.label for c in res.classes], "primes": rows, "all_trivial": trivial}, EXIT_OK


def run_certify(cfg: dict):
    from heistorsor.certifier import REFUSED, TorsorSpec, certify, family_spec
    from heistorsor.pairing import toy_full_torsion_curve

    seed = int(cfg["seed"])
    eff = cfg["effort"]
    if cfg.get("abstract_toy"):
        p = int(cfg["abstract_toy"])
        _, basis = toy_full_torsion_curve(p, 3)
        spec = TorsorSpec(None, 3, [basis[0]], [basis[1]], ["P1", "P2"])
        cert = certify(spec, seed=seed, budget=int(eff["pairing"]))
    else:
        if int(cfg.get("d", "1")) != 1:
            raise ValidationError("the lambda family supplies d = 1 only")
        spec = family_spec(_family(cfg), dependent=cfg.get("dependent", False))
        primes = _int_list(cfg.get("primes")) or None
        bad = [p for p in primes or [] if p % spec.n != 1]
        if bad:
            raise ValidationError(f"primes {bad} are not 1 mod {spec.n}")
        cert = certify(spec, primes=primes, seed=seed, kummer=not cfg.get("no_kummer", False), prime_bound=int(eff["prime_bound"]), budget=int(eff["pairing"]))
    out = cert.to_json()
    return out, EXIT_NEGATIVE if cert.verdict == REFUSED else EXIT_OK


def _spec_S(cfg: dict):
    from heistorsor.specialization import SSet

    S = SSet.of(_int_list(cfg["S"]))
    if not S.contains_divisors_of(int(cfg["n"])):
        raise ValidationError("S must contain every prime dividing n")
    return S


def run_specialize(cfg: dict):
    from heistorsor.specialization.pipeline import run_specialization

    S = _spec_S(cfg)
    H = int(cfg["height"])
    if H < 1:
        raise ValidationError("height must be >= 1")
    bundle = _bundle(cfg)
    eff = cfg["effort"]
    records = run_specialization(bundle, H, S, int(cfg.get("workers", "1")), int(eff["class_group"]), effort=_factor_effort(cfg))
    disagree = [
        r["x0"]
        for r in records
        if r["class_group"] is not None and int(r["class_group"].get("rank_n") or r["class_group"]["rank_n_lower"]) < 2
    ]
    summary = {
        "points": str(len(records)),
        "all_true": str(sum(1 for r in records if r["unramified_outside_S"] and r["split_at_S"] and r["connected"])),
        "imaginary_all_true": str(sum(1 for r in records if r["class_group"] is not None)),
        "cross_check_disagreements": disagree,
    }
    return {"summary": summary, "records": records}, EXIT_NEGATIVE if disagree else EXIT_OK


def run_census(cfg: dict):
    from heistorsor.specialization.pipeline import census_from_records, run_specialization

    S = _spec_S(cfg)
    grid = _int_list(cfg["grid"])
    if not grid:
        raise ValidationError("empty N grid")
    bundle = _bundle(cfg)
    eff = cfg["effort"]
    records = run_specialization(bundle, int(cfg["height"]), S, int(cfg.get("workers", "1")), int(eff["class_group"]), effort=_factor_effort(cfg))
    rep = census_from_records(records, grid, bundle["kummer_L"][0].model.genus)
    out = rep.to_json()
    code = EXIT_OK if rep.grid and rep.grid[-1][1] >= 1 else EXIT_NEGATIVE
    return out, code


RUNNERS = {
    "group": run_group,
    "curve": run_curve,
    "pairing": run_pairing,
    "certify": run_certify,
    "specialize": run_specialize,
    "census": run_census,
}


# -- artifacts ---------------------------------------------------------------------------


def build_artifact(kind: str, cfg: dict) -> tuple[str, int]:
    result, code = RUNNERS[kind](cfg)
    if kind == "specialize":
        header = {"kind": kind, "config": cfg, "seed": cfg["seed"], "summary": result["summary"]}
        lines = [json.dumps(header, sort_keys=True)] + [json.dumps(r, sort_keys=True) for r in result["records"]]
        return "\n".join(lines) + "\n", code
    if kind == "certify":
        art = {"kind": kind, "config": cfg, "seed": cfg["seed"], **result}
    else:
        art = {"kind": kind, "config": cfg, "seed": cfg["seed"], "result": result}
    return dumps(art), code


def load_artifact(text: str) -> tuple[str, dict]:
    try:
        first = json.loads(text)
    except json.JSONDecodeError:
        # JSONL: the header line carries kind and config
        try:
            first = json.loads(text.splitlines()[0])
        except (json.JSONDecodeError, IndexError):
            raise ValidationError("malformed artifact") from None
    if not isinstance(first, dict) or "kind" not in first or "config" not in first:
        raise ValidationError("artifact lacks kind/config")
    if first["kind"] not in RUNNERS:
        raise ValidationError(f"unknown artifact kind {first['kind']!r}")
    return first["kind"], first["config"]


def _discrepancies(kind: str, old: str, new: str) -> list[str]:
    out = []
    if kind == "specialize":
        a, b = old.splitlines(), new.splitlines()
        if len(a) != len(b):
            out.append(f"record count {len(a) - 1} != {len(b) - 1}")
        for la, lb in zip(a[1:], b[1:]):
            if la != lb:
                ra, rb = json.loads(la), json.loads(lb)
                keys = sorted(k for k in set(ra) | set(rb) if ra.get(k) != rb.get(k))
                out.append(f"x0={rb.get('x0')}: {', '.join(keys)}")
        if a and b and a[0] != b[0]:
            out.append("header")
        return out
    try:
        A, B = json.loads(old), json.loads(new)
    except json.JSONDecodeError:
        return ["unparseable artifact"]
    if kind == "certify":
        for pa, pb in zip(A.get("primes", []), B.get("primes", [])):
            if pa != pb:
                out.append(f"pairing check at p={pb['p']}: recorded {pa.get('product_log')} recomputed {pb['product_log']}")
    for k in sorted(set(A) | set(B)):
        if A.get(k) != B.get(k) and not (kind == "certify" and k == "primes"):
            out.append(f"field {k}")
    return out


def replay(path: str) -> tuple[bool, list[str], int]:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    kind, cfg = load_artifact(text)
    new, code = build_artifact(kind, cfg)
    if new == text:
        return True, [], code
    diffs = _discrepancies(kind, text, new) or ["byte mismatch"]
    return False, diffs, code


# -- argument parsing ----------------------------------------------------------------


HELP = {
    "group": "Heisenberg group Heis_{2d+1}(Z/n): the central extension 0 -> Z/n -> Heis -> (Z/n)^{2d} -> 0, "
    "center, exponent, the (Z/n)^x twist and the CRT splitting.",
    "curve": "Family y^2 = x^{2n} - (1 + lambda^2) x^n + lambda^2: two independent rational classes of order n "
    "in Pic^0, their orders modulo good primes and |J(F_p)| from the zeta function.",
    "pairing": "Weil pairing e_n on J[n] over F_p: alternating, bilinear, Galois compatible, nondegenerate; "
    "on the family it is trivial since it takes values in mu_n(Q) = {1}.",
    "certify": "Torsor criterion: with a rational Weierstrass point P0 and n-torsion classes L_i, L_i', a "
    "Heis_{2d+1}(mu_n)-torsor splitting over P0 exists iff prod e_n(L_i, L_i') = 1, and it is geometrically "
    "connected iff the classes span (Z/n)^{2d}. Emits the Kummer functions of the abelian layer.",
    "specialize": "Specialization: evaluating the torsor at points over quadratic fields L gives torsors "
    "unramified outside S and split at S; for imaginary L with n = 3 this forces 3-rank Cl(L) >= 2, "
    "which is cross-checked with binary quadratic forms.",
    "census": "Counting theorem: the number of such quadratic fields with |disc| <= N grows at least like "
    "c N^{1/(4g+2)} / log N; reports counts and a fitted exponent next to 1/(4g+2).",
    "replay": "Re-execute an artifact from its embedded config and seed and compare byte for byte.",
}


def _common(p: argparse.ArgumentParser, family: bool = True):
    p.add_argument("--seed", type=int, default=0, help="seed for randomized steps (default 0)")
    p.add_argument("--out", default=None, help="artifact path (default: stdout)")
    if family:
        p.add_argument("--n", type=int, required=True, help="odd torsion order n > 1")
        p.add_argument("--lambda", dest="lam", default="2", help="family parameter, a rational a/b (default 2)")


def make_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="heistorsor",
        description="Heisenberg torsors over hyperelliptic curves: certificates, Kummer layers, specializations. "
        f"Effort bounds can be overridden with {BUDGET_ENV}='pairing=N,trial=N,rho=N,prime_bound=N,class_group=N'.",
    )
    sub = ap.add_subparsers(dest="cmd", required=True)

    g = sub.add_parser("group", help=HELP["group"], description=HELP["group"])
    _common(g, family=False)
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--d", type=int, default=1)
    g.add_argument("--check-axioms", action="store_true", help="include the group-axiom checks")
    g.add_argument("--exhaustive", action="store_true", help="enumerate the whole group")
    g.add_argument("--samples", type=int, default=10_000)

    c = sub.add_parser("curve", help=HELP["curve"], description=HELP["curve"])
    _common(c)
    c.add_argument("--primes", default=None, help="comma-separated primes (default: first 3 good primes)")

    pr = sub.add_parser("pairing", help=HELP["pairing"], description=HELP["pairing"])
    pr.add_argument("--seed", type=int, default=0)
    pr.add_argument("--out", default=None)
    pr.add_argument("--n", type=int, default=None)
    pr.add_argument("--lambda", dest="lam", default="2")
    pr.add_argument("--primes", default=None)
    pr.add_argument("--toy", type=int, default=None, help="pair a basis of E[3] on a genus-1 toy over F_p")

    ce = sub.add_parser("certify", help=HELP["certify"], description=HELP["certify"])
    ce.add_argument("--seed", type=int, default=0)
    ce.add_argument("--out", default=None)
    ce.add_argument("--n", type=int, default=None)
    ce.add_argument("--lambda", dest="lam", default="2")
    ce.add_argument("--d", type=int, default=1)
    ce.add_argument("--primes", default=None, help="good primes p = 1 mod n (default: the first three)")
    ce.add_argument("--dependent", action="store_true", help="control: use L' = L")
    ce.add_argument("--abstract-toy", type=int, default=None, metavar="P", help="control: symplectic pair on a genus-1 toy over F_P")
    ce.add_argument("--no-kummer", action="store_true")

    for name in ("specialize", "census"):
        s = sub.add_parser(name, help=HELP[name], description=HELP[name])
        _common(s)
        s.add_argument("--height", type=int, required=True)
        s.add_argument("--S", dest="S", default=None, help="comma-separated primes of S (default: primes of n)")
        s.add_argument("--workers", type=int, default=1)
        if name == "census":
            s.add_argument("--grid", required=True, help="comma-separated N values")
            s.add_argument("--report", default=None, help="alias of --out")

    r = sub.add_parser("replay", help=HELP["replay"], description=HELP["replay"])
    r.add_argument("path")
    return ap


def config_from_args(args, effort: dict) -> dict:
    cmd = args.cmd
    cfg: dict = {"command": cmd, "seed": str(args.seed), "effort": {k: str(v) for k, v in effort.items()}}
    if cmd == "group":
        cfg.update(n=str(args.n), d=str(args.d), check_axioms=args.check_axioms, exhaustive=args.exhaustive, samples=str(args.samples))
        return cfg
    if cmd == "pairing" and args.toy is not None:
        cfg["toy"] = str(args.toy)
        return cfg
    if cmd == "certify" and args.abstract_toy is not None:
        cfg["abstract_toy"] = str(args.abstract_toy)
        cfg["n"] = "3"
        return cfg
    if args.n is None:
        raise ValidationError("--n is required")
    _odd_n(args.n)
    lam = _lam(args.lam)
    cfg.update(n=str(args.n), **{"lambda": str(lam)})
    if cmd in ("curve", "pairing", "certify") and args.primes:
        cfg["primes"] = ",".join(str(p) for p in _int_list(args.primes))
    if cmd == "certify":
        cfg.update(d=str(args.d), dependent=args.dependent, no_kummer=args.no_kummer)
    if cmd in ("specialize", "census"):
        from heistorsor.arith.integers import factor_int

        S = _int_list(args.S) if args.S else factor_int(args.n).primes()
        cfg.update(height=str(args.height), S=",".join(str(p) for p in sorted(S)), workers=str(args.workers))
        if cmd == "census":
            cfg["grid"] = ",".join(str(N) for N in sorted(_int_list(args.grid)))
    return cfg


def _write(text: str, path: str | None):
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _print_census(text: str):
    rep = json.loads(text)["result"]
    for row in rep["grid"]:
        print(f"N={row['N']}\tcount={row['count']}", file=sys.stderr)
    print(f"fitted exponent {rep['fitted_exponent']}  benchmark 1/(4g+2) = {rep['benchmark_exponent']}", file=sys.stderr)


def main(argv: list[str] | None = None) -> int:
    from heistorsor.certifier import CertificationError, UncertifiedSpec
    from heistorsor.jacobian.curve import BadPrime, CurveError
    from heistorsor.jacobian.torsion import TorsionSearchExhausted
    from heistorsor.pairing import BudgetExhausted

    ap = make_parser()
    args = ap.parse_args(argv)
    t0 = time.perf_counter()
    try:
        if args.cmd == "replay":
            ok, diffs, _ = replay(args.path)
            print(dumps({"verified": ok, "discrepancies": diffs}), end="")
            return EXIT_OK if ok else EXIT_NEGATIVE
        cfg = config_from_args(args, effort_from_env())
        text, code = build_artifact(args.cmd, cfg)
        out = getattr(args, "report", None) or args.out
        _write(text, out)
        if args.cmd == "census":
            _print_census(text)
        print(f"{args.cmd}: exit {code} ({time.perf_counter() - t0:.1f}s, backend {kernels.BACKEND})", file=sys.stderr)
        return code
    except (ValidationError, BadPrime, CurveError, UncertifiedSpec) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (BudgetExhausted, TorsionSearchExhausted, CertificationError) as exc:
        print(f"budget exhausted: {exc}", file=sys.stderr)
        return EXIT_BUDGET


if __name__ == "__main__":
    sys.exit(main())

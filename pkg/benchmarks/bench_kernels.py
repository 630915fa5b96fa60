"""Compare the compiled kernels with the pure-Python fallback.

Usage: python benchmarks/bench_kernels.py [--repeat 5] [--json out.json]
"""

from __future__ import annotations

import argparse
import json
import random
import timeit

from heistorsor import _kernels_py as py

try:
    from heistorsor import _kernels as ext
except ImportError:
    ext = None


def cases(rng: random.Random):
    semiprimes = [rng.randrange(10**11, 10**12) | 1 for _ in range(50)]
    coeffs = [1, 0, 0, -5, 0, 0, 4]
    forms = [(a, 1, 825 // a) for a in (3, 5, 11, 15, 25)]  # disc 1 - 4 * 825 = -3299
    return {
        "trial_divide (50 x ~1e12, bound 1e4)": lambda m: [m.trial_divide(n, 10_000) for n in semiprimes],
        "char_sum (genus 2, p = 100003)": lambda m: m.char_sum(coeffs, 100_003),
        "bqf_compose + reduce (D = -3299, 6250 ops)": lambda m: [
            m.bqf_compose(*f, *g) for _ in range(250) for f in forms for g in forms
        ],
        "class_number (D = -10^7 - 3)": lambda m: m.class_number(-10_000_003),
    }


def _normal(x):
    if isinstance(x, (list, tuple)):
        return [_normal(y) for y in x]
    return x


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--json", default=None)
    args = ap.parse_args(argv)

    rows = []
    for name, fn in cases(random.Random(0)).items():
        t_py = min(timeit.repeat(lambda: fn(py), number=1, repeat=args.repeat))
        t_c = min(timeit.repeat(lambda: fn(ext), number=1, repeat=args.repeat)) if ext else None
        if ext is not None and _normal(fn(py)) != _normal(fn(ext)):
            raise SystemExit(f"backends disagree on {name}")
        rows.append({"kernel": name, "python_s": t_py, "compiled_s": t_c, "speedup": (t_py / t_c) if t_c else None})

    width = max(len(r["kernel"]) for r in rows)
    print(f"{'kernel':<{width}}  {'python':>10}  {'compiled':>10}  {'speedup':>8}")
    for r in rows:
        c = f"{r['compiled_s']:.4f}" if r["compiled_s"] is not None else "n/a"
        s = f"{r['speedup']:.1f}x" if r["speedup"] else "n/a"
        print(f"{r['kernel']:<{width}}  {r['python_s']:>10.4f}  {c:>10}  {s:>8}")
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            json.dump(rows, fh, indent=2)


if __name__ == "__main__":
    main()

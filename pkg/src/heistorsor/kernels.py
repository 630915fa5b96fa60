"""Backend selection for the hot kernels.

The compiled extension ``heistorsor._kernels`` is used when importable;
``HEISTORSOR_PURE_PYTHON=1`` forces the pure-Python fallback. Values outside
the 64-bit range always take the Python path.
"""

from __future__ import annotations

import os

from heistorsor import _kernels_py as _py

_INT64_MAX = (1 << 63) - 1
# C composition/reduction is exact while |disc| and coefficients stay below 2^58.
_BQF_LIMIT = 1 << 58
# class_number loop in C is O(|D|); cap where C arithmetic stays exact.
_CLASS_NUMBER_LIMIT = 1 << 40

_ext = None
if os.environ.get("HEISTORSOR_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from heistorsor import _kernels as _ext  # type: ignore[attr-defined]
    except ImportError:  # pragma: no cover - depends on build
        _ext = None

BACKEND = "compiled" if _ext is not None else "python"


def trial_divide(n: int, bound: int) -> tuple[list[tuple[int, int]], int]:
    if _ext is not None and n <= _INT64_MAX and bound < (1 << 31):
        return _ext.trial_divide(n, bound)
    return _py.trial_divide(n, bound)


def char_sum(coeffs: list[int], p: int) -> int:
    if _ext is not None and p < (1 << 31):
        return _ext.char_sum(list(coeffs), p)
    return _py.char_sum(coeffs, p)


def _bqf_fits(a: int, b: int, c: int) -> bool:
    return max(abs(a), abs(b), abs(c)) < _BQF_LIMIT and abs(b * b - 4 * a * c) < _BQF_LIMIT


def bqf_reduce(a: int, b: int, c: int) -> tuple[int, int, int]:
    if _ext is not None and _bqf_fits(a, b, c):
        return _ext.bqf_reduce(a, b, c)
    return _py.bqf_reduce(a, b, c)


def bqf_compose(f: tuple[int, int, int], g: tuple[int, int, int]) -> tuple[int, int, int]:
    if _ext is not None and _bqf_fits(*f) and _bqf_fits(*g):
        return _ext.bqf_compose(*f, *g)
    return _py.bqf_compose(*f, *g)


def class_number(D: int) -> int:
    if _ext is not None and -D < _CLASS_NUMBER_LIMIT:
        return _ext.class_number(D)
    return _py.class_number(D)

# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels; mirrors heistorsor._kernels_py exactly.

Inputs outside the signed 64-bit range are rejected with OverflowError by the
typed signatures; the dispatcher in heistorsor.kernels routes those to the
pure-Python versions.
"""

from libc.stdint cimport int64_t, uint64_t

cdef extern from *:
    ctypedef long long i128 "__int128"


cdef inline int64_t _floordiv(int64_t a, int64_t b):
    cdef int64_t q = a // b
    if (a % b != 0) and ((a < 0) != (b < 0)):
        q -= 1
    return q


cdef inline int64_t _mod(int64_t a, int64_t m):
    cdef int64_t r = a % m
    if r < 0:
        r += m
    return r


def trial_divide(uint64_t n, uint64_t bound):
    out = []
    cdef uint64_t p, step
    cdef int e
    for p in (2, 3):
        if p > bound:
            break
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        if e:
            out.append((int(p), e))
    p = 5
    step = 2
    while p <= bound and p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((int(p), e))
        p += step
        step = 6 - step
    if 1 < n <= bound:
        out.append((int(n), 1))
        n = 1
    return out, int(n)


def char_sum(coeffs, int64_t p):
    cdef int64_t half = (p - 1) // 2
    cdef int64_t x, y, v, total = 0
    cdef Py_ssize_t i, deg = len(coeffs)
    cdef bytearray is_sq_buf = bytearray(p)
    cdef unsigned char[:] is_sq = is_sq_buf
    cdef int64_t[:] rev
    import array
    rev_arr = array.array('q', [c % p for c in reversed(coeffs)])
    rev = rev_arr
    for y in range(1, half + 1):
        is_sq[(y * y) % p] = 1
    for x in range(p):
        v = 0
        for i in range(deg):
            v = <int64_t>((<i128>v * x + rev[i]) % p)
        if v:
            total += 1 if is_sq[v] else -1
    return int(total)


cdef inline void _reduce(int64_t *a, int64_t *b, int64_t *c):
    cdef int64_t k, t
    while True:
        if not (-a[0] < b[0] and b[0] <= a[0]):
            k = _floordiv(a[0] - b[0], 2 * a[0])
            c[0] = <int64_t>(<i128>a[0] * k * k + <i128>b[0] * k + c[0])
            b[0] = b[0] + 2 * k * a[0]
        if a[0] > c[0]:
            t = a[0]
            a[0] = c[0]
            c[0] = t
            b[0] = -b[0]
            continue
        if a[0] == c[0] and b[0] < 0:
            b[0] = -b[0]
        return


def bqf_reduce(int64_t a, int64_t b, int64_t c):
    _reduce(&a, &b, &c)
    return (int(a), int(b), int(c))


cdef void _xgcd(int64_t a, int64_t b, int64_t *g, int64_t *x, int64_t *y):
    cdef int64_t x0 = 1, x1 = 0, y0 = 0, y1 = 1, q, t
    while b:
        q = _floordiv(a, b)
        t = b
        b = a - q * b
        a = t
        t = x1
        x1 = x0 - q * x1
        x0 = t
        t = y1
        y1 = y0 - q * y1
        y0 = t
    g[0] = a
    x[0] = x0
    y[0] = y0


def bqf_compose(int64_t a1, int64_t b1, int64_t c1, int64_t a2, int64_t b2, int64_t c2):
    cdef int64_t t, s, n, y1, d, u, w, y2, x2, d1, v1, v2, r, a3, b3, c3
    if a1 > a2:
        t = a1; a1 = a2; a2 = t
        t = b1; b1 = b2; b2 = t
        t = c1; c1 = c2; c2 = t
    s = _floordiv(b1 + b2, 2)
    n = b2 - s
    if a2 % a1 == 0:
        y1 = 0
        d = a1
    else:
        _xgcd(a2, a1, &d, &u, &w)
        y1 = u
    if _mod(s, d) == 0:
        y2 = -1
        x2 = 0
        d1 = d
    else:
        _xgcd(s, d, &d1, &x2, &y2)
        y2 = -y2
    v1 = a1 // d1
    v2 = a2 // d1
    r = <int64_t>(((<i128>y1 * y2 % v1) * n - <i128>x2 * c2) % v1)
    if r < 0:
        r += v1
    b3 = b2 + 2 * v2 * r
    a3 = v1 * v2
    c3 = <int64_t>((<i128>c2 * d1 + <i128>r * (b2 + <i128>v2 * r)) // v1)
    _reduce(&a3, &b3, &c3)
    return (int(a3), int(b3), int(c3))


cdef int64_t _gcd(int64_t a, int64_t b):
    cdef int64_t t
    if a < 0:
        a = -a
    if b < 0:
        b = -b
    while b:
        t = a % b
        a = b
        b = t
    return a


def class_number(int64_t D):
    if D >= 0 or _mod(D, 4) > 1:
        raise ValueError("need a negative discriminant D = 0, 1 mod 4")
    cdef int64_t h = 0, b, q, a, c, bmax
    bmax = <int64_t>((-D / 3.0) ** 0.5) + 2
    while bmax * bmax > (-D) // 3:
        bmax -= 1
    b = _mod(D, 2)
    while b <= bmax:
        q = (b * b - D) // 4
        a = b if b > 1 else 1
        while a * a <= q:
            if q % a == 0:
                c = q // a
                if _gcd(_gcd(a, b), c) == 1:
                    if a == b or a == c or b == 0:
                        h += 1
                    else:
                        h += 2
            a += 1
        b += 2
    return int(h)

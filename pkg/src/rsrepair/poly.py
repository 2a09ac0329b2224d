"""Dense polynomial arithmetic over any field object.

A polynomial is a list of coefficients, lowest degree first.  Coefficients
are ints understood by the field ``k``, which must provide ``add``, ``sub``,
``mul``, ``neg`` and ``inv`` on ints, with 0 and 1 as the identities.
The zero polynomial is the empty list.
"""

from __future__ import annotations

from typing import Iterable, Sequence

Poly = list


def trim(a: Sequence[int]) -> Poly:
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def degree(a: Sequence[int]) -> int:
    """Degree of ``a``; the zero polynomial has degree -1."""
    return len(trim(a)) - 1


def add(k, a: Sequence[int], b: Sequence[int]) -> Poly:
    n = max(len(a), len(b))
    out = []
    for i in range(n):
        x = a[i] if i < len(a) else 0
        y = b[i] if i < len(b) else 0
        out.append(k.add(x, y))
    return trim(out)


def sub(k, a: Sequence[int], b: Sequence[int]) -> Poly:
    n = max(len(a), len(b))
    out = []
    for i in range(n):
        x = a[i] if i < len(a) else 0
        y = b[i] if i < len(b) else 0
        out.append(k.sub(x, y))
    return trim(out)


def scale(k, a: Sequence[int], c: int) -> Poly:
    if c == 0:
        return []
    return trim([k.mul(c, x) for x in a])


def mul(k, a: Sequence[int], b: Sequence[int]) -> Poly:
    a, b = trim(a), trim(b)
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            if y:
                out[i + j] = k.add(out[i + j], k.mul(x, y))
    return trim(out)


def divmod_(k, a: Sequence[int], b: Sequence[int]) -> tuple[Poly, Poly]:
    """Quotient and remainder of ``a`` by nonzero ``b``."""
    b = trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    r = trim(a)
    if len(r) < len(b):
        return [], r
    lead_inv = k.inv(b[-1])
    quot = [0] * (len(r) - len(b) + 1)
    for shift in range(len(r) - len(b), -1, -1):
        c = r[shift + len(b) - 1]
        if c == 0:
            continue
        c = k.mul(c, lead_inv)
        quot[shift] = c
        for j, y in enumerate(b):
            if y:
                r[shift + j] = k.sub(r[shift + j], k.mul(c, y))
    return trim(quot), trim(r[: len(b) - 1])


def mod(k, a: Sequence[int], b: Sequence[int]) -> Poly:
    return divmod_(k, a, b)[1]


def mulmod(k, a: Sequence[int], b: Sequence[int], m: Sequence[int]) -> Poly:
    return mod(k, mul(k, a, b), m)


def powmod(k, a: Sequence[int], e: int, m: Sequence[int]) -> Poly:
    result: Poly = [1]
    base = mod(k, a, m)
    while e:
        if e & 1:
            result = mulmod(k, result, base, m)
        e >>= 1
        if e:
            base = mulmod(k, base, base, m)
    return mod(k, result, m)


def monic(k, a: Sequence[int]) -> Poly:
    a = trim(a)
    if not a:
        return a
    return scale(k, a, k.inv(a[-1]))


def gcd(k, a: Sequence[int], b: Sequence[int]) -> Poly:
    a, b = trim(a), trim(b)
    while b:
        a, b = b, mod(k, a, b)
    return monic(k, a)


def evaluate(k, a: Sequence[int], x: int) -> int:
    """Horner evaluation of ``a`` at ``x``."""
    acc = 0
    for c in reversed(a):
        acc = k.add(k.mul(acc, x), c)
    return acc


def from_roots(k, roots: Iterable[int]) -> Poly:
    """The monic polynomial prod (x - r)."""
    out: Poly = [1]
    for r in roots:
        out = mul(k, out, [k.neg(r), 1])
    return out


def interpolate(k, xs: Sequence[int], ys: Sequence[int]) -> Poly:
    """Lagrange interpolation through the points (xs[i], ys[i])."""
    if len(xs) != len(ys):
        raise ValueError("xs and ys differ in length")
    out: Poly = []
    for i, (xi, yi) in enumerate(zip(xs, ys)):
        if yi == 0:
            continue
        num: Poly = [1]
        den = 1
        for j, xj in enumerate(xs):
            if j == i:
                continue
            num = mul(k, num, [k.neg(xj), 1])
            den = k.mul(den, k.sub(xi, xj))
        out = add(k, out, scale(k, num, k.mul(yi, k.inv(den))))
    return out

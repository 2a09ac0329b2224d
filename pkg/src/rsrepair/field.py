"""Finite field towers GF(p) <= B = GF(q) <= F = GF(q^t).

Elements of every level are packed into plain ints: an element of F is the
integer sum(c_i * q**i) where c_i is the packed B-coefficient of x**i, and a
B-element is sum(d_j * p**j) over its GF(p) digits.  The base-p digits of a
packed F-element are therefore exactly its coordinates over GF(p), and a
B-element packs to the same int as its embedding in F.

Fields up to 2**16 elements get log/antilog tables and vectorized numpy
arithmetic; larger fields (up to the cap) fall back to polynomial arithmetic.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from . import linalg, poly

DEFAULT_CAP = 1 << 20
TABLE_LIMIT = 1 << 16
CAP_ENV = "RSREPAIR_FIELD_CAP"


class FieldError(ValueError):
    """Bad field parameters: non-prime characteristic, reducible modulus, oversize field."""


def field_cap() -> int:
    raw = os.environ.get(CAP_ENV)
    return int(raw) if raw else DEFAULT_CAP


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


class PrimeField:
    """GF(p) on ints 0..p-1."""

    def __init__(self, p: int):
        if not is_prime(p):
            raise FieldError(f"characteristic {p} is not prime")
        self.p = p
        self.order = p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, self.p - 2, self.p)


def is_irreducible(k, f: Sequence[int]) -> bool:
    """Rabin's irreducibility test for a polynomial over the field ``k``."""
    f = poly.trim(f)
    d = len(f) - 1
    if d < 1:
        return False
    if d == 1:
        return True
    f = poly.monic(k, f)
    x = [0, 1]

    def frob_iter(j: int):
        # x^(|k|^j) mod f
        cur = x
        for _ in range(j):
            cur = poly.powmod(k, cur, k.order, f)
        return cur

    if poly.sub(k, frob_iter(d), x):
        return False
    for r in prime_factors(d):
        h = poly.sub(k, frob_iter(d // r), x)
        if len(poly.gcd(k, f, h)) != 1:
            return False
    return True


def first_irreducible(k, d: int) -> list[int]:
    """Monic irreducible polynomial of degree ``d`` over ``k`` with the smallest packed value.

    Candidates x^d + c(x) are scanned with c packed as sum(c_i * |k|**i), so for
    GF(2) and d = 3 the first hit is x^3 + x + 1.
    """
    Q = k.order
    for code in range(Q**d):
        coeffs = []
        c = code
        for _ in range(d):
            coeffs.append(c % Q)
            c //= Q
        if d > 1 and coeffs[0] == 0:
            continue
        f = coeffs + [1]
        if is_irreducible(k, f):
            return f
    raise FieldError(f"no irreducible polynomial of degree {d}")  # pragma: no cover


class PolyField:
    """GF(|k|^deg) as polynomials over ``k`` modulo a monic irreducible, packed into ints."""

    def __init__(self, k, modulus: Sequence[int]):
        self.k = k
        self.modulus = list(modulus)
        self.deg = len(self.modulus) - 1
        self.sub_order = k.order
        self.order = k.order**self.deg

    def unpack(self, a: int) -> list[int]:
        Q = self.sub_order
        out = []
        for _ in range(self.deg):
            out.append(a % Q)
            a //= Q
        return out

    def pack(self, coeffs: Sequence[int]) -> int:
        out = 0
        for c in reversed(list(coeffs)):
            out = out * self.sub_order + c
        return out

    def add(self, a, b):
        k = self.k
        return self.pack([k.add(x, y) for x, y in zip(self.unpack(a), self.unpack(b))])

    def sub(self, a, b):
        k = self.k
        return self.pack([k.sub(x, y) for x, y in zip(self.unpack(a), self.unpack(b))])

    def neg(self, a):
        return self.pack([self.k.neg(x) for x in self.unpack(a)])

    def mul(self, a, b):
        if a == 0 or b == 0:
            return 0
        prod = poly.mod(self.k, poly.mul(self.k, self.unpack(a), self.unpack(b)), self.modulus)
        return self.pack(prod + [0] * (self.deg - len(prod)))

    def pow(self, a, e):
        result = 1
        while e:
            if e & 1:
                result = self.mul(result, a)
            e >>= 1
            if e:
                a = self.mul(a, a)
        return result

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return self.pow(a, self.order - 2)


class TableField:
    """Log/antilog accelerated arithmetic for a packed field with a primitive element."""

    def __init__(self, slow: PolyField, p: int, primitive: int):
        self.slow = slow
        self.p = p
        self.order = slow.order
        self.sub_order = slow.sub_order
        n1 = self.order - 1
        exp = np.zeros(2 * n1 + 1, dtype=np.int64)
        log = np.full(self.order, -1, dtype=np.int64)
        x = 1
        for i in range(n1):
            exp[i] = x
            log[x] = i
            x = slow.mul(x, primitive)
        exp[n1 : 2 * n1] = exp[:n1]
        exp[2 * n1] = exp[0]
        self.exp = exp
        self.log = log
        self._exp_list = exp.tolist()
        self._log_list = log.tolist()
        ndig = round(math.log(self.order, p))
        self.ndigits = ndig
        self.place = np.array([p**i for i in range(ndig)], dtype=np.int64)
        vals = np.arange(self.order, dtype=np.int64)
        self.digits = (vals[:, None] // self.place[None, :]) % p
        if p == 2:
            self._neg_list = list(range(self.order))
        else:
            negs = ((-self.digits) % p) @ self.place
            self._neg_list = negs.tolist()

    # scalar ops

    def add(self, a, b):
        if self.p == 2:
            return a ^ b
        p = self.p
        out, place = 0, 1
        while a or b:
            out += ((a % p + b % p) % p) * place
            a //= p
            b //= p
            place *= p
        return out

    def neg(self, a):
        return self._neg_list[a]

    def sub(self, a, b):
        if self.p == 2:
            return a ^ b
        return self.add(a, self._neg_list[b])

    def mul(self, a, b):
        if a == 0 or b == 0:
            return 0
        return self._exp_list[self._log_list[a] + self._log_list[b]]

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return self._exp_list[(self.order - 1 - self._log_list[a]) % (self.order - 1)]

    def pow(self, a, e):
        if e == 0:
            return 1
        if a == 0:
            return 0
        return self._exp_list[(self._log_list[a] * e) % (self.order - 1)]

    # vectorized ops

    def vadd(self, a, b):
        a, b = np.asarray(a), np.asarray(b)
        if self.p == 2:
            return a ^ b
        return ((self.digits[a] + self.digits[b]) % self.p) @ self.place

    def vneg(self, a):
        a = np.asarray(a)
        if self.p == 2:
            return a
        return ((-self.digits[a]) % self.p) @ self.place

    def vsub(self, a, b):
        a, b = np.asarray(a), np.asarray(b)
        if self.p == 2:
            return a ^ b
        return ((self.digits[a] - self.digits[b]) % self.p) @ self.place

    def vmul(self, a, b):
        a, b = np.broadcast_arrays(np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64))
        out = self.exp[(self.log[a] + self.log[b]) % (self.order - 1)]
        return np.where((a == 0) | (b == 0), 0, out)

    def vinv(self, a):
        a = np.asarray(a, dtype=np.int64)
        if np.any(a == 0):
            raise ZeroDivisionError("inverse of zero")
        return self.exp[(-self.log[a]) % (self.order - 1)]

    def vpow(self, a, e: int):
        a = np.asarray(a, dtype=np.int64)
        if e == 0:
            return np.ones_like(a)
        out = self.exp[(self.log[a] * (e % (self.order - 1))) % (self.order - 1)]
        return np.where(a == 0, 0, out)


@dataclass(frozen=True)
class Felt:
    """An element of F, carried with its tower."""

    tower: "FieldTower"
    value: int

    def _other(self, other) -> int:
        if isinstance(other, Felt):
            if other.tower is not self.tower:
                raise FieldError("elements belong to different towers")
            return other.value
        return self.tower.embed_int(other)

    def __add__(self, other):
        return Felt(self.tower, self.tower.add(self.value, self._other(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return Felt(self.tower, self.tower.sub(self.value, self._other(other)))

    def __rsub__(self, other):
        return Felt(self.tower, self.tower.sub(self._other(other), self.value))

    def __neg__(self):
        return Felt(self.tower, self.tower.neg(self.value))

    def __mul__(self, other):
        return Felt(self.tower, self.tower.mul(self.value, self._other(other)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return Felt(self.tower, self.tower.div(self.value, self._other(other)))

    def __rtruediv__(self, other):
        return Felt(self.tower, self.tower.div(self._other(other), self.value))

    def __pow__(self, e: int):
        if e < 0:
            return Felt(self.tower, self.tower.pow(self.tower.inv(self.value), -e))
        return Felt(self.tower, self.tower.pow(self.value, e))

    def __eq__(self, other):
        if isinstance(other, Felt):
            return self.tower is other.tower and self.value == other.value
        if isinstance(other, int):
            return self.value == self.tower.embed_int(other)
        return NotImplemented

    def __hash__(self):
        return hash((id(self.tower), self.value))

    def __bool__(self):
        return self.value != 0

    def __int__(self):
        return self.value

    @property
    def coeffs(self) -> list[list[int]]:
        """Coordinates over B, each B-coordinate given as its GF(p) digits."""
        return self.tower.coeffs(self.value)

    def __repr__(self):
        return self.tower.format(self.value)


class FieldTower:
    """GF(p) <= B = GF(p^m) <= F = GF(p^(m t)), immutable once built."""

    def __init__(self, p: int, m: int, t: int, base_modulus: Sequence[int], ext_modulus: Sequence[int]):
        self.p, self.m, self.t = p, m, t
        self.q = p**m
        self.order = self.q**t
        self.prime = PrimeField(p)
        self.base_modulus = list(base_modulus)
        self.ext_modulus = list(ext_modulus)
        base_slow = PolyField(self.prime, self.base_modulus)
        if self.q <= TABLE_LIMIT and self.q > 1:
            self.base = TableField(base_slow, p, _scan_primitive(base_slow))
        else:
            self.base = base_slow
        self._slow = PolyField(self.base, self.ext_modulus)
        self.primitive = _scan_primitive(self._slow)
        self.has_tables = self.order <= TABLE_LIMIT
        self._fast = TableField(self._slow, p, self.primitive) if self.has_tables else None
        self.ndigits = m * t
        self.place = [p**i for i in range(self.ndigits)]

    # construction helpers

    @property
    def dlog_table(self) -> dict[int, int] | None:
        if not self.has_tables:
            return None
        return {v: i for v, i in enumerate(self._fast._log_list) if i >= 0}

    @property
    def arith(self):
        return self._fast if self.has_tables else self._slow

    def spec(self) -> dict:
        return {
            "p": self.p,
            "m": self.m,
            "t": self.t,
            "base_modulus": list(self.base_modulus),
            "ext_modulus": [self.base_digits(c) for c in self.ext_modulus],
        }

    def __repr__(self):
        return f"FieldTower(p={self.p}, m={self.m}, t={self.t})"

    def __eq__(self, other):
        return isinstance(other, FieldTower) and self.spec() == other.spec()

    def __hash__(self):
        return hash((self.p, self.m, self.t, tuple(self.base_modulus), tuple(self.ext_modulus)))

    # representation

    def base_digits(self, b: int) -> list[int]:
        out = []
        for _ in range(self.m):
            out.append(b % self.p)
            b //= self.p
        return out

    def coeffs(self, a: int) -> list[list[int]]:
        return [self.base_digits(c) for c in self._slow.unpack(a)]

    def from_coeffs(self, coeffs: Sequence[Sequence[int]]) -> int:
        if len(coeffs) != self.t or any(len(c) != self.m for c in coeffs):
            raise FieldError("coefficient array has the wrong shape")
        out = 0
        for c in reversed(list(coeffs)):
            b = 0
            for d in reversed(list(c)):
                b = b * self.p + (d % self.p)
            out = out * self.q + b
        return out

    def digits(self, a: int) -> list[int]:
        """Coordinates of ``a`` over GF(p), lowest place first."""
        p = self.p
        out = []
        for _ in range(self.ndigits):
            out.append(a % p)
            a //= p
        return out

    def from_digits(self, d: Sequence[int]) -> int:
        out = 0
        for x in reversed(list(d)):
            out = out * self.p + (x % self.p)
        return out

    def embed_int(self, x) -> int:
        """Interpret a Python int as an element of the prime subfield."""
        if isinstance(x, Felt):
            return x.value
        if isinstance(x, int):
            return x % self.p
        raise TypeError(f"cannot use {type(x).__name__} as a field element")

    def element(self, value: int) -> Felt:
        if not 0 <= value < self.order:
            raise FieldError(f"{value} is not a packed element of GF({self.order})")
        return Felt(self, value)

    def __call__(self, value: int) -> Felt:
        return self.element(value)

    def elements(self) -> list[int]:
        return list(range(self.order))

    def canonical_points(self) -> list[int]:
        """All of F ordered 0, 1, xi, xi^2, ... when tables exist, else by packed value."""
        if not self.has_tables:
            return list(range(self.order))
        return [0] + self._fast.exp[: self.order - 1].tolist()

    def xi_pow(self, i: int) -> int:
        return self.pow(self.primitive, i)

    def base_elements_in_f(self) -> list[int]:
        """B embedded in F; packed ints 0..q-1."""
        return list(range(self.q))

    def format(self, a: int, symbol: str = "ξ") -> str:
        """Powers of the primitive element when tables exist, else coefficient vectors."""
        if self.has_tables:
            if a == 0:
                return "0"
            e = self._fast._log_list[a]
            if e == 0:
                return "1"
            if e == 1:
                return symbol
            return f"{symbol}^{e}"
        return str(self.coeffs(a))

    def log(self, a: int) -> int:
        if a == 0:
            raise ValueError("log of zero")
        if self.has_tables:
            return self._fast._log_list[a]
        x, i = 1, 0
        while x != a:
            x = self.mul(x, self.primitive)
            i += 1
        return i

    # scalar arithmetic

    def add(self, a, b):
        if self.p == 2:
            return a ^ b
        return self.arith.add(a, b)

    def sub(self, a, b):
        if self.p == 2:
            return a ^ b
        return self.arith.sub(a, b)

    def neg(self, a):
        if self.p == 2:
            return a
        return self.arith.neg(a)

    def mul(self, a, b):
        return self.arith.mul(a, b)

    def inv(self, a):
        return self.arith.inv(a)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, e):
        return self.arith.pow(a, e)

    def frob(self, a, i: int = 1):
        """a^(q^i)."""
        i %= self.t
        if i == 0:
            return a
        return self.pow(a, self.q**i)

    def trace(self, a):
        """Tr_{F/B}(a), a packed element of B."""
        acc, x = 0, a
        for _ in range(self.t):
            acc = self.add(acc, x)
            x = self.pow(x, self.q)
        return acc

    def sum(self, xs: Iterable[int]) -> int:
        acc = 0
        for x in xs:
            acc = self.add(acc, x)
        return acc

    # vectorized arithmetic (table-backed fields only)

    def _need_tables(self):
        if not self.has_tables:
            raise FieldError(f"vectorized arithmetic needs |F| <= {TABLE_LIMIT}")
        return self._fast

    def vadd(self, a, b):
        return self._need_tables().vadd(a, b)

    def vsub(self, a, b):
        return self._need_tables().vsub(a, b)

    def vneg(self, a):
        return self._need_tables().vneg(a)

    def vmul(self, a, b):
        return self._need_tables().vmul(a, b)

    def vinv(self, a):
        return self._need_tables().vinv(a)

    def vpow(self, a, e: int):
        return self._need_tables().vpow(a, e)

    def vdigits(self, a):
        return self._need_tables().digits[np.asarray(a)]

    # linear algebra over B by row reduction of coefficient vectors

    def rank_over_base(self, elems: Sequence[int]) -> int:
        rows = [self._slow.unpack(a) for a in elems]
        return linalg.rank(self.base, rows) if rows else 0

    @cached_property
    def base_subfield(self) -> "Subfield":
        return Subfield(self, self.m)

    def subfield(self, e: int) -> "Subfield":
        """The subfield GF(p^e) of F; ``e`` must divide m*t."""
        if e == self.m:
            return self.base_subfield
        return Subfield(self, e)


def _scan_primitive(field: PolyField) -> int:
    """Smallest packed element of multiplicative order |field| - 1."""
    n1 = field.order - 1
    if n1 == 1:
        return 1
    factors = prime_factors(n1)
    for g in range(2, field.order):
        if all(field.pow(g, n1 // r) != 1 for r in factors):
            return g
    raise FieldError("no primitive element found")  # pragma: no cover


def build_tower(
    p: int,
    m: int,
    t: int,
    base_modulus: Sequence[int] | None = None,
    ext_modulus: Sequence[int] | None = None,
    cap: int | None = None,
) -> FieldTower:
    """Build GF(p) <= GF(p^m) <= GF(p^(m t)) deterministically.

    Missing moduli are the first irreducible polynomial in packed order; the
    primitive element is the smallest packed element of full order.
    ``ext_modulus`` coefficients may be packed ints or lists of GF(p) digits.
    """
    if not is_prime(p):
        raise FieldError(f"characteristic {p} is not prime")
    if m < 1 or t < 1:
        raise FieldError("degrees must be at least 1")
    cap = field_cap() if cap is None else cap
    if p ** (m * t) > cap:
        raise FieldError(f"|F| = {p}^{m * t} exceeds the desk-scale cap {cap}")
    prime = PrimeField(p)
    if base_modulus is None:
        base_modulus = first_irreducible(prime, m)
    else:
        base_modulus = [c % p for c in base_modulus]
        if len(poly.trim(base_modulus)) != m + 1 or base_modulus[-1] != 1:
            raise FieldError(f"base modulus must be monic of degree {m}")
        if not is_irreducible(prime, base_modulus):
            raise FieldError("base modulus is reducible over GF(p)")
    base_slow = PolyField(prime, base_modulus)
    if ext_modulus is None:
        ext_modulus = first_irreducible(base_slow, t)
    else:
        packed = []
        for c in ext_modulus:
            if isinstance(c, (list, tuple)):
                if len(c) > m:
                    raise FieldError("extension modulus coefficient has too many digits")
                c = base_slow.pack(list(c) + [0] * (m - len(c)))
            if not 0 <= c < p**m:
                raise FieldError("extension modulus coefficient out of range")
            packed.append(c)
        ext_modulus = packed
        if len(poly.trim(ext_modulus)) != t + 1 or ext_modulus[-1] != 1:
            raise FieldError(f"extension modulus must be monic of degree {t}")
        if not is_irreducible(base_slow, ext_modulus):
            raise FieldError("extension modulus is reducible over B")
    return FieldTower(p, m, t, base_modulus, ext_modulus)


def tower_from_spec(spec: dict, cap: int | None = None) -> FieldTower:
    return build_tower(
        spec["p"], spec.get("m", 1), spec["t"], spec.get("base_modulus"), spec.get("ext_modulus"), cap=cap
    )


class Subfield:
    """K = GF(p^e) inside F, the alphabet of downloaded sub-symbols.

    Linear algebra over K is done by expanding each element s into the
    GF(p)-vectors {w * s : w in a GF(p)-basis of K}.
    """

    def __init__(self, tower: FieldTower, e: int):
        total = tower.m * tower.t
        if e < 1 or total % e:
            raise FieldError(f"GF({tower.p}^{e}) is not a subfield of GF({tower.p}^{total})")
        self.tower = tower
        self.e = e
        self.order = tower.p**e
        self.degree = total // e
        if e == tower.m:
            self.gens = [tower.p**j for j in range(e)]
        else:
            eta = tower.pow(tower.primitive, (tower.order - 1) // (self.order - 1))
            self.gens = [tower.pow(eta, j) for j in range(e)]

    def __repr__(self):
        return f"Subfield(GF({self.tower.p}^{self.e}) in GF({self.tower.order}))"

    @property
    def is_base(self) -> bool:
        return self.e == self.tower.m

    def contains(self, x: int) -> bool:
        return self.tower.pow(x, self.order) == x

    def elements(self) -> list[int]:
        tw = self.tower
        if self.is_base:
            return list(range(self.order))
        out = [0]
        eta = tw.pow(tw.primitive, (tw.order - 1) // (self.order - 1))
        x = 1
        for _ in range(self.order - 1):
            out.append(x)
            x = tw.mul(x, eta)
        return out

    def trace(self, x: int) -> int:
        tw = self.tower
        acc = 0
        for _ in range(self.degree):
            acc = tw.add(acc, x)
            x = tw.pow(x, self.order)
        return acc

    def frob(self, x: int, i: int = 1) -> int:
        return self.tower.pow(x, self.order ** (i % self.degree))

    def _expand(self, s: int) -> list[list[int]]:
        tw = self.tower
        return [tw.digits(tw.mul(w, s)) for w in self.gens]

    def rank(self, elems: Sequence[int]) -> int:
        rows = [row for s in elems for row in self._expand(s)]
        if not rows:
            return 0
        return linalg.rank(self.tower.prime, rows) // self.e

    def span(self, elems: Sequence[int]) -> tuple[list[int], list[list[int]]]:
        """Greedy basis of span_K(elems) plus K-coordinates of every element.

        Elements are taken in order and kept when independent of those
        already kept, so the result is deterministic.
        """
        tw = self.tower
        sp = linalg.IncrementalSpan(tw.p, tw.ndigits)
        basis: list[int] = []
        coords: list[list[int]] = []
        pending: list[list[int]] = []
        for s in elems:
            combo = sp.reduce(tw.digits(s))
            if combo is None:
                basis.append(s)
                for row in self._expand(s):
                    sp.offer(row)
                combo = sp.reduce(tw.digits(s))
            pending.append(combo)
        for combo in pending:
            row = []
            for j in range(len(basis)):
                c = 0
                for l, w in enumerate(self.gens):
                    idx = j * self.e + l
                    if idx < len(combo) and combo[idx]:
                        c = tw.add(c, tw.mul(combo[idx] % tw.p, w))
                row.append(c)
            coords.append(row)
        return basis, coords

    def dual_basis(self, elems: Sequence[int]) -> list[int]:
        """Trace-dual basis: Tr(u_i v_j) = [i == j]."""
        tw = self.tower
        u = list(elems)
        if len(u) != self.degree:
            raise FieldError(f"a basis over GF({self.order}) needs {self.degree} elements")
        gram = [[self.trace(tw.mul(a, b)) for b in u] for a in u]
        try:
            ginv = linalg.inverse(tw, gram)
        except ValueError:
            raise FieldError("elements are dependent over the subfield") from None
        return [tw.sum(tw.mul(ginv[j][k], u[k]) for k in range(len(u))) for j in range(len(u))]

    def vtrace(self, x):
        tw = self.tower
        acc = np.zeros_like(np.asarray(x, dtype=np.int64))
        cur = np.asarray(x, dtype=np.int64)
        for _ in range(self.degree):
            acc = tw.vadd(acc, cur)
            cur = tw.vpow(cur, self.order)
        return acc

    @cached_property
    def trace_table(self) -> np.ndarray:
        return self.vtrace(np.arange(self.tower.order))

    def batch_rank(self, columns: np.ndarray, chunk: int = 4096) -> np.ndarray:
        """K-ranks of many columns at once; ``columns`` has shape (N, r)."""
        tw = self.tower
        cols = np.asarray(columns, dtype=np.int64)
        n = cols.shape[0]
        out = np.zeros(n, dtype=np.int64)
        gens = np.array(self.gens, dtype=np.int64)
        for lo in range(0, n, chunk):
            block = cols[lo : lo + chunk]
            expanded = tw.vmul(block[:, :, None], gens[None, None, :])
            expanded = expanded.reshape(block.shape[0], -1)
            if tw.p == 2:
                # packed bits are already the GF(2) coordinates
                ranks = linalg.batch_rank_gf2_packed(expanded, tw.m * tw.t)
            else:
                ranks = linalg.batch_rank_mod_p(tw.vdigits(expanded), tw.p)
            out[lo : lo + chunk] = ranks // self.e
        return out


# Felt-level convenience API


def _tower_of(elems: Sequence[Felt]) -> FieldTower:
    towers = {id(x.tower): x.tower for x in elems}
    if len(towers) > 1:
        raise FieldError("elements belong to different towers")
    return next(iter(towers.values()))


def trace_to_base(x: Felt) -> Felt:
    return Felt(x.tower, x.tower.trace(x.value))


def frobenius(x: Felt, i: int = 1) -> Felt:
    return Felt(x.tower, x.tower.frob(x.value, i))


def rank_over_base(elems: Sequence[Felt]) -> int:
    if not elems:
        return 0
    tw = _tower_of(elems)
    return tw.rank_over_base([x.value for x in elems])


def span_basis_and_coords(elems: Sequence[Felt]) -> tuple[list[Felt], list[list[Felt]]]:
    if not elems:
        return [], []
    tw = _tower_of(elems)
    basis, coords = tw.base_subfield.span([x.value for x in elems])
    return [Felt(tw, b) for b in basis], [[Felt(tw, c) for c in row] for row in coords]


def dual_basis(elems: Sequence[Felt]) -> list[Felt]:
    tw = _tower_of(elems)
    return [Felt(tw, v) for v in tw.base_subfield.dual_basis([x.value for x in elems])]


def linearized_eval(coeffs: Sequence[Felt | int], x: Felt) -> Felt:
    """Evaluate sum(c_i * x^(q^i))."""
    tw = x.tower
    acc, cur = 0, x.value
    for c in coeffs:
        cv = c.value if isinstance(c, Felt) else c
        acc = tw.add(acc, tw.mul(cv, cur))
        cur = tw.pow(cur, tw.q)
    return Felt(tw, acc)

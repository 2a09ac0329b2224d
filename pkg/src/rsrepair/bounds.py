"""Lower bounds on the bandwidth of linear single-erasure repair of RS codes.

Any linear scheme downloading b_a sub-symbols of GF(q) from helper a obeys

    sum_a q^(-b_a) <= L = ((r - 1)(|F| - 1) + (n - 1)) / |F|,

so the minimum of sum b_a over integers 0 <= b_a <= t is a lower bound.  The
closed form below solves that integer program; ``brute_force_min_bandwidth``
solves it again without assuming the optimum is balanced.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations_with_replacement
from math import comb

import numpy as np

ENUMERATION_CAP = 200_000


class BoundError(ValueError):
    pass


def _check(n: int, q: int, t: int, r: int) -> None:
    if q < 2 or t < 1:
        raise BoundError("need q >= 2 and t >= 1")
    if not 2 <= n <= q**t:
        raise BoundError(f"need 2 <= n <= q^t = {q**t}, got n = {n}")
    if not 1 <= r < n:
        raise BoundError(f"need 1 <= r < n, got r = {r}")


def budget(n: int, q: int, t: int, r: int) -> Fraction:
    """L = ((r-1)(|F|-1) + (n-1)) / |F|."""
    F = q**t
    return Fraction((r - 1) * (F - 1) + (n - 1), F)


def avg_brackets(n: int, q: int, t: int, r: int) -> tuple[int, int]:
    """floor and ceil of log_q((n-1)/L), by exact comparison of q^j * L with n-1."""
    L = budget(n, q, t, r)
    lo = 0
    while q ** (lo + 1) * L <= n - 1:
        lo += 1
    hi = lo if q**lo * L == n - 1 else lo + 1
    return lo, hi


@dataclass(frozen=True)
class BoundReport:
    n: int
    q: int
    t: int
    r: int
    L: Fraction
    b_ave: float
    b_ave_floor: int
    b_ave_ceil: int
    ell: int
    integral_bound_subsymbols: int
    integral_bound_bits: float
    fractional_bound_bits: float
    fractional_bound_bits_ceil: int

    def to_json(self) -> dict:
        out = asdict(self)
        out["L"] = f"{self.L.numerator}/{self.L.denominator}"
        return out

    def summary(self) -> str:
        return (
            f"n={self.n} q={self.q} t={self.t} r={self.r}: integral >= "
            f"{self.integral_bound_subsymbols} sub-symbols ({_fmt_bits(self.integral_bound_bits)} bits), "
            f"fractional >= {self.fractional_bound_bits:.2f} bits (ceil {self.fractional_bound_bits_ceil})"
        )


def _fmt_bits(x: float) -> str:
    return str(int(x)) if float(x).is_integer() else f"{x:.2f}"


def integral_lower_bound(n: int, q: int, t: int, r: int) -> BoundReport:
    _check(n, q, t, r)
    L = budget(n, q, t, r)
    lo, hi = avg_brackets(n, q, t, r)
    if lo == hi:
        ell = n - 1
    else:
        num = L - (n - 1) * Fraction(1, q**hi)
        den = Fraction(1, q**lo) - Fraction(1, q**hi)
        ell = math.floor(num / den)
    sub = ell * lo + (n - 1 - ell) * hi
    frac_bits, frac_ceil = _fractional(n, L)
    return BoundReport(
        n=n,
        q=q,
        t=t,
        r=r,
        L=L,
        b_ave=math.log((n - 1) / L, q),
        b_ave_floor=lo,
        b_ave_ceil=hi,
        ell=ell,
        integral_bound_subsymbols=sub,
        integral_bound_bits=sub * math.log2(q),
        fractional_bound_bits=frac_bits,
        fractional_bound_bits_ceil=frac_ceil,
    )


def _fractional(n: int, L: Fraction) -> tuple[float, int]:
    # (n-1) log2((n-1)/L); ceiling c is the least integer with 2^c >= ((n-1)/L)^(n-1)
    x = Fraction(n - 1) / L
    bits = (n - 1) * math.log2(x)
    xp = x ** (n - 1)
    c = max(0, math.floor(bits) - 1)
    while 2**c < xp:
        c += 1
    return bits, c


def fractional_lower_bound(n: int, q: int, t: int, r: int) -> float:
    """(n-1) b_AVE sub-symbols of GF(q), in bits."""
    _check(n, q, t, r)
    return _fractional(n, budget(n, q, t, r))[0]


def _weights(q: int, t: int) -> list[int]:
    # q^(t-b) for b = 0..t; constraint sum q^(-b) <= L scaled by q^t
    return [q ** (t - b) for b in range(t + 1)]


def _capacity(n: int, q: int, t: int, r: int) -> int:
    return (r - 1) * (q**t - 1) + (n - 1)


def enumerate_optima(n: int, q: int, t: int, r: int, cap: int = ENUMERATION_CAP) -> tuple[int, list[tuple[int, ...]]]:
    """Minimum and all minimizing occupancy vectors (count of helpers at each b = 0..t)."""
    _check(n, q, t, r)
    helpers = n - 1
    if comb(helpers + t, t) > cap:
        raise BoundError(f"{comb(helpers + t, t)} occupancy vectors exceed the enumeration cap {cap}")
    w = _weights(q, t)
    K = _capacity(n, q, t, r)
    best = None
    optima: list[tuple[int, ...]] = []
    for combo in combinations_with_replacement(range(t + 1), helpers):
        if sum(w[b] for b in combo) > K:
            continue
        total = sum(combo)
        occ = tuple(combo.count(b) for b in range(t + 1))
        if best is None or total < best:
            best, optima = total, [occ]
        elif total == best:
            optima.append(occ)
    if best is None:  # pragma: no cover - b = t everywhere is always feasible
        raise BoundError("infeasible")
    return best, optima


class OccupancyTable:
    """Exact minima for every (n, r) at fixed (q, t) by a knapsack over helpers.

    After processing i helpers, ``min_weight[B]`` is the least scaled weight
    sum q^(t - b_a) over all assignments with sum b_a = B.
    """

    def __init__(self, q: int, t: int):
        self.q, self.t = q, t
        w = np.array(_weights(q, t), dtype=np.int64)
        helpers = q**t - 1
        inf = np.iinfo(np.int64).max // 4
        cur = np.array([0], dtype=np.int64)
        self.rows = [cur]
        for _ in range(helpers):
            nxt = np.full(cur.size + t, inf, dtype=np.int64)
            for b in range(t + 1):
                cand = cur + w[b]
                seg = nxt[b : b + cur.size]
                np.minimum(seg, cand, out=seg)
            cur = nxt
            self.rows.append(cur)

    def minimum(self, n: int, r: int) -> int:
        _check(n, self.q, self.t, r)
        row = self.rows[n - 1]
        K = _capacity(n, self.q, self.t, r)
        return int(np.argmax(row <= K))


def brute_force_min_bandwidth(n: int, q: int, t: int, r: int, cap: int = ENUMERATION_CAP) -> int:
    """Exact integer-program minimum, without the balancing argument.

    Enumerates occupancy vectors when there are at most ``cap`` of them and
    otherwise runs the exact knapsack recursion over helpers.
    """
    _check(n, q, t, r)
    K = _capacity(n, q, t, r)
    if comb(n - 1 + t, t) <= cap:
        lightest = _enumerated_weights(n, q, t)
    elif q**t > 1 << 16:
        raise BoundError("parameters exceed the brute-force scale cap")
    else:
        lightest = _table(q, t).rows[n - 1]
    return next(total for total, w in enumerate(lightest) if w <= K)


@lru_cache(maxsize=256)
def _enumerated_weights(n: int, q: int, t: int) -> tuple[int, ...]:
    """Least scaled weight among all occupancy vectors with each total sum b_a."""
    w = _weights(q, t)
    helpers = n - 1
    inf = (helpers + 1) * w[0] + 1
    best = [inf] * (helpers * t + 1)
    for combo in combinations_with_replacement(range(t + 1), helpers):
        total = sum(combo)
        weight = sum(w[b] for b in combo)
        if weight < best[total]:
            best[total] = weight
    return tuple(best)


@lru_cache(maxsize=16)
def _table(q: int, t: int) -> OccupancyTable:
    return OccupancyTable(q, t)

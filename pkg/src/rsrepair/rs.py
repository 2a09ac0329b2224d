"""Reed-Solomon codes RS(A, k) over a field tower and their GRS duals."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import poly
from .field import FieldTower, tower_from_spec


class CodeError(ValueError):
    pass


class InvalidCheckError(CodeError):
    """A candidate check polynomial has degree >= r."""


def dual_multipliers(tower: FieldTower, points: Sequence[int]) -> list[int]:
    """lambda_j = prod_{i != j} (a_j - a_i)^-1, normalized to all-ones at full length.

    At full length every product equals the same constant, so scaling by
    its inverse keeps the dual code and gives lambda = 1 everywhere.
    """
    n = len(points)
    if n < 2:
        raise CodeError("need at least two evaluation points")
    if n == tower.order:
        return [1] * n
    lam = []
    for j, aj in enumerate(points):
        d = 1
        for i, ai in enumerate(points):
            if i != j:
                d = tower.mul(d, tower.sub(aj, ai))
        lam.append(tower.inv(d))
    return lam


@dataclass(frozen=True)
class RSCodeSpec:
    tower: FieldTower
    points: tuple[int, ...]
    k: int
    lam: tuple[int, ...] = field(default=())

    def __post_init__(self):
        pts = tuple(int(a) for a in self.points)
        object.__setattr__(self, "points", pts)
        n = len(pts)
        if len(set(pts)) != n:
            raise CodeError("evaluation points must be distinct")
        if any(not 0 <= a < self.tower.order for a in pts):
            raise CodeError("evaluation point outside the field")
        if not 1 <= self.k < n:
            raise CodeError(f"need 1 <= k < n, got k={self.k}, n={n}")
        if not self.lam:
            object.__setattr__(self, "lam", tuple(dual_multipliers(self.tower, pts)))
        if len(self.lam) != n or any(x == 0 for x in self.lam):
            raise CodeError("dual multipliers must be n nonzero elements")

    @property
    def n(self) -> int:
        return len(self.points)

    @property
    def r(self) -> int:
        return self.n - self.k

    @property
    def full_length(self) -> bool:
        return self.n == self.tower.order

    def index(self, alpha: int) -> int:
        try:
            return self.points.index(alpha)
        except ValueError:
            raise CodeError(f"{alpha} is not an evaluation point") from None

    def to_json(self) -> dict:
        pts = "full" if self.points == tuple(self.tower.canonical_points()) else list(self.points)
        return {"field": self.tower.spec(), "points": pts, "k": self.k}


def full_length_code(tower: FieldTower, k: int) -> RSCodeSpec:
    return RSCodeSpec(tower, tuple(tower.canonical_points()), k)


def code_from_json(obj: dict, tower: FieldTower | None = None) -> RSCodeSpec:
    tower = tower or tower_from_spec(obj["field"])
    pts = obj.get("points", "full")
    if pts == "full":
        pts = tower.canonical_points()
    else:
        pts = [p if isinstance(p, int) else tower.from_coeffs(p) for p in pts]
    return RSCodeSpec(tower, tuple(pts), int(obj["k"]))


@dataclass(frozen=True)
class Codeword:
    spec: RSCodeSpec
    values: tuple[int, ...]
    message: tuple[int, ...] | None = None

    def __getitem__(self, alpha: int) -> int:
        return self.values[self.spec.index(alpha)]

    def to_json(self) -> list[int]:
        return list(self.values)


def encode(spec: RSCodeSpec, message: Sequence[int]) -> Codeword:
    """Evaluate f(x) = sum(message[i] x^i) at every point of A."""
    if len(message) != spec.k:
        raise CodeError(f"message must have k={spec.k} coefficients, got {len(message)}")
    tw = spec.tower
    msg = tuple(int(c) for c in message)
    values = tuple(poly.evaluate(tw, msg, a) for a in spec.points)
    return Codeword(spec, values, msg)


def encode_many(spec: RSCodeSpec, messages: np.ndarray) -> np.ndarray:
    """Vectorized encode of messages with shape (N, k) into codewords (N, n)."""
    tw = spec.tower
    msgs = np.asarray(messages, dtype=np.int64)
    pts = np.asarray(spec.points, dtype=np.int64)
    acc = np.zeros((msgs.shape[0], pts.size), dtype=np.int64)
    for i in range(spec.k - 1, -1, -1):
        acc = tw.vadd(tw.vmul(acc, pts[None, :]), msgs[:, i : i + 1])
    return acc


def random_message(spec: RSCodeSpec, rng) -> list[int]:
    return [int(x) for x in rng.integers(0, spec.tower.order, size=spec.k)]


def verify_check(spec: RSCodeSpec, word: Codeword | Sequence[int], g: Sequence[int]) -> bool:
    """True iff sum_a g(a) * lambda_a * c_a = 0 for the polynomial ``g`` (low degree first)."""
    g = poly.trim(g)
    if len(g) - 1 >= spec.r:
        raise InvalidCheckError(f"check polynomial degree {len(g) - 1} exceeds r - 1 = {spec.r - 1}")
    tw = spec.tower
    values = word.values if isinstance(word, Codeword) else tuple(word)
    acc = 0
    for a, lam, c in zip(spec.points, spec.lam, values):
        acc = tw.add(acc, tw.mul(poly.evaluate(tw, g, a), tw.mul(lam, c)))
    return acc == 0


def interpolate_at(spec: RSCodeSpec, known: dict[int, int], target: int) -> int:
    """Value at ``target`` of the degree < k polynomial through k known (point, value) pairs."""
    if len(known) < spec.k:
        raise CodeError(f"need {spec.k} known symbols, got {len(known)}")
    tw = spec.tower
    xs = list(known)[: spec.k]
    acc = 0
    for i, xi in enumerate(xs):
        num, den = 1, 1
        for j, xj in enumerate(xs):
            if j != i:
                num = tw.mul(num, tw.sub(target, xj))
                den = tw.mul(den, tw.sub(xi, xj))
        acc = tw.add(acc, tw.mul(known[xi], tw.div(num, den)))
    return acc

"""Check-polynomial families for repairing one erased RS symbol.

Every family yields polynomials g_1..g_d (d = [F : K] for the sub-symbol
field K) of degree <= r - 1.  They are kept in the closed forms their
constructions give; ``coefficients()`` expands them densely for
cross-checking against the RS dual code.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import linearized, poly
from .field import Felt, FieldTower, Subfield
from .rs import RSCodeSpec


class SchemeError(ValueError):
    """A construction's precondition does not hold."""

    def __init__(self, message: str, precondition: str):
        super().__init__(message)
        self.precondition = precondition


class ConsistencyError(RuntimeError):
    """Two routes to the same quantity disagree."""


def _val(x) -> int:
    return x.value if isinstance(x, Felt) else int(x)


class CheckPolynomial:
    degree: int

    def __call__(self, x: int) -> int:
        raise NotImplementedError

    def evaluate(self, xs: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def coefficients(self) -> list[int]:
        raise NotImplementedError


class QuotientCheck(CheckPolynomial):
    """g(x) = L(u (x - a)) / (x - a) for a Q-linearized L = sum c_i y^(Q^i).

    In closed form g(x) = sum_i c_i u^(Q^i) (x - a)^(Q^i - 1), so g(a) = c_0 u.
    The field trace onto GF(Q) is the case c_i = 1.
    """

    def __init__(self, tower: FieldTower, Q: int, lin: Sequence[int], u: int, a: int):
        self.tower = tower
        self.Q = Q
        self.lin = list(lin)
        self.u = u
        self.a = a
        top = max(i for i, c in enumerate(self.lin) if c)
        self.degree = Q**top - 1

    def _L(self, y: int) -> int:
        tw = self.tower
        acc = 0
        for c in self.lin:
            if c:
                acc = tw.add(acc, tw.mul(c, y))
            y = tw.pow(y, self.Q)
        return acc

    def __call__(self, x: int) -> int:
        tw = self.tower
        if x == self.a:
            return tw.mul(self.lin[0], self.u)
        gamma = tw.sub(x, self.a)
        return tw.div(self._L(tw.mul(self.u, gamma)), gamma)

    def evaluate(self, xs: np.ndarray) -> np.ndarray:
        tw = self.tower
        xs = np.asarray(xs, dtype=np.int64)
        gamma = tw.vsub(xs, self.a)
        at_a = gamma == 0
        safe = np.where(at_a, 1, gamma)
        y = tw.vmul(self.u, safe)
        acc = np.zeros_like(xs)
        for c in self.lin:
            if c:
                acc = tw.vadd(acc, tw.vmul(c, y))
            y = tw.vpow(y, self.Q)
        out = tw.vmul(acc, tw.vinv(safe))
        return np.where(at_a, tw.mul(self.lin[0], self.u), out)

    def coefficients(self) -> list[int]:
        """Dense coefficients from the closed form, checked by exact division."""
        tw = self.tower
        out = [0] * (self.degree + 1)
        numer = [0] * (self.degree + 2)
        uq = self.u
        for i, c in enumerate(self.lin):
            N = self.Q**i
            if c:
                cu = tw.mul(c, uq)
                aN = tw.pow(self.a, N)
                # (x - a)^(N-1) = sum_j x^j a^(N-1-j)
                for j in range(N):
                    out[j] = tw.add(out[j], tw.mul(cu, tw.pow(self.a, N - 1 - j)))
                # c u^N (x^N - a^N)
                numer[N] = tw.add(numer[N], cu)
                numer[0] = tw.sub(numer[0], tw.mul(cu, aN))
            uq = tw.pow(uq, self.Q)
        quot, rem = poly.divmod_(tw, numer, [tw.neg(self.a), 1])
        if rem:
            raise ConsistencyError("L(u(x - a)) is not divisible by (x - a)")
        out = poly.trim(out)
        if quot != out:
            raise ConsistencyError("closed form disagrees with polynomial division")
        return out


class LinearCheck(CheckPolynomial):
    """g(x) = beta (x - z)."""

    def __init__(self, tower: FieldTower, beta: int, z: int):
        self.tower = tower
        self.beta = beta
        self.z = z
        self.degree = 1

    def __call__(self, x: int) -> int:
        return self.tower.mul(self.beta, self.tower.sub(x, self.z))

    def evaluate(self, xs):
        tw = self.tower
        return tw.vmul(self.beta, tw.vsub(np.asarray(xs, dtype=np.int64), self.z))

    def coefficients(self) -> list[int]:
        tw = self.tower
        return poly.trim([tw.mul(self.beta, tw.neg(self.z)), self.beta])


class InverseSubspaceCheck(CheckPolynomial):
    """g(x) = beta prod_{w in W*} (x - (a - beta / w)).

    Evaluated through g(x) = M gamma^(q^s) L_W(beta / gamma) with
    gamma = a - x and M = prod_{w in W*} w^-1; g(a) = M beta^(q^s).
    """

    def __init__(self, tower: FieldTower, beta: int, a: int, lin: Sequence[int], nonzero_w: Sequence[int], M: int):
        self.tower = tower
        self.beta = beta
        self.a = a
        self.lin = list(lin)
        self.nonzero_w = list(nonzero_w)
        self.M = M
        self.qs = tower.q ** (len(self.lin) - 1)
        self.degree = self.qs - 1

    def __call__(self, x: int) -> int:
        tw = self.tower
        if x == self.a:
            return tw.mul(self.M, tw.pow(self.beta, self.qs))
        gamma = tw.sub(self.a, x)
        lw = linearized.evaluate(tw, self.lin, tw.div(self.beta, gamma))
        return tw.mul(tw.mul(self.M, tw.pow(gamma, self.qs)), lw)

    def evaluate(self, xs):
        tw = self.tower
        xs = np.asarray(xs, dtype=np.int64)
        gamma = tw.vsub(self.a, xs)
        at_a = gamma == 0
        safe = np.where(at_a, 1, gamma)
        lw = linearized.vevaluate(tw, self.lin, tw.vmul(self.beta, tw.vinv(safe)))
        out = tw.vmul(tw.vmul(self.M, tw.vpow(safe, self.qs)), lw)
        return np.where(at_a, tw.mul(self.M, tw.pow(self.beta, self.qs)), out)

    def direct(self, x: int) -> int:
        """The defining product, term by term."""
        tw = self.tower
        acc = self.beta
        for w in self.nonzero_w:
            root = tw.sub(self.a, tw.div(self.beta, w))
            acc = tw.mul(acc, tw.sub(x, root))
        return acc

    def coefficients(self) -> list[int]:
        tw = self.tower
        roots = [tw.sub(self.a, tw.div(self.beta, w)) for w in self.nonzero_w]
        return poly.scale(tw, poly.from_roots(tw, roots), self.beta)


@dataclass
class RepairScheme:
    """Check polynomials aimed at one erased point, over sub-symbol field K."""

    spec: RSCodeSpec
    alpha_star: int
    checks: list[CheckPolynomial]
    subfield: Subfield
    kind: str
    params: dict = field(default_factory=dict)

    @property
    def tower(self) -> FieldTower:
        return self.spec.tower

    def column(self, alpha: int) -> list[int]:
        return [g(alpha) for g in self.checks]

    def columns(self, points: Sequence[int] | None = None) -> np.ndarray:
        """Matrix of evaluations with shape (len(points), number of checks)."""
        pts = np.asarray(self.spec.points if points is None else points, dtype=np.int64)
        if self.tower.has_tables:
            return np.stack([g.evaluate(pts) for g in self.checks], axis=1)
        return np.array([[g(int(a)) for g in self.checks] for a in pts], dtype=np.int64)

    def star_rank(self) -> int:
        return self.subfield.rank(self.column(self.alpha_star))

    def is_valid(self) -> bool:
        return (
            len(self.checks) == self.subfield.degree
            and all(g.degree <= self.spec.r - 1 for g in self.checks)
            and self.star_rank() == self.subfield.degree
        )

    def validate(self) -> "RepairScheme":
        if any(g.degree > self.spec.r - 1 for g in self.checks):
            raise SchemeError("check polynomial degree exceeds r - 1", "deg(g_i) <= r - 1")
        if self.star_rank() != self.subfield.degree:
            raise SchemeError(
                "check values at the erased point do not span F over the sub-symbol field",
                f"rank of {{g_i(alpha*)}} = {self.subfield.degree}",
            )
        return self

    def describe(self) -> dict:
        tw = self.tower
        out = {"kind": self.kind, "alpha_star": self.alpha_star, "subfield_order": self.subfield.order}
        for key, val in self.params.items():
            out[key] = [int(v) for v in val] if isinstance(val, (list, tuple)) else val
        out["degrees"] = [g.degree for g in self.checks]
        out["field"] = tw.spec()
        return out


def _check_point(spec: RSCodeSpec, alpha_star: int) -> int:
    a = _val(alpha_star)
    if a not in spec.points:
        raise SchemeError(f"{a} is not an evaluation point", "alpha* in A")
    return a


def polynomial_basis(tower: FieldTower) -> list[int]:
    return [tower.q**i for i in range(tower.t)]


def _basis_over(tower: FieldTower, sub: Subfield, basis, name: str) -> list[int]:
    if basis is None:
        if sub.is_base:
            basis = polynomial_basis(tower)
        else:
            basis = [tower.pow(tower.primitive, i) for i in range(sub.degree)]
    basis = [_val(b) for b in basis]
    if len(basis) != sub.degree or sub.rank(basis) != sub.degree:
        raise SchemeError(f"{name} is not a basis of F over GF({sub.order})", f"{name} is a basis")
    return basis


def _subspace(tower: FieldTower, s: int, W) -> list[int]:
    if not 1 <= s < tower.t:
        raise SchemeError(f"need 1 <= s < t, got s={s}, t={tower.t}", "1 <= s < t")
    gens = linearized.default_subspace(tower, s) if W is None else [_val(w) for w in W]
    if len(gens) != s or tower.rank_over_base(gens) != s:
        raise SchemeError(f"W must be an {s}-dimensional subspace over B", "dim(W) = s")
    return gens


def _check_redundancy(spec: RSCodeSpec, need: int, label: str) -> None:
    if spec.r < need:
        shown = label if label == str(need) else f"{label} = {need}"
        raise SchemeError(f"redundancy r = {spec.r} is below {shown}", f"r = n - k >= {label}")


def gw_check(tower: FieldTower, u, alpha, s: int | None = None) -> QuotientCheck:
    """g_{u,a}(x) = Tr(u (x - a)) / (x - a) with the trace onto GF(q^(t-s)).

    ``s`` defaults to t - 1, i.e. the trace onto B itself.
    """
    s = tower.t - 1 if s is None else s
    if not 0 <= s < tower.t or tower.t % (tower.t - s):
        raise SchemeError(f"(t - s) = {tower.t - s} does not divide t = {tower.t}", "(t - s) | t")
    u, alpha = _val(u), _val(alpha)
    if u == 0:
        raise SchemeError("u must be nonzero", "u != 0")
    sub = tower.subfield(tower.m * (tower.t - s))
    return QuotientCheck(tower, sub.order, [1] * sub.degree, u, alpha)


def build_gw_scheme(spec: RSCodeSpec, alpha_star, s: int | None = None, basis=None) -> RepairScheme:
    """Trace repair over K = GF(q^(t-s)); needs (t - s) | t and r >= q^s."""
    tw = spec.tower
    s = tw.t - 1 if s is None else s
    if not 1 <= s < tw.t:
        raise SchemeError(f"need 1 <= s < t, got s={s}, t={tw.t}", "1 <= s < t")
    if tw.t % (tw.t - s):
        raise SchemeError(f"(t - s) = {tw.t - s} does not divide t = {tw.t}", "(t - s) | t")
    _check_redundancy(spec, tw.q**s, "q^s")
    a = _check_point(spec, alpha_star)
    sub = tw.subfield(tw.m * (tw.t - s))
    us = _basis_over(tw, sub, basis, "U")
    checks = [gw_check(tw, u, a, s) for u in us]
    return RepairScheme(spec, a, checks, sub, "gw", {"s": s, "U": us}).validate()


def build_construction_I(spec: RSCodeSpec, alpha_star, z=None) -> RepairScheme:
    """g_i(x) = beta_i (x - z_i) with beta_i = a* - z_i a basis of F over GF(2)."""
    tw = spec.tower
    if tw.q != 2:
        raise SchemeError(f"needs q = 2, got q = {tw.q}", "q = 2")
    _check_redundancy(spec, 2, "2")
    a = _check_point(spec, alpha_star)
    if z is None:
        z = [tw.sub(a, u) for u in polynomial_basis(tw)]
    z = [_val(x) for x in z]
    betas = [tw.sub(a, x) for x in z]
    if len(z) != tw.t or tw.rank_over_base(betas) != tw.t:
        raise SchemeError("{a* - z_i} is not a basis of F over GF(2)", "{a* - z_i} is a basis")
    checks = [LinearCheck(tw, b, x) for b, x in zip(betas, z)]
    return RepairScheme(spec, a, checks, tw.base_subfield, "c1", {"z": z}).validate()


def build_construction_II(spec: RSCodeSpec, alpha_star, s: int, beta=None, W=None) -> RepairScheme:
    tw = spec.tower
    gens = _subspace(tw, s, W)
    _check_redundancy(spec, tw.q**s, "q^s")
    a = _check_point(spec, alpha_star)
    betas = _basis_over(tw, tw.base_subfield, beta, "beta")
    lin = linearized.subspace_coeffs(tw, gens)
    nonzero = [w for w in linearized.span(tw, gens) if w]
    prod_w = 1
    for w in nonzero:
        prod_w = tw.mul(prod_w, w)
    M = tw.inv(prod_w)
    checks = [InverseSubspaceCheck(tw, b, a, lin, nonzero, M) for b in betas]
    params = {"s": s, "beta": betas, "W": gens, "M": M}
    return RepairScheme(spec, a, checks, tw.base_subfield, "c2", params).validate()


def build_construction_III(spec: RSCodeSpec, alpha_star, s: int, U=None, W=None) -> RepairScheme:
    tw = spec.tower
    gens = _subspace(tw, s, W)
    _check_redundancy(spec, tw.q**s, "q^s")
    a = _check_point(spec, alpha_star)
    us = _basis_over(tw, tw.base_subfield, U, "U")
    lin = linearized.subspace_coeffs(tw, gens)
    checks = [QuotientCheck(tw, tw.q, lin, u, a) for u in us]
    params = {"s": s, "U": us, "W": gens, "tau": lin[0]}
    return RepairScheme(spec, a, checks, tw.base_subfield, "c3", params).validate()


KINDS = ("gw", "c1", "c2", "c3")


def default_s(kind: str, spec: RSCodeSpec) -> int:
    """Largest admissible s for the construction, given r."""
    tw = spec.tower
    for s in range(tw.t - 1, 0, -1):
        if tw.q**s > spec.r:
            continue
        if kind == "gw" and tw.t % (tw.t - s):
            continue
        return s
    if kind == "gw":
        raise SchemeError("no s with (t - s) | t and q^s <= r", "r >= q^s with (t - s) | t")
    raise SchemeError(f"redundancy r = {spec.r} is below q = {tw.q}", "r = n - k >= q^s, s >= 1")


def build_scheme(kind: str, spec: RSCodeSpec, alpha_star, s: int | None = None, **params) -> RepairScheme:
    if kind == "c1":
        return build_construction_I(spec, alpha_star, params.get("z"))
    if kind not in KINDS:
        raise SchemeError(f"unknown scheme kind {kind!r}", f"kind in {KINDS}")
    if s is None:
        s = default_s(kind, spec)
    if kind == "gw":
        return build_gw_scheme(spec, alpha_star, s, params.get("basis"))
    if kind == "c2":
        return build_construction_II(spec, alpha_star, s, params.get("beta"), params.get("W"))
    return build_construction_III(spec, alpha_star, s, params.get("U"), params.get("W"))

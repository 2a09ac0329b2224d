"""Executable property suites behind ``rsrepair verify``.

Each suite returns (ok, detail).  Suites that take a field run on the
given tower, or on a default family of small towers.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import bounds, linearized, rs
from .field import FieldTower, build_tower
from .render import scheme_table
from .repair import bandwidth_profile, compile_plan, execute_batch, helper_ranks
from .schemes import (
    SchemeError,
    build_construction_I,
    build_construction_II,
    build_construction_III,
    build_gw_scheme,
    gw_check,
    polynomial_basis,
)

SMALL = [(2, 1, 2), (2, 1, 3), (2, 1, 4), (3, 1, 2), (3, 1, 3), (2, 2, 2), (2, 1, 6), (2, 2, 3), (2, 3, 2), (5, 1, 2)]

GF8_TABLE_ROWS = [
    ["1", "·", "ξ^3", "ξ^6", "ξ", "ξ^5", "ξ^4", "ξ^2"],
    ["ξ^2", "ξ^4", "·", "ξ^5", "ξ", "ξ^3", "1", "ξ^6"],
    ["ξ^4", "ξ", "ξ^6", "·", "1", "ξ^3", "ξ^5", "ξ^2"],
]
GF8_TABLE_RANKS = [3, 2, 2, 2, 2, 2, 2, 2]


@dataclass
class SuiteResult:
    name: str
    ok: bool
    detail: str
    seconds: float


def _towers(field: FieldTower | None, limit: int = 64) -> list[FieldTower]:
    if field is not None:
        return [field]
    return [build_tower(*a) for a in SMALL if a[0] ** (a[1] * a[2]) <= limit]


def suite_gf8_table(field=None, **_) -> tuple[bool, str]:
    tw = build_tower(2, 1, 3)
    if field is not None and field != tw:
        return False, "this suite needs GF(8) with modulus x^3 + x + 1"
    xi = tw.primitive
    spec = rs.full_length_code(tw, 6)
    scheme = build_construction_I(spec, 0, [1, xi, tw.pow(xi, 2)])
    table = scheme_table(scheme)
    rows = [r["values"] for r in table["rows"]]
    bits = bandwidth_profile(scheme).total_bits
    ok = rows == GF8_TABLE_ROWS and table["ranks"] == GF8_TABLE_RANKS and bits == 14
    return ok, f"ranks={table['ranks']} bits={bits:g}"


def suite_field(field=None, **_) -> tuple[bool, str]:
    checked = 0
    for tw in _towers(field):
        sub = tw.base_subfield
        xs = range(tw.order) if tw.order <= 256 else np.random.default_rng(0).integers(0, tw.order, 64)
        for x in xs:
            x = int(x)
            tr = tw.trace(x)
            if tr >= tw.q:
                return False, f"Tr({x}) not in B over {tw}"
            for a in range(tw.q):
                if tw.trace(tw.mul(a, x)) != tw.mul(a, tr):
                    return False, f"trace not B-linear over {tw}"
        fixed = [x for x in range(tw.order) if tw.frob(x) == x]
        if fixed != list(range(tw.q)):
            return False, f"Frobenius fixes {len(fixed)} elements of {tw}"
        u = polynomial_basis(tw)
        dual = sub.dual_basis(u)
        for x in range(min(tw.order, 512)):
            if tw.sum(tw.mul(sub.trace(tw.mul(a, x)), b) for a, b in zip(u, dual)) != x:
                return False, f"dual-basis reconstruction fails over {tw}"
        if sub.dual_basis(dual) != u:
            return False, "dual of dual is not the identity"
        checked += 1
    return True, f"{checked} towers"


def suite_trace_check(field=None, **_) -> tuple[bool, str]:
    rng = np.random.default_rng(1)
    n = 0
    for tw in _towers(field):
        for _ in range(20):
            u = int(rng.integers(1, tw.order))
            a = int(rng.integers(0, tw.order))
            g = gw_check(tw, u, a)
            coeffs = g.coefficients()
            if len(coeffs) - 1 != tw.q ** (tw.t - 1) - 1 or g(a) != u:
                return False, f"gw check degree/value wrong over {tw}"
            n += 1
    return True, f"{n} checks"


def _constructions(tw: FieldTower):
    """(label, builder(spec, a), helper-rank limit, redundancy) for every applicable construction."""
    out = []
    if tw.q == 2 and tw.t >= 2:
        out.append(("I", lambda spec, a: build_construction_I(spec, a), tw.t - 1, 2))
    for s in range(1, tw.t):
        out.append((f"II s={s}", lambda spec, a, s=s: build_construction_II(spec, a, s), tw.t - s, tw.q**s))
        out.append((f"III s={s}", lambda spec, a, s=s: build_construction_III(spec, a, s), tw.t - s, tw.q**s))
    return out


def suite_star_rank(field=None, **_) -> tuple[bool, str]:
    n = 0
    for tw in _towers(field):
        for label, build, _, r in _constructions(tw):
            spec = rs.full_length_code(tw, tw.order - r)
            for a in spec.points:
                scheme = build(spec, a)
                if scheme.star_rank() != tw.t:
                    return False, f"construction {label} rank < t at {a} over {tw}"
                n += 1
    return True, f"{n} schemes"


def suite_helper_rank(field=None, **_) -> tuple[bool, str]:
    n = 0
    for tw in _towers(field):
        for label, build, limit, r in _constructions(tw):
            spec = rs.full_length_code(tw, tw.order - r)
            for a in spec.points[:: max(1, tw.order // 8)]:
                scheme = build(spec, a)
                ranks = helper_ranks(scheme)
                star = spec.index(a)
                if max(np.delete(ranks, star)) > limit:
                    return False, f"construction {label} helper rank above {limit} over {tw}"
                n += 1
    return True, f"{n} schemes"


def suite_kernel_image(field=None, **_) -> tuple[bool, str]:
    n = 0
    for tw in _towers(field):
        for s in range(1, tw.t):
            for gens in linearized.all_subspaces(tw, s):
                lin = linearized.subspace_coeffs(tw, gens)
                ker, dim = linearized.kernel_and_image_dim(tw, lin)
                if ker != set(linearized.span(tw, gens)) or dim != tw.t - s:
                    return False, f"L_W kernel/image wrong over {tw}"
                n += 1
    return True, f"{n} subspaces"


def suite_oracle(**_) -> tuple[bool, str]:
    n = 0
    for q in (2, 3, 4):
        for t in range(1, 5):
            table = bounds.OccupancyTable(q, t)
            for nn in range(2, q**t + 1):
                for r in range(1, nn):
                    if table.minimum(nn, r) != bounds.integral_lower_bound(nn, q, t, r).integral_bound_subsymbols:
                        return False, f"mismatch at n={nn} q={q} t={t} r={r}"
                    n += 1
    return True, f"{n} parameter sets"


def optimality_configs(max_field: int = 1 << 16):
    for q, p, m in ((2, 2, 1), (3, 3, 1), (4, 2, 2), (5, 5, 1)):
        for t in range(2, 9):
            if q**t > max_field:
                break
            yield p, m, t


def suite_optimality(max_field: int = 1 << 16, **_) -> tuple[bool, str]:
    n = 0
    for p, m, t in optimality_configs(max_field):
        tw = build_tower(p, m, t)
        for s in range(1, t):
            spec = rs.full_length_code(tw, tw.order - tw.q**s)
            want = (tw.order - 1) * (t - s)
            bound = bounds.integral_lower_bound(tw.order, tw.q, t, tw.q**s).integral_bound_subsymbols
            for build in (build_construction_II, build_construction_III):
                got = bandwidth_profile(build(spec, 0, s)).total_subsymbols
                if got != want or bound != want:
                    return False, f"{build.__name__} over GF({tw.order}) s={s}: {got} vs {want}"
                n += 1
    return True, f"{n} schemes at (n-1)(t-s)"


def suite_gw_parity(max_field: int = 1 << 16, **_) -> tuple[bool, str]:
    n = refused = 0
    for p, m, t in optimality_configs(max_field):
        tw = build_tower(p, m, t)
        for s in range(1, t):
            spec = rs.full_length_code(tw, tw.order - tw.q**s)
            want = (tw.order - 1) * (t - s)
            if t % (t - s) == 0:
                prof = bandwidth_profile(build_gw_scheme(spec, 0, s))
                if prof.total_base_subsymbols != want:
                    return False, f"GW over GF({tw.order}) s={s}: {prof.total_base_subsymbols} vs {want}"
                n += 1
            else:
                try:
                    build_gw_scheme(spec, 0, s)
                    return False, f"GW accepted (t-s) not dividing t at GF({tw.order}) s={s}"
                except SchemeError:
                    refused += 1
                if bandwidth_profile(build_construction_III(spec, 0, s)).total_subsymbols != want:
                    return False, "construction III missed (n-1)(t-s)"
    return True, f"{n} GW schemes optimal, {refused} correctly refused"


def suite_repair(field=None, seed: int = 0, **_) -> tuple[bool, str]:
    rng = np.random.default_rng(seed)
    n = 0
    for tw in _towers(field, limit=32):
        for label, build, _, r in _constructions(tw):
            spec = rs.full_length_code(tw, tw.order - r)
            msgs = rng.integers(0, tw.order, size=(100, spec.k))
            words = rs.encode_many(spec, msgs)
            for idx, a in enumerate(spec.points):
                got = execute_batch(compile_plan(build(spec, a)), words)
                if not np.array_equal(got, words[:, idx]):
                    return False, f"construction {label} failed to repair {a} over {tw}"
                n += 1
    return True, f"{n} schemes x 100 messages"


def suite_soundness(seed: int = 0, **_) -> tuple[bool, str]:
    from .sim import sweep

    configs = [
        {"p": 2, "t": 3, "r": 2, "scheme": "c1"},
        {"p": 2, "t": 4, "r": 4, "scheme": "c3"},
        {"p": 2, "t": 4, "n": 12, "r": 4, "scheme": "c2"},
        {"p": 3, "t": 2, "r": 3, "scheme": "gw"},
        {"p": 2, "t": 3, "r": 2, "scheme": "naive"},
    ]
    report = sweep(configs, trials=3, seed=seed)
    ok = report.sound and all(row.all_correct for row in report.rows)
    return ok, f"{len(report.rows)} rows, sound={report.sound}"


SUITES: dict[str, Callable[..., tuple[bool, str]]] = {
    "fig1": suite_gf8_table,
    "field": suite_field,
    "trace-check": suite_trace_check,
    "star-rank": suite_star_rank,
    "helper-rank": suite_helper_rank,
    "lemma7": suite_kernel_image,
    "oracle": suite_oracle,
    "optimality": suite_optimality,
    "gw-parity": suite_gw_parity,
    "repair": suite_repair,
    "soundness": suite_soundness,
}
FIELD_FREE = {"oracle", "optimality", "gw-parity", "soundness"}


def run_suites(only=None, field: FieldTower | None = None, seed: int = 0, max_field: int = 1 << 16) -> list[SuiteResult]:
    names = list(only) if only else list(SUITES)
    if field is not None and not only:
        names = [n for n in names if n not in FIELD_FREE]
    results = []
    for name in names:
        start = time.perf_counter()
        try:
            ok, detail = SUITES[name](field=field, seed=seed, max_field=max_field)
        except Exception as exc:  # a crash is a suite failure, reported with its message
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        results.append(SuiteResult(name, ok, detail, time.perf_counter() - start))
    return results

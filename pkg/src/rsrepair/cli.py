"""Command line: field, bound, scheme build|table, simulate, verify.

Exit codes: 0 success, 1 verification failure, 2 usage error or refused precondition.
"""

from __future__ import annotations

import json
import re
import sys
from pathlib import Path

import click
import numpy as np

from . import bounds, rs
from .field import FieldError, FieldTower, build_tower, tower_from_spec
from .render import TableTooLarge, render_text, scheme_table
from .repair import bandwidth_profile
from .schemes import SchemeError, build_scheme
from .sim import SCHEME_KINDS, sweep
from .verify import SUITES, run_suites

FORMATS = click.Choice(["text", "json"])


def _emit(obj) -> None:
    click.echo(json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False))


def parse_field(text: str) -> FieldTower:
    """'p=2,m=1,t=3' (m defaults to 1) or a path to a field JSON file."""
    if Path(text).is_file():
        return tower_from_spec(json.loads(Path(text).read_text()))
    try:
        parts = dict(item.split("=", 1) for item in text.split(","))
        return build_tower(int(parts["p"]), int(parts.get("m", 1)), int(parts["t"]))
    except (KeyError, ValueError) as exc:
        if isinstance(exc, FieldError):
            raise click.UsageError(str(exc))
        raise click.UsageError(f"cannot parse field {text!r}; expected p=..,m=..,t=..")


_POW = re.compile(r"^(?:xi|ξ)(?:\^(\d+))?$")


def parse_element(tower: FieldTower, text: str) -> int:
    """A packed int, or a power of the primitive element written xi^k."""
    text = text.strip()
    m = _POW.match(text)
    if m:
        return tower.xi_pow(int(m.group(1) or 1))
    try:
        v = int(text)
    except ValueError:
        raise click.UsageError(f"cannot parse field element {text!r}")
    if not 0 <= v < tower.order:
        raise click.UsageError(f"{v} is not an element of GF({tower.order})")
    return v


def _elements(tower, text):
    if text is None:
        return None
    return [parse_element(tower, x) for x in text.split(",") if x.strip()]


def _code(field, code_path, n, k, r) -> rs.RSCodeSpec:
    if field and code_path:
        raise click.UsageError("--field and --code are mutually exclusive")
    if code_path:
        if n is not None or k is not None or r is not None:
            raise click.UsageError("--code already fixes n and k")
        return rs.code_from_json(json.loads(Path(code_path).read_text()))
    if not field:
        raise click.UsageError("one of --field or --code is required")
    if (k is None) == (r is None):
        raise click.UsageError("give exactly one of --k or --r")
    tw = parse_field(field)
    pts = tw.canonical_points()
    if n is not None:
        if not 2 <= n <= tw.order:
            raise click.UsageError(f"need 2 <= n <= {tw.order}")
        pts = pts[:n]
    k = k if k is not None else len(pts) - r
    try:
        return rs.RSCodeSpec(tw, tuple(pts), k)
    except rs.CodeError as exc:
        raise click.UsageError(str(exc))


def _refuse(exc: SchemeError):
    click.echo(f"refused: precondition {exc.precondition!r} does not hold ({exc})", err=True)
    sys.exit(2)


@click.group()
def main():
    """Bandwidth-efficient repair of Reed-Solomon codes."""


@main.command()
@click.option("--field", "field_text", required=True, help="p=..,m=..,t=.. or a field JSON file")
@click.option("--format", "fmt", type=FORMATS, default="text", show_default=True)
def field(field_text, fmt):
    """Build a field tower and show its parameters."""
    tw = parse_field(field_text)
    info = dict(tw.spec(), order=tw.order, q=tw.q, primitive=tw.primitive, tables=tw.has_tables)
    if fmt == "json":
        _emit(info)
        return
    click.echo(f"F = GF({tw.order}) = GF({tw.q}^{tw.t}), B = GF({tw.q}), p = {tw.p}")
    click.echo(f"base modulus (low first): {info['base_modulus']}")
    click.echo(f"extension modulus (low first): {info['ext_modulus']}")
    click.echo(f"primitive element: {tw.primitive} (packed)")


@main.command()
@click.option("--n", type=int, required=True)
@click.option("--q", type=int, required=True)
@click.option("--t", type=int, required=True)
@click.option("--r", type=int, required=True)
@click.option("--subfield-degree", type=int, default=None,
              help="repair over GF(q^e) instead of GF(q); e must divide t")
@click.option("--format", "fmt", type=FORMATS, default="text", show_default=True)
def bound(n, q, t, r, subfield_degree, fmt):
    """Integral and fractional lower bounds on repair bandwidth."""
    if subfield_degree is not None:
        if subfield_degree < 1 or t % subfield_degree:
            raise click.UsageError("--subfield-degree must divide t")
        q, t = q**subfield_degree, t // subfield_degree
    try:
        report = bounds.integral_lower_bound(n, q, t, r)
    except bounds.BoundError as exc:
        raise click.UsageError(str(exc))
    if fmt == "json":
        _emit(report.to_json())
    else:
        click.echo(report.summary())


def scheme_options(f):
    opts = [
        click.option("--field", "field_text", default=None, help="p=..,m=..,t=.."),
        click.option("--code", "code_path", default=None, type=click.Path(exists=True), help="code JSON file"),
        click.option("--n", type=int, default=None, help="code length (first n points of 0, 1, xi, ...)"),
        click.option("--k", type=int, default=None),
        click.option("--r", type=int, default=None),
        click.option("--kind", type=click.Choice(["gw", "c1", "c2", "c3"]), default="c3", show_default=True),
        click.option("--alpha-star", default="0", show_default=True, help="erased point: packed int or xi^k"),
        click.option("--s", type=int, default=None, help="subspace dimension (default: largest admissible)"),
        click.option("--basis", default=None, help="comma-separated basis U / beta"),
        click.option("--W", "w_text", default=None, help="comma-separated subspace generators"),
        click.option("--z", "z_text", default=None, help="comma-separated points z_i (construction I)"),
        click.option("--format", "fmt", type=FORMATS, default="text", show_default=True),
    ]
    for opt in reversed(opts):
        f = opt(f)
    return f


def _build(field_text, code_path, n, k, r, kind, alpha_star, s, basis, w_text, z_text):
    spec = _code(field_text, code_path, n, k, r)
    tw = spec.tower
    params = {}
    if basis:
        params[{"gw": "basis", "c2": "beta", "c3": "U"}.get(kind, "basis")] = _elements(tw, basis)
    if w_text:
        params["W"] = _elements(tw, w_text)
    if z_text:
        params["z"] = _elements(tw, z_text)
    try:
        return build_scheme(kind, spec, parse_element(tw, alpha_star), s, **params)
    except SchemeError as exc:
        _refuse(exc)


@main.group()
def scheme():
    """Build repair schemes and tabulate their check polynomials."""


def _search_basis(sch, tries: int, seed: int):
    """Try random bases (and subspaces W) for the same construction and keep the cheapest.

    No optimality is claimed; this only explores alternatives on shortened codes.
    """
    key = {"gw": "basis", "c2": "beta", "c3": "U"}.get(sch.kind)
    best, best_cost = sch, bandwidth_profile(sch).total_subsymbols
    if key is None:
        return best
    tw, sub = sch.tower, sch.subfield
    rng = np.random.default_rng(seed)
    for _ in range(tries):
        basis = [int(x) for x in rng.integers(1, tw.order, size=sub.degree)]
        if sub.rank(basis) < sub.degree:
            continue
        s = sch.params.get("s")
        extra = {}
        if "W" in sch.params:
            W = [int(x) for x in rng.integers(1, tw.order, size=s)]
            if tw.rank_over_base(W) < s:
                continue
            extra["W"] = W
        cand = build_scheme(sch.kind, sch.spec, sch.alpha_star, s, **{key: basis}, **extra)
        cost = bandwidth_profile(cand).total_subsymbols
        if cost < best_cost:
            best, best_cost = cand, cost
    return best


@scheme.command("build")
@scheme_options
@click.option("--search", type=int, default=0, show_default=True,
              help="also try this many random bases and keep the cheapest")
@click.option("--seed", type=int, default=0, show_default=True)
def scheme_build(fmt, search, seed, **kw):
    """Build a scheme and report its bandwidth profile next to the integral lower bound."""
    sch = _build(**kw)
    if search:
        sch = _search_basis(sch, search, seed)
    prof = bandwidth_profile(sch)
    spec, tw = sch.spec, sch.tower
    bound = bounds.integral_lower_bound(spec.n, tw.q, tw.t, spec.r)
    out = {"scheme": sch.describe(), "profile": prof.to_json(),
           "bound": {"subsymbols": bound.integral_bound_subsymbols, "bits": bound.integral_bound_bits}}
    if fmt == "json":
        _emit(out)
        return
    click.echo(f"{sch.kind} scheme over GF({tw.order}), n={spec.n} k={spec.k} r={spec.r}, "
               f"alpha*={tw.format(sch.alpha_star)}, sub-symbols in GF({sch.subfield.order})")
    click.echo(f"bandwidth: {prof.total_subsymbols} sub-symbols = {prof.total_base_subsymbols} over "
               f"GF({tw.q}) = {prof.total_bits:g} bits")
    click.echo(f"integral lower bound: {bound.integral_bound_subsymbols} sub-symbols over GF({tw.q})")


@scheme.command("table")
@scheme_options
def scheme_table_cmd(fmt, **kw):
    """Table of check-polynomial values with a rank row, erased column starred."""
    sch = _build(**kw)
    table = scheme_table(sch)
    if fmt == "json":
        _emit(table)
        return
    try:
        click.echo(render_text(table))
    except TableTooLarge as exc:
        raise click.UsageError(str(exc))


@main.command()
@click.option("--code", "code_path", default=None, type=click.Path(exists=True), help="code JSON file")
@click.option("--field", "field_text", default=None, help="p=..,m=..,t=.. (with --n and --k or --r)")
@click.option("--n", type=int, default=None)
@click.option("--k", type=int, default=None)
@click.option("--r", type=int, default=None)
@click.option("--scheme", "kind", type=click.Choice(SCHEME_KINDS), default="c3", show_default=True)
@click.option("--s", type=int, default=None)
@click.option("--failed", default="all", show_default=True, help="node index or 'all'")
@click.option("--trials", type=int, default=10, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", "out", type=click.Path(), default=None, help="report.json or report.csv")
@click.option("--timing", is_flag=True, help="include wall-clock time in JSON output")
def simulate(code_path, field_text, n, k, r, kind, s, failed, trials, seed, out, timing):
    """Fail nodes of a simulated cluster and repair them, accounting every sub-symbol."""
    spec = _code(field_text, code_path, n, k, r)
    tw = spec.tower
    if failed != "all":
        try:
            idx = int(failed)
        except ValueError:
            raise click.UsageError("--failed takes a node index or 'all'")
        if not 0 <= idx < spec.n:
            raise click.UsageError(f"--failed must be in 0..{spec.n - 1}")
    cfg = {"name": "cli", "p": tw.p, "m": tw.m, "t": tw.t, "k": spec.k, "scheme": kind, "failed": failed}
    cfg["n"] = "full" if spec.full_length else spec.n
    if s is not None:
        cfg["s"] = s
    report = sweep([cfg], trials, seed, codes={"cli": spec})
    payload = report.to_csv() if out and out.endswith(".csv") else report.to_json(timing=timing)
    if out:
        Path(out).write_text(payload)
    rows = report.rows
    refused = [row for row in rows if row.refusal]
    if refused:
        click.echo(f"refused: precondition {refused[0].refusal!r} does not hold", err=True)
        sys.exit(2)
    if not out:
        click.echo(payload)
    worst = max((max(row.bits) for row in rows if row.bits), default=0)
    click.echo(f"{len(rows)} failed nodes x {trials} trials: all repaired={all(r.all_correct for r in rows)}, "
               f"max bits={worst:g}, sound={report.sound}", err=True)
    if not (report.sound and all(row.all_correct for row in rows)):
        sys.exit(1)


@main.command()
@click.option("--only", multiple=True, type=click.Choice(sorted(SUITES)), help="run only these suites")
@click.option("--field", "field_text", default=None, help="run field-specific suites on this field")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--max-field", type=int, default=1 << 16, show_default=True, help="largest |F| in sweeps")
@click.option("--format", "fmt", type=FORMATS, default="text", show_default=True)
def verify(only, field_text, seed, max_field, fmt):
    """Run the property suites; exit 1 if any fails."""
    tw = parse_field(field_text) if field_text else None
    results = run_suites(only, tw, seed, max_field)
    if fmt == "json":
        _emit([{"suite": r.name, "ok": r.ok, "detail": r.detail, "seconds": round(r.seconds, 3)} for r in results])
    else:
        for r in results:
            click.echo(f"{'PASS' if r.ok else 'FAIL'}  {r.name:<12} {r.seconds:7.2f}s  {r.detail}")
    if not all(r.ok for r in results):
        sys.exit(1)


if __name__ == "__main__":  # pragma: no cover
    main()

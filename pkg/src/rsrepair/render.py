"""Check-polynomial tables: rows are checks, columns evaluation points, last row ranks."""

from __future__ import annotations

import math

from .repair import helper_ranks
from .schemes import LinearCheck, RepairScheme

TEXT_LIMIT = 256
ZERO_MARK = "·"


class TableTooLarge(ValueError):
    pass


def _label(scheme: RepairScheme, i: int) -> str:
    g = scheme.checks[i]
    tw = scheme.tower
    name = f"g_{i + 1}"
    if isinstance(g, LinearCheck):
        factor = "x" if g.z == 0 else f"(x-{tw.format(g.z)})"
        if g.beta == 1:
            return f"{name} = {factor.strip('()')}"
        return f"{name} = {tw.format(g.beta)}{factor}"
    return name


def scheme_table(scheme: RepairScheme) -> dict:
    tw = scheme.tower
    pts = list(scheme.spec.points)
    cols = scheme.columns(pts)
    ranks = [int(b) for b in helper_ranks(scheme)]
    rows = []
    for i in range(len(scheme.checks)):
        raw = [int(v) for v in cols[:, i]]
        rows.append({
            "label": _label(scheme, i),
            "raw": raw,
            "values": [tw.format(v) if v else ZERO_MARK for v in raw],
        })
    star = pts.index(scheme.alpha_star)
    total = sum(b for j, b in enumerate(ranks) if j != star)
    return {
        "points": [tw.format(a) for a in pts],
        "alpha_star": tw.format(scheme.alpha_star),
        "alpha_star_index": star,
        "rows": rows,
        "rank_label": f"rank_{scheme.subfield.order}",
        "ranks": ranks,
        "total_subsymbols": total,
        "total_bits": total * scheme.subfield.e * math.log2(tw.p),
    }


def render_text(table: dict) -> str:
    if len(table["points"]) > TEXT_LIMIT:
        raise TableTooLarge(f"{len(table['points'])} columns; use --format json for fields above {TEXT_LIMIT}")
    star = table["alpha_star_index"]
    header = ["A"] + [f"{a}*" if j == star else a for j, a in enumerate(table["points"])]
    body = [[r["label"]] + r["values"] for r in table["rows"]]
    ranks = [table["rank_label"]] + [str(b) for b in table["ranks"]]
    grid = [header] + body + [ranks]
    widths = [max(len(row[c]) for row in grid) for c in range(len(header))]

    def fmt(row):
        first = row[0].ljust(widths[0])
        rest = "  ".join(cell.rjust(w) for cell, w in zip(row[1:], widths[1:]))
        return f"{first} | {rest}"

    rule = "-" * len(fmt(header))
    lines = [fmt(header), rule] + [fmt(r) for r in body] + [rule, fmt(ranks)]
    bits = table["total_bits"]
    bits_s = str(int(bits)) if float(bits).is_integer() else f"{bits:.3f}"
    lines.append(f"repair bandwidth: {table['total_subsymbols']} sub-symbols = {bits_s} bits")
    return "\n".join(lines)

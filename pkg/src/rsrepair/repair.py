"""Bandwidth accounting and end-to-end execution of a repair scheme.

Columns are folded with the dual multipliers before any rank or span is
taken: helper a contributes Tr(lambda_a g_i(a) f(a)) to repair equation i,
so what the replacement node needs from it is spanned by lambda_a g_i(a).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .rs import Codeword
from .schemes import RepairScheme, SchemeError


class RepairError(RuntimeError):
    pass


@dataclass
class BandwidthProfile:
    per_node: dict[int, int]
    total_subsymbols: int
    subfield_order: int
    subsymbol_digits: int  # GF(p) digits per downloaded sub-symbol
    p: int
    base_degree: int

    @property
    def total_base_subsymbols(self) -> int:
        """Total download counted in sub-symbols over B = GF(q)."""
        return self.total_subsymbols * self.subsymbol_digits // self.base_degree

    @property
    def total_digits(self) -> int:
        return self.total_subsymbols * self.subsymbol_digits

    @property
    def total_bits(self) -> float:
        return self.total_digits * math.log2(self.p)

    def to_json(self) -> dict:
        return {
            "per_node": [{"alpha": a, "b": b} for a, b in self.per_node.items()],
            "total_subsymbols": self.total_subsymbols,
            "subfield_order": self.subfield_order,
            "total_base_subsymbols": self.total_base_subsymbols,
            "total_bits": self.total_bits,
        }


def folded_columns(scheme: RepairScheme) -> np.ndarray:
    spec = scheme.spec
    tw = spec.tower
    cols = scheme.columns()
    lam = np.asarray(spec.lam, dtype=np.int64)
    if np.all(lam == 1):
        return cols
    if tw.has_tables:
        return tw.vmul(cols, lam[:, None])
    return np.array([[tw.mul(int(l), int(c)) for c in row] for l, row in zip(lam, cols)], dtype=np.int64)


def helper_ranks(scheme: RepairScheme) -> np.ndarray:
    """Rank over the sub-symbol field of every folded column, in point order."""
    cols = folded_columns(scheme)
    sub = scheme.subfield
    if scheme.tower.has_tables:
        return sub.batch_rank(cols)
    return np.array([sub.rank([int(x) for x in row]) for row in cols], dtype=np.int64)


def bandwidth_profile(scheme: RepairScheme) -> BandwidthProfile:
    ranks = helper_ranks(scheme)
    per_node = {a: int(b) for a, b in zip(scheme.spec.points, ranks) if a != scheme.alpha_star}
    tw = scheme.tower
    return BandwidthProfile(
        per_node=per_node,
        total_subsymbols=sum(per_node.values()),
        subfield_order=scheme.subfield.order,
        subsymbol_digits=scheme.subfield.e,
        p=tw.p,
        base_degree=tw.m,
    )


@dataclass
class NodePlan:
    alpha: int
    index: int
    queries: list[int]
    coords: list[list[int]]  # coords[i][j]: weight of response j in equation i


@dataclass
class RepairPlan:
    """Everything about a repair that does not depend on the stored data."""

    scheme: RepairScheme
    nodes: list[NodePlan]
    star_index: int
    star_dual: list[int]

    @property
    def subsymbols(self) -> int:
        return sum(len(n.queries) for n in self.nodes)


def compile_plan(scheme: RepairScheme) -> RepairPlan:
    spec = scheme.spec
    tw = spec.tower
    sub = scheme.subfield
    nodes = []
    star_index = spec.index(scheme.alpha_star)
    star_col = None
    for idx, (a, lam) in enumerate(zip(spec.points, spec.lam)):
        col = [tw.mul(lam, v) for v in scheme.column(a)]
        if idx == star_index:
            star_col = col
            continue
        basis, coords = sub.span(col)
        nodes.append(NodePlan(a, idx, basis, coords))
    if sub.rank(star_col) != sub.degree:
        raise SchemeError("scheme does not determine the erased symbol", "rank at alpha* = t")
    return RepairPlan(scheme, nodes, star_index, sub.dual_basis(star_col))


@dataclass
class NodeDownload:
    alpha: int
    queries: list[int]
    responses: list[int]


@dataclass
class RepairTranscript:
    alpha_star: int
    downloads: list[NodeDownload]
    reconstructed: int
    subfield_order: int
    subsymbol_digits: int
    p: int
    base_degree: int
    extra: dict = field(default_factory=dict)

    @property
    def subsymbols(self) -> int:
        return sum(len(d.responses) for d in self.downloads)

    @property
    def base_subsymbols(self) -> int:
        return self.subsymbols * self.subsymbol_digits // self.base_degree

    @property
    def bits(self) -> float:
        return self.subsymbols * self.subsymbol_digits * math.log2(self.p)

    def to_json(self) -> dict:
        return {
            "alpha_star": self.alpha_star,
            "per_node": [
                {"alpha": d.alpha, "queries": list(d.queries), "responses": list(d.responses)}
                for d in self.downloads
            ],
            "reconstructed": self.reconstructed,
            "bits": self.bits,
            "subsymbols": self.subsymbols,
            "subfield_order": self.subfield_order,
        }


def node_response(sub, query: int, stored: int) -> int:
    """What a helper returns for a query: the sub-symbol Tr(query * stored)."""
    return sub.trace(sub.tower.mul(query, stored))


def combine(plan: RepairPlan, responses: dict[int, list[int]]) -> int:
    """Recover the erased symbol from every helper's responses."""
    scheme = plan.scheme
    tw = scheme.tower
    d = scheme.subfield.degree
    traces = [0] * d
    for node in plan.nodes:
        resp = responses[node.alpha]
        if len(resp) != len(node.queries):
            raise RepairError(f"node {node.alpha} returned {len(resp)} of {len(node.queries)} sub-symbols")
        for i in range(d):
            acc = 0
            for c, x in zip(node.coords[i], resp):
                if c and x:
                    acc = tw.add(acc, tw.mul(c, x))
            traces[i] = tw.sub(traces[i], acc)
    out = 0
    for s, v in zip(traces, plan.star_dual):
        out = tw.add(out, tw.mul(s, v))
    return out


def execute_repair(scheme: RepairScheme, word: Codeword, plan: RepairPlan | None = None) -> RepairTranscript:
    """Repair the symbol at ``scheme.alpha_star`` from the other symbols of ``word``.

    The erased value is read only to confirm the result.
    """
    if word.spec != scheme.spec:
        raise RepairError("codeword belongs to a different code")
    plan = plan or compile_plan(scheme)
    sub = scheme.subfield
    downloads = []
    responses = {}
    for node in plan.nodes:
        stored = word.values[node.index]
        resp = [node_response(sub, z, stored) for z in node.queries]
        responses[node.alpha] = resp
        downloads.append(NodeDownload(node.alpha, list(node.queries), resp))
    rec = combine(plan, responses)
    truth = word.values[plan.star_index]
    if rec != truth:
        raise RepairError(f"reconstructed {rec} but the erased symbol was {truth}")
    tw = scheme.tower
    return RepairTranscript(scheme.alpha_star, downloads, rec, sub.order, sub.e, tw.p, tw.m)


def execute_batch(plan: RepairPlan, words: np.ndarray) -> np.ndarray:
    """Vectorized repair of many codewords (rows of ``words``); returns recovered symbols."""
    scheme = plan.scheme
    tw = scheme.tower
    table = scheme.subfield.trace_table
    words = np.asarray(words, dtype=np.int64)
    d = scheme.subfield.degree
    traces = [np.zeros(words.shape[0], dtype=np.int64) for _ in range(d)]
    for node in plan.nodes:
        stored = words[:, node.index]
        resp = [table[tw.vmul(z, stored)] for z in node.queries]
        for i in range(d):
            acc = np.zeros_like(stored)
            for c, x in zip(node.coords[i], resp):
                if c:
                    acc = tw.vadd(acc, tw.vmul(c, x))
            traces[i] = tw.vsub(traces[i], acc)
    out = np.zeros(words.shape[0], dtype=np.int64)
    for s, v in zip(traces, plan.star_dual):
        out = tw.vadd(out, tw.vmul(s, v))
    return out

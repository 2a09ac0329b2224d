"""In-process storage cluster: store a codeword, fail a node, repair it by query/response."""

from __future__ import annotations

import csv
import io
import json
import math
import time
from dataclasses import dataclass, field
from typing import Any, Iterable, Sequence

import numpy as np

from . import rs
from .bounds import integral_lower_bound
from .field import FieldError, build_tower
from .repair import (
    NodeDownload,
    RepairError,
    RepairTranscript,
    bandwidth_profile,
    combine,
    compile_plan,
    node_response,
)
from .rs import CodeError, RSCodeSpec
from .schemes import SchemeError, build_scheme, polynomial_basis

SCHEME_KINDS = ("gw", "c1", "c2", "c3", "naive")


@dataclass
class Message:
    sender: int | str
    receiver: int | str
    kind: str  # "query" or "response"
    payload: list[int]


class Ledger:
    """Every message exchanged during one repair, with per-side sub-symbol counts."""

    def __init__(self):
        self.messages: list[Message] = []
        self.sent: dict[Any, int] = {}
        self.received: dict[Any, int] = {}

    def post(self, msg: Message) -> None:
        self.messages.append(msg)
        if msg.kind == "response":
            self.sent[msg.sender] = self.sent.get(msg.sender, 0) + len(msg.payload)
            self.received[msg.receiver] = self.received.get(msg.receiver, 0) + len(msg.payload)

    @property
    def total_sent(self) -> int:
        return sum(self.sent.values())

    @property
    def total_received(self) -> int:
        return sum(self.received.values())


class Cluster:
    """One storage node per evaluation point, each holding its codeword symbol."""

    def __init__(self, spec: RSCodeSpec, values: Sequence[int]):
        if len(values) != spec.n:
            raise CodeError("one stored symbol per node is required")
        self.spec = spec
        self.nodes: dict[int, int | None] = dict(zip(spec.points, (int(v) for v in values)))
        self.failed: int | None = None
        self._lost: int | None = None

    @classmethod
    def from_message(cls, spec: RSCodeSpec, message: Sequence[int]) -> "Cluster":
        return cls(spec, rs.encode(spec, message).values)

    def fail(self, node: int) -> None:
        if self.failed is not None:
            raise RepairError("only one failed node is supported")
        if node not in self.nodes:
            raise CodeError(f"{node} is not a node of this cluster")
        self.failed = node
        self._lost = self.nodes[node]
        self.nodes[node] = None

    def answer(self, node: int, query: int, sub) -> int:
        stored = self.nodes[node]
        if stored is None:
            raise RepairError(f"node {node} is down")
        return node_response(sub, query, stored)

    def restore(self, value: int) -> bool:
        ok = value == self._lost
        if ok:
            self.nodes[self.failed] = value
            self.failed = None
            self._lost = None
        return ok


@dataclass
class Verdict:
    ok: bool
    scheme: str
    reconstructed: int | None = None
    sent_subsymbols: int = 0
    received_subsymbols: int = 0
    profile_subsymbols: int | None = None
    refusal: str | None = None
    detail: str = ""


def _naive_repair(cluster: Cluster, failed: int, ledger: Ledger, rng) -> RepairTranscript:
    spec = cluster.spec
    tw = spec.tower
    sub = tw.base_subfield
    helpers = [a for a in spec.points if a != failed]
    chosen = sorted(rng.choice(len(helpers), size=spec.k, replace=False).tolist())
    chosen = [helpers[i] for i in chosen]
    us = polynomial_basis(tw)
    dual = sub.dual_basis(us)
    known = {}
    downloads = []
    for a in chosen:
        ledger.post(Message("replacement", a, "query", us))
        resp = [cluster.answer(a, u, sub) for u in us]
        ledger.post(Message(a, "replacement", "response", resp))
        downloads.append(NodeDownload(a, list(us), resp))
        known[a] = tw.sum(tw.mul(x, v) for x, v in zip(resp, dual))
    value = rs.interpolate_at(spec, known, failed)
    return RepairTranscript(failed, downloads, value, sub.order, sub.e, tw.p, tw.m, {"helpers": chosen})


def run_failure_and_repair(
    cluster: Cluster,
    failed_node: int,
    scheme_kind: str,
    rng_seed: int = 0,
    s: int | None = None,
    **params,
) -> tuple[RepairTranscript | None, Verdict]:
    """Fail ``failed_node`` and repair it with the named scheme.

    A scheme whose preconditions do not hold gives a refusal verdict naming
    the precondition instead of raising.
    """
    rng = np.random.default_rng(rng_seed)
    if scheme_kind not in SCHEME_KINDS:
        return None, Verdict(False, scheme_kind, refusal=f"kind in {SCHEME_KINDS}")
    spec = cluster.spec
    profile_total = None
    if scheme_kind != "naive":
        try:
            scheme = build_scheme(scheme_kind, spec, failed_node, s, **params)
        except SchemeError as exc:
            return None, Verdict(False, scheme_kind, refusal=exc.precondition, detail=str(exc))
        profile_total = bandwidth_profile(scheme).total_subsymbols
    cluster.fail(failed_node)
    ledger = Ledger()
    if scheme_kind == "naive":
        transcript = _naive_repair(cluster, failed_node, ledger, rng)
    else:
        plan = compile_plan(scheme)
        sub = scheme.subfield
        downloads = []
        responses = {}
        for node in plan.nodes:
            if not node.queries:
                continue
            ledger.post(Message("replacement", node.alpha, "query", list(node.queries)))
            resp = [cluster.answer(node.alpha, z, sub) for z in node.queries]
            ledger.post(Message(node.alpha, "replacement", "response", resp))
            responses[node.alpha] = resp
            downloads.append(NodeDownload(node.alpha, list(node.queries), resp))
        for node in plan.nodes:
            responses.setdefault(node.alpha, [])
        value = combine(plan, responses)
        tw = spec.tower
        transcript = RepairTranscript(failed_node, downloads, value, sub.order, sub.e, tw.p, tw.m)
    ok = cluster.restore(transcript.reconstructed)
    verdict = Verdict(
        ok=ok and ledger.total_sent == ledger.total_received == transcript.subsymbols
        and (profile_total is None or profile_total == transcript.subsymbols),
        scheme=scheme_kind,
        reconstructed=transcript.reconstructed,
        sent_subsymbols=ledger.total_sent,
        received_subsymbols=ledger.total_received,
        profile_subsymbols=profile_total,
    )
    if not ok:
        verdict.detail = "reconstructed symbol differs from the lost one"
    return transcript, verdict


@dataclass
class ExperimentRow:
    config: str
    scheme: str
    p: int
    m: int
    t: int
    n: int
    k: int
    r: int
    s: int | None
    failed: int
    trials: int
    bits: list[float] = field(default_factory=list)
    subsymbols: list[int] = field(default_factory=list)
    base_subsymbols: list[int] = field(default_factory=list)
    bound_subsymbols: int | None = None
    bound_bits: float | None = None
    gap_subsymbols: int | None = None
    all_correct: bool = True
    refusal: str | None = None
    error: str | None = None

    def sort_key(self):
        return (self.config, self.scheme, self.failed)

    def flat(self) -> dict:
        return {
            "config": self.config,
            "scheme": self.scheme,
            "p": self.p,
            "m": self.m,
            "t": self.t,
            "n": self.n,
            "k": self.k,
            "r": self.r,
            "s": "" if self.s is None else self.s,
            "failed": self.failed,
            "trials": self.trials,
            "bits_min": min(self.bits) if self.bits else "",
            "bits_max": max(self.bits) if self.bits else "",
            "base_subsymbols_max": max(self.base_subsymbols) if self.base_subsymbols else "",
            "bound_subsymbols": "" if self.bound_subsymbols is None else self.bound_subsymbols,
            "bound_bits": "" if self.bound_bits is None else self.bound_bits,
            "gap_subsymbols": "" if self.gap_subsymbols is None else self.gap_subsymbols,
            "all_correct": self.all_correct,
            "refusal": self.refusal or "",
            "error": self.error or "",
        }


@dataclass
class ExperimentReport:
    rows: list[ExperimentRow]
    seed: int
    trials: int
    wall_clock: float = 0.0

    @property
    def sound(self) -> bool:
        """No trial downloaded fewer GF(q) sub-symbols than the integral bound."""
        return all(
            row.bound_subsymbols is None or all(b >= row.bound_subsymbols for b in row.base_subsymbols)
            for row in self.rows
        )

    def to_json(self, timing: bool = False) -> str:
        obj: dict[str, Any] = {
            "seed": self.seed,
            "trials": self.trials,
            "rows": [dict(row.flat(), bits=row.bits, subsymbols=row.subsymbols) for row in self.rows],
        }
        if timing:
            obj["wall_clock"] = self.wall_clock
        return json.dumps(obj, indent=2, sort_keys=True)

    def to_csv(self) -> str:
        buf = io.StringIO()
        if not self.rows:
            return ""
        writer = csv.DictWriter(buf, fieldnames=list(self.rows[0].flat()), lineterminator="\n")
        writer.writeheader()
        for row in self.rows:
            writer.writerow(row.flat())
        return buf.getvalue()


def config_name(cfg: dict) -> str:
    return cfg.get("name") or ",".join(f"{k}={cfg[k]}" for k in sorted(cfg) if k not in ("name",))


def make_code(cfg: dict, rng) -> RSCodeSpec:
    """A code from a sweep config: field (p, m, t), length n or 'full', and k or r."""
    tw = build_tower(cfg.get("p", 2), cfg.get("m", 1), cfg["t"])
    n = cfg.get("n", "full")
    if n == "full" or n == tw.order:
        points = tuple(tw.canonical_points())
    else:
        points = tuple(sorted(rng.choice(tw.order, size=int(n), replace=False).tolist()))
    n = len(points)
    k = cfg["k"] if "k" in cfg else n - cfg["r"]
    return RSCodeSpec(tw, points, k)


def sweep(configs: Iterable[dict], trials: int, seed: int = 0,
          codes: dict[str, RSCodeSpec] | None = None) -> ExperimentReport:
    """Run every config; failures of one config are recorded in its rows, not raised.

    A config holds p, m, t, n ('full' or an int), k or r, scheme, optional s,
    and failed (a node index or 'all').  ``codes`` maps config names to
    ready-made codes that replace the (p, m, t, n, k) fields.
    """
    start = time.perf_counter()
    rows: list[ExperimentRow] = []
    for ci, cfg in enumerate(configs):
        rng = np.random.default_rng([seed, ci])
        name = config_name(cfg)
        kind = cfg.get("scheme", "c3")
        try:
            spec = codes[name] if codes and name in codes else make_code(cfg, rng)
        except (FieldError, CodeError, KeyError) as exc:
            rows.append(ExperimentRow(name, kind, cfg.get("p", 2), cfg.get("m", 1), cfg.get("t", 0),
                                      0, 0, 0, cfg.get("s"), -1, 0, all_correct=False, error=str(exc)))
            continue
        tw = spec.tower
        failed = cfg.get("failed", "all")
        indices = range(spec.n) if failed == "all" else [int(failed)]
        bound = integral_lower_bound(spec.n, tw.q, tw.t, spec.r)
        for idx in indices:
            row = ExperimentRow(name, kind, tw.p, tw.m, tw.t, spec.n, spec.k, spec.r, cfg.get("s"), idx, trials,
                                bound_subsymbols=bound.integral_bound_subsymbols,
                                bound_bits=bound.integral_bound_bits)
            for trial in range(trials):
                msg = rs.random_message(spec, rng)
                cluster = Cluster.from_message(spec, msg)
                extra = {k: v for k, v in cfg.items() if k in ("z", "W", "U", "beta", "basis")}
                transcript, verdict = run_failure_and_repair(
                    cluster, spec.points[idx], kind, int(rng.integers(2**31)), cfg.get("s"), **extra
                )
                if verdict.refusal:
                    row.refusal = verdict.refusal
                    row.all_correct = False
                    break
                row.all_correct &= verdict.ok
                row.bits.append(transcript.bits)
                row.subsymbols.append(transcript.subsymbols)
                row.base_subsymbols.append(transcript.base_subsymbols)
            if row.base_subsymbols:
                row.gap_subsymbols = max(row.base_subsymbols) - bound.integral_bound_subsymbols
            rows.append(row)
    rows.sort(key=ExperimentRow.sort_key)
    return ExperimentReport(rows, seed, trials, time.perf_counter() - start)


def bits_label(bits: float) -> str:
    return str(int(bits)) if math.isclose(bits, round(bits)) else f"{bits:.3f}"

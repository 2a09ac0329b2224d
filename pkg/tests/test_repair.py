from __future__ import annotations

import numpy as np
import pytest

from rsrepair import rs
from rsrepair.field import build_tower
from rsrepair.repair import (
    RepairError,
    bandwidth_profile,
    compile_plan,
    execute_batch,
    execute_repair,
    helper_ranks,
)
from rsrepair.schemes import (
    LinearCheck,
    RepairScheme,
    build_construction_I,
    build_construction_III,
    build_gw_scheme,
)


@pytest.fixture(scope="module")
def gf8_scheme(gf8):
    spec = rs.full_length_code(gf8, 6)
    return build_construction_I(spec, 0, [1, gf8.xi_pow(1), gf8.xi_pow(2)])


def test_gf8_profile(gf8_scheme):
    prof = bandwidth_profile(gf8_scheme)
    assert prof.total_subsymbols == 14 and prof.total_bits == 14
    assert prof.to_json()["total_bits"] == 14


def test_zero_codeword(gf8_scheme):
    word = rs.encode(gf8_scheme.spec, [0] * 6)
    tr = execute_repair(gf8_scheme, word)
    assert tr.reconstructed == 0
    assert all(x == 0 for d in tr.downloads for x in d.responses)


def test_gf8_random_messages(gf8_scheme, rng):
    plan = compile_plan(gf8_scheme)
    for _ in range(100):
        word = rs.encode(gf8_scheme.spec, rs.random_message(gf8_scheme.spec, rng))
        tr = execute_repair(gf8_scheme, word, plan)
        assert tr.reconstructed == word.values[0]
        assert tr.bits == 14 and tr.subsymbols == 14


def test_helper_download_pair(gf8_scheme, gf8):
    # helper at xi^5 is asked for Tr(xi^4 f) and Tr(f)
    plan = compile_plan(gf8_scheme)
    node = next(n for n in plan.nodes if n.alpha == gf8.xi_pow(5))
    assert node.queries == [gf8.xi_pow(4), 1]


def test_batch_matches_scalar(gf16, rng):
    spec = rs.full_length_code(gf16, 12)
    sch = build_construction_III(spec, 5, 2)
    plan = compile_plan(sch)
    msgs = rng.integers(0, 16, size=(40, spec.k))
    words = rs.encode_many(spec, msgs)
    got = execute_batch(plan, words)
    for m, row, g in zip(msgs, words, got):
        tr = execute_repair(sch, rs.encode(spec, m.tolist()), plan)
        assert tr.reconstructed == g == row[spec.index(5)]


def test_shortened_gf16(gf16, rng):
    pts = tuple(int(x) for x in rng.choice(16, size=10, replace=False))
    spec = rs.RSCodeSpec(gf16, pts, 8)
    for a in pts:
        sch = build_construction_III(spec, a, 1)
        prof = bandwidth_profile(sch)
        assert prof.total_bits <= 9 * 3
        words = rs.encode_many(spec, rng.integers(0, 16, size=(50, 8)))
        assert np.array_equal(execute_batch(compile_plan(sch), words), words[:, spec.index(a)])


def test_gw_rebased_execution(gf16, rng):
    spec = rs.full_length_code(gf16, 12)
    sch = build_gw_scheme(spec, 7, 2)
    for _ in range(20):
        word = rs.encode(spec, rs.random_message(spec, rng))
        tr = execute_repair(sch, word)
        assert tr.reconstructed == word.values[spec.index(7)]
        assert all(sch.subfield.contains(x) for d in tr.downloads for x in d.responses)
        assert tr.base_subsymbols == 30


def test_vanishing_column_costs_nothing(gf8):
    spec = rs.full_length_code(gf8, 6)
    z = gf8.xi_pow(3)
    checks = [LinearCheck(gf8, b, z) for b in (1, 2, 4)]
    sch = RepairScheme(spec, 0, checks, gf8.base_subfield, "c1")
    assert helper_ranks(sch)[spec.index(z)] == 0


def test_mismatch_detected(gf8_scheme):
    word = rs.encode(gf8_scheme.spec, [1, 2, 3, 4, 5, 6])
    bad = rs.Codeword(gf8_scheme.spec, (word.values[0] ^ 1,) + word.values[1:])
    with pytest.raises(RepairError):
        execute_repair(gf8_scheme, bad)


def test_transcript_json(gf8_scheme, rng):
    word = rs.encode(gf8_scheme.spec, rs.random_message(gf8_scheme.spec, rng))
    obj = execute_repair(gf8_scheme, word).to_json()
    assert set(obj) >= {"alpha_star", "per_node", "reconstructed", "bits"}
    assert len(obj["per_node"]) == 7
    assert sum(len(n["responses"]) for n in obj["per_node"]) == 14


def test_profile_matches_transcript_nonbinary(rng):
    tw = build_tower(3, 1, 3)
    spec = rs.full_length_code(tw, 18)
    sch = build_construction_III(spec, 4, 2)
    prof = bandwidth_profile(sch)
    tr = execute_repair(sch, rs.encode(spec, rs.random_message(spec, rng)))
    assert tr.subsymbols == prof.total_subsymbols == 26

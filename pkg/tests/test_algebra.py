from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rsrepair import linalg, linearized, poly
from rsrepair.field import PrimeField, build_tower


def gaussian_binomial(t: int, s: int, q: int) -> int:
    num = den = 1
    for i in range(s):
        num *= q ** (t - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


class TestPoly:
    def test_divmod_round_trip(self, gf16, rng):
        for _ in range(50):
            a = [int(x) for x in rng.integers(0, 16, size=7)]
            b = [int(x) for x in rng.integers(0, 16, size=3)] + [1]
            quo, rem = poly.divmod_(gf16, a, b)
            assert poly.degree(rem) < 3
            assert poly.add(gf16, poly.mul(gf16, quo, b), rem) == poly.trim(a)

    def test_interpolate_then_evaluate(self, gf16, rng):
        xs = [0, 1, 2, 5, 9]
        ys = [int(y) for y in rng.integers(0, 16, size=5)]
        f = poly.interpolate(gf16, xs, ys)
        assert [poly.evaluate(gf16, f, x) for x in xs] == ys

    def test_from_roots(self, gf8):
        f = poly.from_roots(gf8, range(8))
        # prod over GF(8) of (x - a) = x^8 - x
        assert f == [0, 1, 0, 0, 0, 0, 0, 0, 1]


class TestLinalg:
    def test_inverse(self):
        k = PrimeField(5)
        a = [[1, 2], [3, 4]]
        inv = linalg.inverse(k, a)
        assert linalg.matvec(k, a, linalg.matvec(k, inv, [1, 0])) == [1, 0]
        with pytest.raises(ValueError):
            linalg.inverse(k, [[1, 2], [2, 4]])

    @settings(max_examples=100, deadline=None)
    @given(st.sampled_from([2, 3, 5]), st.data())
    def test_batch_rank_matches_row_reduce(self, p, data):
        rows = data.draw(st.integers(1, 5))
        cols = data.draw(st.integers(1, 5))
        flat = data.draw(st.lists(st.integers(0, p - 1), min_size=rows * cols, max_size=rows * cols))
        mat = np.array(flat, dtype=np.int64).reshape(rows, cols)
        got = linalg.batch_rank_mod_p(mat[None], p)[0]
        assert got == linalg.rank(PrimeField(p), mat.tolist())

    def test_incremental_span(self):
        span = linalg.IncrementalSpan(2, 3)
        assert span.offer([1, 0, 1])
        assert span.offer([0, 1, 1])
        assert not span.offer([1, 1, 0])
        assert span.reduce([1, 1, 0]) == [1, 1]
        assert span.reduce([0, 0, 1]) is None


class TestLinearized:
    def test_w01_over_gf8(self, gf8):
        coeffs = linearized.subspace_coeffs(gf8, [1])
        assert linearized.dense(gf8, coeffs) == [0, 1, 1]

    @pytest.mark.parametrize("args,s", [((2, 1, 4), 2), ((3, 1, 3), 1), ((2, 2, 2), 1), ((2, 1, 5), 3)])
    def test_recursion_matches_product(self, args, s, rng):
        tw = build_tower(*args)
        for _ in range(5):
            gens = [int(x) for x in rng.integers(1, tw.order, size=s)]
            if tw.rank_over_base(gens) < s:
                continue
            coeffs = linearized.subspace_coeffs(tw, gens)
            assert linearized.dense(tw, coeffs) == linearized.subspace_polynomial_by_product(tw, gens)

    def test_vectorized_evaluate(self, gf16):
        coeffs = linearized.subspace_coeffs(gf16, [1, 2])
        xs = np.arange(16)
        assert linearized.vevaluate(gf16, coeffs, xs).tolist() == [
            linearized.evaluate(gf16, coeffs, int(x)) for x in xs
        ]

    @pytest.mark.parametrize("args", [(2, 1, 3), (2, 1, 4), (3, 1, 2), (2, 2, 2), (2, 1, 6), (2, 3, 2)])
    def test_all_subspaces_count(self, args):
        tw = build_tower(*args)
        for s in range(1, tw.t):
            subs = list(linearized.all_subspaces(tw, s))
            assert len(subs) == gaussian_binomial(tw.t, s, tw.q)
            assert len({frozenset(linearized.span(tw, g)) for g in subs}) == len(subs)

    def test_dependent_generators(self, gf8):
        with pytest.raises(ValueError):
            linearized.subspace_coeffs(gf8, [1, 1])

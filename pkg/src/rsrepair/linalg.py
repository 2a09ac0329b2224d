"""Linear algebra over small finite fields.

The scalar routines take a field object with ``add``/``sub``/``mul``/``inv``
on ints.  ``batch_rank_mod_p`` is the vectorized workhorse behind bandwidth
profiles of large codes.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np


def row_reduce(k, rows: Sequence[Sequence[int]]) -> tuple[list[list[int]], list[int]]:
    """Reduced row echelon form of ``rows``; returns (nonzero rows, pivot columns)."""
    m = [list(r) for r in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots: list[int] = []
    rank = 0
    for c in range(ncols):
        pr = next((i for i in range(rank, len(m)) if m[i][c] != 0), None)
        if pr is None:
            continue
        m[rank], m[pr] = m[pr], m[rank]
        inv = k.inv(m[rank][c])
        m[rank] = [k.mul(inv, x) for x in m[rank]]
        for i in range(len(m)):
            if i != rank and m[i][c] != 0:
                f = m[i][c]
                m[i] = [k.sub(x, k.mul(f, y)) for x, y in zip(m[i], m[rank])]
        pivots.append(c)
        rank += 1
        if rank == len(m):
            break
    return m[:rank], pivots


def rank(k, rows: Sequence[Sequence[int]]) -> int:
    return len(row_reduce(k, rows)[0])


def inverse(k, a: Sequence[Sequence[int]]) -> list[list[int]]:
    """Inverse of the square matrix ``a``; raises ValueError if singular."""
    n = len(a)
    aug = [list(row) + [1 if i == j else 0 for j in range(n)] for i, row in enumerate(a)]
    red, pivots = row_reduce(k, aug)
    if len(red) < n or pivots[n - 1] != n - 1:
        raise ValueError("matrix is singular")
    return [row[n:] for row in red]


def matvec(k, a: Sequence[Sequence[int]], v: Sequence[int]) -> list[int]:
    out = []
    for row in a:
        acc = 0
        for x, y in zip(row, v):
            if x and y:
                acc = k.add(acc, k.mul(x, y))
        out.append(acc)
    return out


class IncrementalSpan:
    """Greedy span builder over GF(p) that remembers how vectors were formed.

    Generators are offered one at a time; ``reduce`` expresses a vector in
    terms of the accepted generators (or reports it independent).
    """

    def __init__(self, p: int, width: int):
        self.p = p
        self.width = width
        self._inv = [0] + [pow(x, p - 2, p) for x in range(1, p)]
        # echelon rows: (pivot column, row vector, combination over generators)
        self._rows: list[tuple[int, list[int], list[int]]] = []
        self.size = 0

    def _reduce(self, v: Sequence[int]) -> tuple[list[int], list[int]]:
        p = self.p
        v = [x % p for x in v]
        combo = [0] * self.size
        for piv, row, rc in self._rows:
            f = v[piv]
            if f:
                v = [(x - f * y) % p for x, y in zip(v, row)]
                for j, c in enumerate(rc):
                    if c:
                        combo[j] = (combo[j] + f * c) % p
        return v, combo

    def reduce(self, v: Sequence[int]) -> list[int] | None:
        """Coordinates of ``v`` over accepted generators, or None if independent."""
        res, combo = self._reduce(v)
        if any(res):
            return None
        return combo

    def offer(self, v: Sequence[int]) -> bool:
        """Accept ``v`` as a new generator if it is independent; report whether it was."""
        p = self.p
        res, combo = self._reduce(v)
        if not any(res):
            return False
        piv = next(i for i, x in enumerate(res) if x)
        inv = self._inv[res[piv]]
        res = [(x * inv) % p for x in res]
        # res = v - sum(combo_j * gen_j), so as a combination: e_new - combo
        rc = [(-c * inv) % p for c in combo] + [inv]
        for i, (pv, row, c) in enumerate(self._rows):
            f = row[piv]
            if f:
                row = [(x - f * y) % p for x, y in zip(row, res)]
                c = c + [0]
                c = [(x - f * y) % p for x, y in zip(c, rc)]
                self._rows[i] = (pv, row, c)
            else:
                self._rows[i] = (pv, row, c + [0])
        self._rows.append((piv, res, rc))
        self.size += 1
        return True


def batch_rank_mod_p(mats: np.ndarray, p: int) -> np.ndarray:
    """Ranks over GF(p) of a stack of matrices with shape (N, rows, cols)."""
    mats = np.asarray(mats)
    if mats.ndim != 3:
        raise ValueError("expected a 3-d array")
    n, nrows, ncols = mats.shape
    dtype = np.int64 if p > 181 else np.int32
    m = (mats % p).astype(dtype)
    ranks = np.zeros(n, dtype=np.int64)
    if n == 0 or nrows == 0:
        return ranks
    inv_table = np.array([0] + [pow(x, p - 2, p) for x in range(1, p)], dtype=dtype)
    row_ids = np.arange(nrows)
    for c in range(ncols):
        cand = (m[:, :, c] != 0) & (row_ids[None, :] >= ranks[:, None])
        has = cand.any(axis=1)
        if not has.any():
            continue
        idx = np.nonzero(has)[0]
        piv = np.argmax(cand[idx], axis=1)
        r0 = ranks[idx]
        sub = m[idx]
        k = np.arange(idx.size)
        top = sub[k, r0].copy()
        sub[k, r0] = sub[k, piv]
        sub[k, piv] = top
        pivrow = sub[k, r0]
        if p != 2:
            pivrow = (pivrow * inv_table[pivrow[:, c]][:, None]) % p
            sub[k, r0] = pivrow
        factors = sub[:, :, c].copy()
        factors[k, r0] = 0
        if p == 2:
            sub ^= factors[:, :, None] * pivrow[:, None, :]
        else:
            sub = (sub - factors[:, :, None] * pivrow[:, None, :]) % p
        m[idx] = sub
        ranks[idx] += 1
    return ranks


def batch_rank_gf2_packed(vals: np.ndarray, nbits: int) -> np.ndarray:
    """GF(2)-ranks of rows of bit-packed vectors, shape (N, R), each < 2**nbits.

    Keeps one basis vector per leading bit and reduces every new vector
    from the top bit down, vectorized over the N rows.
    """
    vals = np.asarray(vals, dtype=np.int64)
    n = vals.shape[0]
    basis = np.zeros((n, nbits), dtype=np.int64)
    rows = np.arange(n)
    for j in range(vals.shape[1]):
        x = vals[:, j].copy()
        for b in range(nbits - 1, -1, -1):
            hit = ((x >> b) & 1).astype(bool)
            free = hit & (basis[:, b] == 0)
            basis[rows[free], b] = x[free]
            x = np.where(hit & ~free, x ^ basis[:, b], np.where(free, 0, x))
    return np.count_nonzero(basis, axis=1)


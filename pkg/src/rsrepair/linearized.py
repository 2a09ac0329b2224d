"""Subspace polynomials L_W(x) = prod_{w in W} (x - w) in linearized form.

For a B-subspace W of F, L_W is a q-polynomial sum(c_i x^(q^i)) of q-degree
dim W.  Coefficients are built by adjoining one generator at a time:

    L_{W + <v>}(x) = L_W(x)^q - L_W(v)^(q-1) * L_W(x)
"""

from __future__ import annotations

from itertools import combinations, product
from typing import Iterator, Sequence

import numpy as np

from . import poly
from .field import FieldError, FieldTower


def span(tower: FieldTower, gens: Sequence[int]) -> list[int]:
    """All B-combinations of ``gens`` (with repeats if they are dependent)."""
    out = [0]
    for g in gens:
        multiples = [tower.mul(b, g) for b in range(tower.q)]
        out = [tower.add(x, y) for x in out for y in multiples]
    return out


def check_subspace_gens(tower: FieldTower, gens: Sequence[int]) -> None:
    if tower.rank_over_base(list(gens)) != len(gens):
        raise FieldError("subspace generators are dependent over B")


def default_subspace(tower: FieldTower, s: int) -> list[int]:
    """Generators 1, x, ..., x^(s-1) of F over B."""
    return [tower.q**j for j in range(s)]


def subspace_coeffs(tower: FieldTower, gens: Sequence[int]) -> list[int]:
    """Linearized coefficients c_0..c_s of L_W for W = span_B(gens)."""
    check_subspace_gens(tower, gens)
    q = tower.q
    coeffs = [1]
    for v in gens:
        lv = evaluate(tower, coeffs, v)
        a = tower.pow(lv, q - 1)
        raised = [0] + [tower.pow(c, q) for c in coeffs]
        lowered = [tower.mul(a, c) for c in coeffs] + [0]
        coeffs = [tower.sub(x, y) for x, y in zip(raised, lowered)]
    return coeffs


def evaluate(tower: FieldTower, coeffs: Sequence[int], x: int) -> int:
    acc, cur = 0, x
    for c in coeffs:
        if c:
            acc = tower.add(acc, tower.mul(c, cur))
        cur = tower.pow(cur, tower.q)
    return acc


def vevaluate(tower: FieldTower, coeffs: Sequence[int], xs: np.ndarray) -> np.ndarray:
    xs = np.asarray(xs, dtype=np.int64)
    acc = np.zeros_like(xs)
    cur = xs
    for c in coeffs:
        if c:
            acc = tower.vadd(acc, tower.vmul(c, cur))
        cur = tower.vpow(cur, tower.q)
    return acc


def dense(tower: FieldTower, coeffs: Sequence[int]) -> list[int]:
    """Ordinary coefficient list of a linearized polynomial."""
    out = [0] * (tower.q ** (len(coeffs) - 1) + 1)
    for i, c in enumerate(coeffs):
        out[tower.q**i] = c
    return poly.trim(out)


def subspace_polynomial_by_product(tower: FieldTower, gens: Sequence[int]) -> list[int]:
    """prod_{w in W}(x - w) expanded directly; quadratic cost, for cross-checks."""
    return poly.from_roots(tower, span(tower, gens))


def kernel_and_image_dim(tower: FieldTower, coeffs: Sequence[int]) -> tuple[set[int], int]:
    """Kernel of x -> L(x) on F and the B-dimension of its image, by enumeration."""
    ker = set()
    image = set()
    for x in range(tower.order):
        y = evaluate(tower, coeffs, x)
        if y == 0:
            ker.add(x)
        image.add(y)
    dim = 0
    while tower.q**dim < len(image):
        dim += 1
    if tower.q**dim != len(image):
        raise FieldError("image size is not a power of q")
    return ker, dim


def _vector_to_elem(tower: FieldTower, v: Sequence[int]) -> int:
    out = 0
    for c in reversed(list(v)):
        out = out * tower.q + c
    return out


def all_subspaces(tower: FieldTower, s: int) -> Iterator[list[int]]:
    """Every s-dimensional B-subspace of F, as the rows of its reduced echelon basis."""
    t, q = tower.t, tower.q
    for pivots in combinations(range(t), s):
        free = [(i, j) for i in range(s) for j in range(t) if j > pivots[i] and j not in pivots]
        for vals in product(range(q), repeat=len(free)):
            rows = [[0] * t for _ in range(s)]
            for i, piv in enumerate(pivots):
                rows[i][piv] = 1
            for (i, j), v in zip(free, vals):
                rows[i][j] = v
            yield [_vector_to_elem(tower, r) for r in rows]

"""Bandwidth-efficient single-erasure repair for Reed-Solomon codes."""

from .field import (
    FieldError,
    FieldTower,
    Felt,
    Subfield,
    build_tower,
    dual_basis,
    frobenius,
    linearized_eval,
    rank_over_base,
    span_basis_and_coords,
    trace_to_base,
)

__all__ = [
    "FieldError",
    "FieldTower",
    "Felt",
    "Subfield",
    "build_tower",
    "dual_basis",
    "frobenius",
    "linearized_eval",
    "rank_over_base",
    "span_basis_and_coords",
    "trace_to_base",
]

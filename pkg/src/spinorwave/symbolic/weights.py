"""Gauge-weight bookkeeping and well-formedness checks for expressions.

Weights are declared per kernel in template position; explicit metric-spinor
factors carry their own weights, so displaced field indices are accounted
for automatically.  Freely displaced operator indices contribute the
per-slot amounts from :func:`kernels.operator_displacement_weight`.
"""

from __future__ import annotations

from ..errors import ParseError, WeightError
from .expr import Expr, Factor, Term
from .kernels import Displacement, KernelTable, operator_displacement_weight

Weight = tuple[int, int]


def factor_weight(factor: Factor, table: KernelTable) -> Weight:
    kernel = table.get(factor.kernel)
    if kernel is None:
        raise ParseError(f"unknown kernel {factor.kernel!r}")
    w, aw = kernel.weight
    if kernel.displacement is Displacement.FREE:
        for idx in factor.indices:
            dw, daw = operator_displacement_weight(idx.kind, idx.variance)
            w += dw
            aw += daw
    return (w, aw)


def term_weight(term: Term, table: KernelTable) -> Weight:
    w, aw = 0, 0
    for f in term.factors:
        fw, faw = factor_weight(f, table)
        w += fw
        aw += faw
    return (w, aw)


def expr_weight(expr: Expr, table: KernelTable) -> Weight:
    """The homogeneous (weight, antiweight) of the expression; (0,0) if zero."""
    if expr.is_zero:
        return (0, 0)
    weights = {term_weight(t, table) for t in expr.terms}
    if len(weights) > 1:
        raise WeightError(f"weight-inhomogeneous sum: {sorted(weights)}")
    return weights.pop()


def validate_term(term: Term) -> None:
    census = term.index_census()
    for name, occs in census.items():
        if len(occs) == 1:
            continue
        if len(occs) == 2:
            a, b = occs[0][1], occs[1][1]
            if a.kind is not b.kind:
                raise ParseError(f"dummy index {name!r} changes kind")
            if a.variance is b.variance:
                raise ParseError(
                    f"dummy index {name!r} repeated with equal variance"
                )
            continue
        raise ParseError(f"unbalanced dummy index {name!r} ({len(occs)} occurrences)")


def validate_expr(expr: Expr, table: KernelTable) -> None:
    """Dummy balance, identical free sets across the sum, weight homogeneity."""
    free_sets = []
    for term in expr.terms:
        validate_term(term)
        free = {
            name: (idx.kind, idx.variance) for name, idx in term.free_indices().items()
        }
        free_sets.append(free)
    for other in free_sets[1:]:
        if other != free_sets[0]:
            raise ParseError(
                f"mixed free-index sets in sum: {sorted(free_sets[0])} vs {sorted(other)}"
            )
    expr_weight(expr, table)


def free_signature(expr: Expr) -> dict[str, tuple]:
    return {
        name: (idx.kind, idx.variance) for name, idx in expr.free_indices().items()
    }

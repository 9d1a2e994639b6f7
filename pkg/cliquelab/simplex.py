"""Exact rational simplex for ``max c·x  s.t.  A x <= b, x >= 0`` with ``b >= 0``.

The origin is feasible for every problem this package builds (packing LPs),
so a single phase suffices. Pivoting follows Bland's rule, which rules out
cycling; all arithmetic is in ``fractions.Fraction``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import InputError, ResourceGuardError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LPResult:
    value: Fraction
    x: tuple[Fraction, ...]
    duals: tuple[Fraction, ...]
    pivots: int


def maximize(
    c: Sequence[Fraction | int],
    rows: Sequence[Sequence[Fraction | int]],
    b: Sequence[Fraction | int],
    max_pivots: int = 1_000_000,
) -> LPResult:
    m, n = len(rows), len(c)
    if len(b) != m:
        raise InputError(f"{m} constraint rows but {len(b)} right-hand sides")
    if any(len(row) != n for row in rows):
        raise InputError(f"every constraint row must have {n} coefficients")
    if any(Fraction(v) < 0 for v in b):
        raise InputError("right-hand sides must be non-negative (origin must be feasible)")

    width = n + m
    tableau = []
    for i, row in enumerate(rows):
        line = [Fraction(v) for v in row] + [Fraction(0)] * m + [Fraction(b[i])]
        line[n + i] = Fraction(1)
        tableau.append(line)
    objective = [-Fraction(v) for v in c] + [Fraction(0)] * m + [Fraction(0)]
    basis = [n + i for i in range(m)]

    pivots = 0
    while True:
        entering = next((j for j in range(width) if objective[j] < 0), None)
        if entering is None:
            break
        leaving = None
        best_ratio = None
        for i in range(m):
            coef = tableau[i][entering]
            if coef > 0:
                ratio = tableau[i][-1] / coef
                if (
                    best_ratio is None
                    or ratio < best_ratio
                    or (ratio == best_ratio and basis[i] < basis[leaving])
                ):
                    leaving, best_ratio = i, ratio
        if leaving is None:
            raise InputError(f"LP is unbounded along column {entering}")
        pivots += 1
        if pivots > max_pivots:
            raise ResourceGuardError("max_pivots", max_pivots)

        pivot_row = tableau[leaving]
        pivot = pivot_row[entering]
        nonzero = [j for j, v in enumerate(pivot_row) if v]
        for j in nonzero:
            pivot_row[j] /= pivot
        for i in range(m):
            if i == leaving:
                continue
            factor = tableau[i][entering]
            if factor:
                target = tableau[i]
                for j in nonzero:
                    target[j] -= factor * pivot_row[j]
        factor = objective[entering]
        for j in nonzero:
            objective[j] -= factor * pivot_row[j]
        basis[leaving] = entering

    x = [Fraction(0)] * n
    for i, col in enumerate(basis):
        if col < n:
            x[col] = tableau[i][-1]
    duals = tuple(objective[n + i] for i in range(m))
    logger.debug(f"Simplex finished after {pivots} pivots, optimum {objective[-1]}")
    return LPResult(value=objective[-1], x=tuple(x), duals=duals, pivots=pivots)

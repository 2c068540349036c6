"""Exact rational phase-one simplex with Bland's rule.

Decides feasibility of ``A x = b, x >= 0``.  On infeasibility the optimal
phase-one multipliers give a Farkas certificate ``y`` with ``y A <= 0`` and
``y b > 0``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

ZERO = Fraction(0)


@dataclass(frozen=True)
class PhaseOneResult:
    feasible: bool
    x: tuple  # primal point when feasible
    y: tuple  # phase-one dual multipliers; a Farkas vector when infeasible
    pivots: int


def find_feasible(A: Sequence[Sequence], b: Sequence, max_pivots: int = 100_000) -> PhaseOneResult:
    m = len(A)
    n = len(A[0]) if m else 0
    rows = []
    rhs = []
    sign = []
    for i in range(m):
        if len(A[i]) != n:
            raise ValueError("ragged constraint matrix")
        s = -1 if Fraction(b[i]) < 0 else 1
        sign.append(s)
        rows.append([s * Fraction(a) for a in A[i]] + [Fraction(int(i == k)) for k in range(m)])
        rhs.append(s * Fraction(b[i]))
    # columns 0..n-1 are x, n..n+m-1 artificials; phase-one cost is 1 on artificials.
    # ``reduced`` is the reduced-cost row, ``reduced[-1]`` minus the objective.
    width = n + m
    reduced = [-sum((rows[r][j] for r in range(m)), ZERO) for j in range(n)] + [ZERO] * m
    reduced.append(-sum(rhs, ZERO))
    basis = list(range(n, n + m))
    pivots = 0
    while True:
        entering = next((j for j in range(width) if reduced[j] < 0), None)
        if entering is None:
            break
        leave, best = None, None
        for r in range(m):
            a = rows[r][entering]
            if a > 0:
                ratio = rhs[r] / a
                if best is None or ratio < best or (ratio == best and basis[r] < basis[leave]):
                    leave, best = r, ratio
        if leave is None:
            raise RuntimeError("phase-one objective unbounded; this cannot happen")
        _pivot(rows, rhs, reduced, leave, entering)
        basis[leave] = entering
        pivots += 1
        if pivots > max_pivots:
            raise RuntimeError("simplex pivot limit exceeded")
    value = -reduced[-1]
    x = [ZERO] * n
    for r, j in enumerate(basis):
        if j < n:
            x[j] = rhs[r]
    # artificial i has cost 1 and column e_i, so its reduced cost is 1 - y_i;
    # undo the row sign flips so y refers to the caller's rows
    y_out = tuple((1 - reduced[n + i]) * sign[i] for i in range(m))
    return PhaseOneResult(value == 0, tuple(x), y_out, pivots)


def _pivot(rows: list, rhs: list, reduced: list, r: int, c: int) -> None:
    piv = rows[r][c]
    row = rows[r]
    if piv != 1:
        rows[r] = row = [v / piv if v else v for v in row]
        rhs[r] = rhs[r] / piv
    nz = [j for j, v in enumerate(row) if v]
    for k in range(len(rows)):
        if k == r:
            continue
        f = rows[k][c]
        if f:
            target = rows[k]
            for j in nz:
                target[j] -= f * row[j]
            rhs[k] -= f * rhs[r]
    f = reduced[c]
    if f:
        for j in nz:
            reduced[j] -= f * row[j]
        reduced[-1] -= f * rhs[r]

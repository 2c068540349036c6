"""Local, lambda-independent, deterministic realizations of empirical models.

An empirical model has such a realization iff its conditional laws
``e(x | y)`` on the supported contexts are a convex combination of
deterministic response strategies.  Feasibility is decided with the exact
simplex in :mod:`hvcanon.simplex`; infeasibility comes with a separating
functional.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .caps import get_cap
from .measure import FiniteSpace, ProbTable, ValidationError, conditional_distribution, marginal
from .models import XA, XB, YA, YB, EmpiricalModel, HVModel, realizes
from .properties import check_lambda_independence, check_locality, check_weak_determinism
from .simplex import find_feasible

ZERO = Fraction(0)


class CapExceeded(ValidationError):
    pass


@dataclass(frozen=True)
class DetStrategy:
    """Response functions: ``f_a[i]`` is Alice's outcome for her i-th setting."""

    f_a: tuple  # ((y_a, x_a), ...)
    f_b: tuple

    def out_a(self, ya):
        return dict(self.f_a)[ya]

    def out_b(self, yb):
        return dict(self.f_b)[yb]

    @property
    def label(self) -> str:
        a = ".".join(str(x) for _, x in self.f_a)
        b = ".".join(str(x) for _, x in self.f_b)
        return f"a={a};b={b}"


@dataclass(frozen=True)
class Certificate:
    """Functional ``sum c[(y_a, y_b, x_a, x_b)] e(x|y)`` whose value on ``e`` exceeds
    its maximum ``bound`` over deterministic strategies."""

    coefficients: dict
    value: Fraction
    bound: Fraction
    kind: str  # "chsh" or "farkas"

    def evaluate(self, cond: dict) -> Fraction:
        """Value on conditional laws ``{(y_a, y_b): {(x_a, x_b): prob}}``."""
        return _evaluate(self.coefficients, cond)


@dataclass(frozen=True)
class FeasibilityResult:
    feasible: bool
    weights: dict = field(default_factory=dict)  # DetStrategy -> Fraction
    model: Optional[HVModel] = None
    certificate: Optional[Certificate] = None


def enumerate_strategies(e: EmpiricalModel) -> list:
    xa, xb, ya, yb = (e.table.factors[i] for i in (XA, XB, YA, YB))
    count = len(xa) ** len(ya) * len(xb) ** len(yb)
    cap = get_cap("strategies")
    if count > cap:
        raise CapExceeded(f"{count} deterministic strategies exceed the cap of {cap}")
    out = []
    for fa in itertools.product(xa.labels, repeat=len(ya)):
        for fb in itertools.product(xb.labels, repeat=len(yb)):
            out.append(DetStrategy(tuple(zip(ya.labels, fa)), tuple(zip(yb.labels, fb))))
    return out


def conditional_laws(e: EmpiricalModel) -> dict:
    """``{(y_a, y_b): {(x_a, x_b): e(x|y)}}`` over the supported contexts."""
    return conditional_distribution(e.table, (XA, XB), (YA, YB))


def _rows(e: EmpiricalModel, contexts: list) -> list:
    return [(y, (a, b)) for y in contexts for a in e.outcomes_a for b in e.outcomes_b]


def strategy_value(coefficients: dict, s: DetStrategy, contexts: list) -> Fraction:
    return sum((coefficients.get((ya, yb, s.out_a(ya), s.out_b(yb)), ZERO) for ya, yb in contexts), ZERO)


def functional_bound(coefficients: dict, strategies: list, contexts: list) -> Fraction:
    """Maximum of the functional over all deterministic strategies (brute force)."""
    return max(strategy_value(coefficients, s, contexts) for s in strategies)


def build_model(e: EmpiricalModel, weights: dict) -> HVModel:
    """The h.v. model with one hidden state per strategy of positive weight and
    the measurement law of ``e``, independent of the hidden state."""
    my = marginal(e.table, (YA, YB))
    strategies = [s for s, w in weights.items() if w]
    mass = {}
    for s in strategies:
        w = weights[s]
        for (ya, yb), m in my.items():
            mass[(s.out_a(ya), s.out_b(yb), ya, yb, s.label)] = m * w
    return HVModel(ProbTable(e.table.factors + (FiniteSpace(s.label for s in strategies),), mass))


def solve_local(e: EmpiricalModel, certificate: bool = True) -> FeasibilityResult:
    contexts = e.contexts()
    if not contexts:
        raise ValidationError("empirical model has no context of positive mass")
    cond = conditional_laws(e)
    strategies = enumerate_strategies(e)
    rows = _rows(e, contexts)

    columns: dict = {}
    for s in strategies:
        col = tuple(int(s.out_a(y[0]) == x[0] and s.out_b(y[1]) == x[1]) for y, x in rows)
        columns.setdefault(col, s)
    reps = list(columns.items())

    A = [[col[r] for col, _ in reps] for r in range(len(rows))] + [[1] * len(reps)]
    b = [cond[y].get(x, ZERO) for y, x in rows] + [Fraction(1)]
    res = find_feasible(A, b)

    if res.feasible:
        weights = {s: w for (_, s), w in zip(reps, res.x) if w}
        model = build_model(e, weights)
        _verify_model(model, e)
        return FeasibilityResult(True, weights=weights, model=model)

    cert = None
    if certificate:
        cert = _chsh_certificate(e, strategies, contexts, cond)
        if cert is None:
            coeffs = {(y[0], y[1], x[0], x[1]): c for (y, x), c in zip(rows, res.y[:-1]) if c}
            cert = Certificate(coeffs, _evaluate(coeffs, cond),
                               functional_bound(coeffs, strategies, contexts), "farkas")
        if not cert.value > cert.bound:
            raise RuntimeError("infeasibility certificate failed to separate")
    return FeasibilityResult(False, certificate=cert)


def _evaluate(coeffs: dict, cond: dict) -> Fraction:
    return sum((c * cond[(ya, yb)].get((xa, xb), ZERO) for (ya, yb, xa, xb), c in coeffs.items()), ZERO)


def _verify_model(model: HVModel, e: EmpiricalModel) -> None:
    if not realizes(model, e):
        raise RuntimeError("reconstructed model does not realize the empirical model")
    for report in (check_lambda_independence(model), check_locality(model), check_weak_determinism(model)):
        if not report.holds:
            raise RuntimeError(f"reconstructed model fails {report.name}")


# --- CHSH ---------------------------------------------------------------------

def _signs(space: FiniteSpace) -> dict:
    labels = [str(x) for x in space]
    if sorted(labels) in (["+1", "-1"], ["-1", "1"]):
        return {x: (1 if str(x) in ("1", "+1") else -1) for x in space}
    return {space.labels[0]: 1, space.labels[1]: -1}


def _require_chsh_shape(e: EmpiricalModel) -> None:
    if not all(len(e.table.factors[i]) == 2 for i in (XA, XB, YA, YB)):
        raise ValidationError("CHSH needs two outcomes and two settings per party")


def correlators(e: EmpiricalModel) -> dict:
    _require_chsh_shape(e)
    cond = conditional_laws(e)
    sa, sb = _signs(e.outcomes_a), _signs(e.outcomes_b)
    out = {}
    for ya in e.measurements_a:
        for yb in e.measurements_b:
            if (ya, yb) not in cond:
                raise ValidationError(f"context ({ya}, {yb}) has zero mass; CHSH undefined")
            out[(ya, yb)] = sum((m * sa[xa] * sb[xb] for (xa, xb), m in cond[(ya, yb)].items()), ZERO)
    return out


def _chsh_variants(e: EmpiricalModel) -> list:
    """The 8 CHSH forms: choice of the negated term times an overall sign."""
    ctx = [(ya, yb) for ya in e.measurements_a for yb in e.measurements_b]
    variants = []
    for overall in (1, -1):
        for neg in reversed(range(4)):
            variants.append({y: overall * (-1 if i == neg else 1) for i, y in enumerate(ctx)})
    return variants


def chsh_value(e: EmpiricalModel) -> tuple:
    """``(E00 + E01 + E10 - E11, max over the 8 symmetric forms)``."""
    corr = correlators(e)
    variants = _chsh_variants(e)
    values = [sum((s * corr[y] for y, s in v.items()), ZERO) for v in variants]
    return values[0], max(values)


def _chsh_certificate(e, strategies, contexts, cond) -> Optional[Certificate]:
    try:
        _require_chsh_shape(e)
        corr = correlators(e)
    except ValidationError:
        return None
    sa, sb = _signs(e.outcomes_a), _signs(e.outcomes_b)
    for v in _chsh_variants(e):
        coeffs = {(ya, yb, xa, xb): Fraction(s * sa[xa] * sb[xb])
                  for (ya, yb), s in v.items() for xa in e.outcomes_a for xb in e.outcomes_b}
        value = sum((s * corr[y] for y, s in v.items()), ZERO)
        bound = functional_bound(coeffs, strategies, contexts)
        if value > bound:
            return Certificate(coeffs, value, bound, "chsh")
    return None

"""Exact decision procedures for the six properties of hidden-variable models.

Every equation is required to hold on conditioning cells of positive mass
only; cells of zero mass are null sets and never produce a violation.
Events range over all subsets of each finite outcome (or hidden, or
measurement) space, up to the ``subsets`` cap; above it, singletons and their
complements are used instead and a warning is emitted.
"""

from __future__ import annotations

import warnings
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .caps import get_cap
from .measure import FiniteSpace, conditional_distribution, marginal
from .models import LAM, XA, XB, YA, YB, HVModel

LOCALITY = "locality"
PARAMETER_INDEPENDENCE = "parameter_independence"
OUTCOME_INDEPENDENCE = "outcome_independence"
LAMBDA_INDEPENDENCE = "lambda_independence"
STRONG_DETERMINISM = "strong_determinism"
WEAK_DETERMINISM = "weak_determinism"

PROPERTIES = (
    LOCALITY,
    PARAMETER_INDEPENDENCE,
    OUTCOME_INDEPENDENCE,
    LAMBDA_INDEPENDENCE,
    STRONG_DETERMINISM,
    WEAK_DETERMINISM,
)

ALIASES = {
    "L": LOCALITY, "PI": PARAMETER_INDEPENDENCE, "OI": OUTCOME_INDEPENDENCE,
    "LI": LAMBDA_INDEPENDENCE, "SD": STRONG_DETERMINISM, "WD": WEAK_DETERMINISM,
}
SHORT = {v: k for k, v in ALIASES.items()}

MAX_WITNESSES = 20


def resolve(name: str) -> str:
    key = name.strip()
    if key in PROPERTIES:
        return key
    if key.upper() in ALIASES:
        return ALIASES[key.upper()]
    normalized = key.lower().replace("-", "_").replace(" ", "_").replace("λ", "lambda")
    if normalized in PROPERTIES:
        return normalized
    raise ValueError(f"unknown property {name!r}")


@dataclass(frozen=True)
class Witness:
    events: tuple  # ((name, labels), ...)
    cell: tuple  # ((factor name, label), ...)
    left: Fraction
    right: Fraction | None

    def to_json(self) -> dict:
        return {
            "events": {k: list(v) for k, v in self.events},
            "cell": dict(self.cell),
            "left": _fmt(self.left),
            "right": None if self.right is None else _fmt(self.right),
        }


def _fmt(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


@dataclass(frozen=True)
class PropertyReport:
    """Verdict for one property; ``witnesses`` keeps the first few violations."""

    name: str
    holds: bool
    witnesses: tuple = ()
    violations: int = 0

    def to_json(self) -> dict:
        return {
            "property": self.name,
            "holds": self.holds,
            "violations": self.violations,
            "witnesses": [w.to_json() for w in self.witnesses],
        }


class _Collector:
    def __init__(self, name: str):
        self.name = name
        self.witnesses: list = []
        self.count = 0

    def add(self, events, cell, left, right=None):
        self.count += 1
        if len(self.witnesses) < MAX_WITNESSES:
            self.witnesses.append(Witness(tuple(events), tuple(cell), left, right))

    def report(self) -> PropertyReport:
        return PropertyReport(self.name, self.count == 0, tuple(self.witnesses), self.count)


def event_family(space: FiniteSpace | Iterable, what: str = "space") -> list:
    """Sorted-label tuples for every event checked on ``space``."""
    labels = tuple(space)
    n = len(labels)
    if n <= get_cap("subsets"):
        return [tuple(labels[i] for i in range(n) if mask >> i & 1) for mask in range(1 << n)]
    warnings.warn(
        f"{what} has {n} atoms, above the subset cap; checking singletons and complements only",
        stacklevel=3,
    )
    fam = [()]
    for i in range(n):
        fam.append((labels[i],))
        fam.append(labels[:i] + labels[i + 1:])
    fam.append(labels)
    return fam


def _ordered_cells(dist_map: dict, spaces: list) -> list:
    index = [{x: i for i, x in enumerate(s)} for s in spaces]
    return sorted(dist_map, key=lambda c: tuple(index[i][x] for i, x in enumerate(c)))


def _subset_probs(dist: dict, events: list, pos: int = 0) -> list:
    out = []
    for ev in events:
        s = set(ev)
        out.append(sum((m for k, m in dist.items() if k[pos] in s), Fraction(0)))
    return out


class _Kernels:
    """Conditional laws of a model shared by the checkers."""

    def __init__(self, p: HVModel):
        t = p.table
        self.model = p
        self.joint = conditional_distribution(t, (XA, XB), (YA, YB, LAM))
        self.own_a = conditional_distribution(t, (XA,), (YA, LAM))
        self.own_b = conditional_distribution(t, (XB,), (YB, LAM))
        self.cells = _ordered_cells(self.joint, [p.measurements_a, p.measurements_b, p.hidden])
        self.ev_a = event_family(p.outcomes_a, "X_a")
        self.ev_b = event_family(p.outcomes_b, "X_b")

    def joint_probs(self, cell) -> list:
        """``[[q(J_a x J_b) for J_b] for J_a]`` at the given (y_a, y_b, lambda) cell."""
        dist = self.joint[cell]
        rows = []
        for ja in self.ev_a:
            sa = set(ja)
            by_b: dict = defaultdict(Fraction)
            for (xa, xb), m in dist.items():
                if xa in sa:
                    by_b[xb] += m
            rows.append([sum((by_b[x] for x in jb if x in by_b), Fraction(0)) for jb in self.ev_b])
        return rows


def _cell(cell) -> tuple:
    ya, yb, lam = cell
    return (("y_a", ya), ("y_b", yb), ("lambda", lam))


def check_locality(p: HVModel, _k: _Kernels | None = None) -> PropertyReport:
    k = _k or _Kernels(p)
    out = _Collector(LOCALITY)
    for cell in k.cells:
        ya, yb, lam = cell
        pa = _subset_probs(k.own_a[(ya, lam)], k.ev_a)
        pb = _subset_probs(k.own_b[(yb, lam)], k.ev_b)
        rows = k.joint_probs(cell)
        for i, ja in enumerate(k.ev_a):
            for j, jb in enumerate(k.ev_b):
                left, right = rows[i][j], pa[i] * pb[j]
                if left != right:
                    out.add((("J_a", ja), ("J_b", jb)), _cell(cell), left, right)
    return out.report()


def check_parameter_independence(p: HVModel, _k: _Kernels | None = None) -> PropertyReport:
    k = _k or _Kernels(p)
    out = _Collector(PARAMETER_INDEPENDENCE)
    for cell in k.cells:
        ya, yb, lam = cell
        dist = k.joint[cell]
        full_a = _subset_probs(dist, k.ev_a, 0)
        own_a = _subset_probs(k.own_a[(ya, lam)], k.ev_a)
        for ja, left, right in zip(k.ev_a, full_a, own_a):
            if left != right:
                out.add((("J_a", ja),), _cell(cell), left, right)
        full_b = _subset_probs(dist, k.ev_b, 1)
        own_b = _subset_probs(k.own_b[(yb, lam)], k.ev_b)
        for jb, left, right in zip(k.ev_b, full_b, own_b):
            if left != right:
                out.add((("J_b", jb),), _cell(cell), left, right)
    return out.report()


def check_outcome_independence(p: HVModel, _k: _Kernels | None = None) -> PropertyReport:
    k = _k or _Kernels(p)
    out = _Collector(OUTCOME_INDEPENDENCE)
    for cell in k.cells:
        dist = k.joint[cell]
        pa = _subset_probs(dist, k.ev_a, 0)
        pb = _subset_probs(dist, k.ev_b, 1)
        rows = k.joint_probs(cell)
        for i, ja in enumerate(k.ev_a):
            for j, jb in enumerate(k.ev_b):
                left, right = rows[i][j], pa[i] * pb[j]
                if left != right:
                    out.add((("J_a", ja), ("J_b", jb)), _cell(cell), left, right)
    return out.report()


def check_strong_determinism(p: HVModel, _k: _Kernels | None = None) -> PropertyReport:
    k = _k or _Kernels(p)
    out = _Collector(STRONG_DETERMINISM)
    for side, own, events, space in (("a", k.own_a, k.ev_a, p.measurements_a),
                                     ("b", k.own_b, k.ev_b, p.measurements_b)):
        for cell in _ordered_cells(own, [space, p.hidden]):
            y, lam = cell
            for ev, val in zip(events, _subset_probs(own[cell], events)):
                if val not in (0, 1):
                    out.add(((f"J_{side}", ev),), ((f"y_{side}", y), ("lambda", lam)), val)
    return out.report()


def check_weak_determinism(p: HVModel, _k: _Kernels | None = None) -> PropertyReport:
    k = _k or _Kernels(p)
    out = _Collector(WEAK_DETERMINISM)
    for cell in k.cells:
        rows = k.joint_probs(cell)
        for i, ja in enumerate(k.ev_a):
            for j, jb in enumerate(k.ev_b):
                if rows[i][j] not in (0, 1):
                    out.add((("J_a", ja), ("J_b", jb)), _cell(cell), rows[i][j])
    return out.report()


def check_lambda_independence(p: HVModel, form: str = "i") -> PropertyReport:
    """Independence of the hidden variable from the measurement choices.

    ``form`` selects one of three equivalent formulations: ``"i"`` the
    conditional identity ``p[L||Y]_y = p(L)``, ``"ii"`` the product form of
    the (Y, lambda) marginal, ``"iii"`` ``p(K x L) = p(K) p(L)`` for all events.
    """
    t = p.table
    out = _Collector(LAMBDA_INDEPENDENCE)
    ell = marginal(t, (LAM,))
    ev_l = event_family(p.hidden, "Lambda")
    if form == "i":
        cond = conditional_distribution(t, (LAM,), (YA, YB))
        prior = _subset_probs({(lam,): ell[(lam,)] for lam in p.hidden}, ev_l)
        for y in _ordered_cells(cond, [p.measurements_a, p.measurements_b]):
            for ev, left, right in zip(ev_l, _subset_probs(cond[y], ev_l), prior):
                if left != right:
                    out.add((("L", ev),), (("y_a", y[0]), ("y_b", y[1])), left, right)
    elif form == "ii":
        myl = marginal(t, (YA, YB, LAM))
        my = marginal(t, (YA, YB))
        for ya in p.measurements_a:
            for yb in p.measurements_b:
                for lam in p.hidden:
                    left = myl[(ya, yb, lam)]
                    right = my[(ya, yb)] * ell[(lam,)]
                    if left != right:
                        out.add((), (("y_a", ya), ("y_b", yb), ("lambda", lam)), left, right)
    elif form == "iii":
        myl = marginal(t, (YA, YB, LAM))
        ycells = [(a, b) for a in p.measurements_a for b in p.measurements_b]
        ev_k = event_family(ycells, "Y")
        pl = [sum((ell[(lam,)] for lam in ev), Fraction(0)) for ev in ev_l]
        for kev in ev_k:
            pk = sum((myl[(a, b, lam)] for (a, b) in kev for lam in p.hidden), Fraction(0))
            for lev, right_l in zip(ev_l, pl):
                left = sum((myl[(a, b, lam)] for (a, b) in kev for lam in lev), Fraction(0))
                if left != pk * right_l:
                    out.add((("K", kev), ("L", lev)), (), left, pk * right_l)
    else:
        raise ValueError(f"unknown form {form!r}; expected 'i', 'ii' or 'iii'")
    return out.report()


def check_all(p: HVModel) -> dict:
    """All six reports, in the order of :data:`PROPERTIES`."""
    k = _Kernels(p)
    return {
        LOCALITY: check_locality(p, k),
        PARAMETER_INDEPENDENCE: check_parameter_independence(p, k),
        OUTCOME_INDEPENDENCE: check_outcome_independence(p, k),
        LAMBDA_INDEPENDENCE: check_lambda_independence(p),
        STRONG_DETERMINISM: check_strong_determinism(p, k),
        WEAK_DETERMINISM: check_weak_determinism(p, k),
    }


_CHECKERS = {
    LOCALITY: check_locality,
    PARAMETER_INDEPENDENCE: check_parameter_independence,
    OUTCOME_INDEPENDENCE: check_outcome_independence,
    LAMBDA_INDEPENDENCE: lambda p: check_lambda_independence(p),
    STRONG_DETERMINISM: check_strong_determinism,
    WEAK_DETERMINISM: check_weak_determinism,
}


def check(p: HVModel, name: str) -> PropertyReport:
    return _CHECKERS[resolve(name)](p)


def verdicts(p: HVModel) -> dict:
    return {name: r.holds for name, r in check_all(p).items()}

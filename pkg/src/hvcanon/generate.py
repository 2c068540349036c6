"""Seeded random h.v. models, optionally built to satisfy one property.

Masses come from a small integer grid, normalized, so every model is exact
and zero-mass cells occur regularly.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction
from typing import Optional, Sequence

from .measure import FiniteSpace, ProbTable, ValidationError
from .models import HVModel
from .properties import (LAMBDA_INDEPENDENCE, LOCALITY, OUTCOME_INDEPENDENCE, PARAMETER_INDEPENDENCE,
                         STRONG_DETERMINISM, WEAK_DETERMINISM, resolve)

GRID = 4
MAX_DIM = 6


def make_rng(*parts) -> random.Random:
    """Deterministic generator keyed by ``parts`` (string seeding is stable across runs)."""
    return random.Random(":".join(str(p) for p in parts))


def parse_dims(text: str | Sequence[int]) -> tuple:
    dims = tuple(int(d) for d in (text.split(",") if isinstance(text, str) else text))
    if len(dims) != 5 or any(d < 1 or d > MAX_DIM for d in dims):
        raise ValidationError(f"dims must be five integers in 1..{MAX_DIM}, got {dims}")
    return dims


def spaces_for(dims: Sequence[int]) -> tuple:
    xa, xb, ya, yb, nl = dims
    return (
        FiniteSpace(str(i) for i in range(xa)),
        FiniteSpace(str(i) for i in range(xb)),
        FiniteSpace(str(i) for i in range(ya)),
        FiniteSpace(str(i) for i in range(yb)),
        FiniteSpace(f"l{i}" for i in range(nl)),
    )


def rand_dist(rng: random.Random, labels: Sequence, zero_rate: float = 0.3) -> dict:
    weights = [0 if rng.random() < zero_rate else rng.randint(1, GRID) for _ in labels]
    if not any(weights):
        weights[rng.randrange(len(weights))] = 1
    total = sum(weights)
    return {x: Fraction(w, total) for x, w in zip(labels, weights) if w}


def _point(rng: random.Random, labels: Sequence) -> dict:
    return {rng.choice(list(labels)): Fraction(1)}


def _coupling(rng: random.Random, qa: dict, qb: dict) -> dict:
    """A joint law with marginals ``qa`` and ``qb``: a random mixture of the
    product coupling and a north-west-corner coupling."""
    prod = {(a, b): ma * mb for a, ma in qa.items() for b, mb in qb.items()}
    ra = list(qa.items())
    rb = list(qb.items())
    rng.shuffle(rb)
    nw: dict = {}
    i = j = 0
    la, lb = ra[0][1], rb[0][1]
    while i < len(ra) and j < len(rb):
        m = min(la, lb)
        if m:
            nw[(ra[i][0], rb[j][0])] = nw.get((ra[i][0], rb[j][0]), Fraction(0)) + m
        la -= m
        lb -= m
        if la == 0:
            i += 1
            la = ra[i][1] if i < len(ra) else 0
        if lb == 0:
            j += 1
            lb = rb[j][1] if j < len(rb) else 0
    t = Fraction(rng.randint(0, 4), 4)
    out: dict = {}
    for k, m in prod.items():
        out[k] = out.get(k, Fraction(0)) + t * m
    for k, m in nw.items():
        out[k] = out.get(k, Fraction(0)) + (1 - t) * m
    return {k: m for k, m in out.items() if m}


def _maybe_point(rng: random.Random, labels: Sequence, det_rate: float = 0.25) -> dict:
    return _point(rng, labels) if rng.random() < det_rate else rand_dist(rng, labels)


def random_hv_model(seed, dims: Sequence[int] = (2, 2, 2, 2, 2), constraint: Optional[str] = None) -> HVModel:
    dims = parse_dims(dims)
    rng = make_rng("hv", seed, ",".join(map(str, dims)), constraint or "none")
    XA, XB, YA, YB, L = spaces_for(dims)
    if constraint is None:
        cells = list(itertools.product(XA, XB, YA, YB, L))
        return HVModel(ProbTable((XA, XB, YA, YB, L), rand_dist(rng, cells, zero_rate=0.4)))

    constraint = resolve(constraint)
    ycells = list(itertools.product(YA, YB, L))
    if constraint == LAMBDA_INDEPENDENCE:
        my = rand_dist(rng, list(itertools.product(YA, YB)))
        ml = rand_dist(rng, list(L))
        mu = {(ya, yb, lam): a * b for (ya, yb), a in my.items() for lam, b in ml.items()}
    else:
        mu = rand_dist(rng, ycells)

    own_a = {(ya, lam): None for ya in YA for lam in L}
    own_b = {(yb, lam): None for yb in YB for lam in L}
    if constraint == STRONG_DETERMINISM:
        for k in own_a:
            own_a[k] = _point(rng, XA)
        for k in own_b:
            own_b[k] = _point(rng, XB)
    elif constraint in (LOCALITY, PARAMETER_INDEPENDENCE):
        for k in own_a:
            own_a[k] = _maybe_point(rng, XA)
        for k in own_b:
            own_b[k] = _maybe_point(rng, XB)

    mass: dict = {}
    for (ya, yb, lam), w in mu.items():
        if constraint in (STRONG_DETERMINISM, LOCALITY):
            qa, qb = own_a[(ya, lam)], own_b[(yb, lam)]
            kernel = {(a, b): ma * mb for a, ma in qa.items() for b, mb in qb.items()}
        elif constraint == PARAMETER_INDEPENDENCE:
            kernel = _coupling(rng, own_a[(ya, lam)], own_b[(yb, lam)])
        elif constraint == OUTCOME_INDEPENDENCE:
            qa, qb = _maybe_point(rng, XA), _maybe_point(rng, XB)
            kernel = {(a, b): ma * mb for a, ma in qa.items() for b, mb in qb.items()}
        elif constraint == WEAK_DETERMINISM:
            kernel = {(rng.choice(XA.labels), rng.choice(XB.labels)): Fraction(1)}
        else:  # lambda independence: arbitrary kernels
            kernel = _maybe_point(rng, list(itertools.product(XA, XB)), det_rate=0.15)
        for (a, b), m in kernel.items():
            mass[(a, b, ya, yb, lam)] = w * m
    return HVModel(ProbTable((XA, XB, YA, YB, L), mass))


def random_prob_table(rng: random.Random, dims: Sequence[int], max_den: int = 12) -> ProbTable:
    """Table whose masses share a denominator of at most ``max_den``."""
    spaces = [FiniteSpace(str(i) for i in range(d)) for d in dims]
    cells = list(itertools.product(*(s.labels for s in spaces)))
    den = rng.randint(1, max_den)
    counts: dict = {}
    for _ in range(den):
        c = rng.choice(cells)
        counts[c] = counts.get(c, 0) + 1
    return ProbTable(spaces, {c: Fraction(k, den) for c, k in counts.items()})

"""Brute-force references that share no code path with the library."""

from __future__ import annotations

import itertools
from fractions import Fraction
from math import gcd

import numpy as np


def dense_prob(p, predicate) -> Fraction:
    """Sum of ``p`` over every cell of the full product satisfying ``predicate``."""
    total = Fraction(0)
    for cell in itertools.product(*(f.labels for f in p.factors)):
        if predicate(cell):
            total += p[cell]
    return total


def brute_conditional(p, j_factor, j_labels, z_factors) -> dict:
    """p[J||Z] from first principles: p(J x {z}) / p({z}) over the dense product."""
    out = {}
    for z in itertools.product(*(p.factors[i].labels for i in z_factors)):
        pz = dense_prob(p, lambda c: all(c[i] == v for i, v in zip(z_factors, z)))
        if pz:
            pj = dense_prob(p, lambda c: c[j_factor] in j_labels
                            and all(c[i] == v for i, v in zip(z_factors, z)))
            out[z] = pj / pz
    return out


# --- local polytope of the two-setting, two-outcome scenario ----------------------
#
# Coordinates of a no-signalling box (outcome index 0 = first label):
#   (pA(0|a0), pA(0|a1), pB(0|b0), pB(0|b1), pAB(00|a0b0), pAB(00|a0b1), pAB(00|a1b0), pAB(00|a1b1))
# The 16 deterministic strategies are the vertices; facets are found by
# trying every 8-subset of vertices as a candidate supporting hyperplane.

def _vertex(fa, fb):
    a = [int(fa[0] == 0), int(fa[1] == 0)]
    b = [int(fb[0] == 0), int(fb[1] == 0)]
    return a + b + [a[i] * b[j] for i in (0, 1) for j in (0, 1)]


VERTICES = [_vertex(fa, fb) for fa in itertools.product((0, 1), repeat=2)
            for fb in itertools.product((0, 1), repeat=2)]


def _local_facets():
    V = np.array(VERTICES, dtype=float)
    facets = set()
    for subset in itertools.combinations(range(16), 8):
        M = np.hstack([V[list(subset)], np.ones((8, 1))])  # rows [v, 1]
        # normal of the hyperplane through the 8 points: signed 8x8 minors
        normal = []
        for k in range(9):
            minor = np.delete(M, k, axis=1)
            normal.append(int(round((-1) ** k * np.linalg.det(minor))))
        if not any(normal):
            continue
        c, c0 = normal[:8], normal[8]
        vals = [sum(ci * vi for ci, vi in zip(c, v)) + c0 for v in VERTICES]
        # exact integer check that these 8 points really lie on it
        if any(vals[i] for i in subset):
            continue
        if all(x >= 0 for x in vals):
            sign = 1
        elif all(x <= 0 for x in vals):
            sign = -1
        else:
            continue
        g = 0
        for x in normal:
            g = gcd(g, abs(x))
        facets.add(tuple(sign * x // g for x in normal))
    return sorted(facets)


_FACETS = None


def local_facets():
    global _FACETS
    if _FACETS is None:
        _FACETS = _local_facets()
    return _FACETS


def local_oracle(cond) -> bool:
    """Membership of a binary two-setting box in the local polytope.

    ``cond[(a, b)][(x, y)]`` with settings and outcomes as ints 0/1.
    """
    def pa(a, b):
        return cond[(a, b)].get((0, 0), 0) + cond[(a, b)].get((0, 1), 0)

    def pb(a, b):
        return cond[(a, b)].get((0, 0), 0) + cond[(a, b)].get((1, 0), 0)

    for a in (0, 1):
        if pa(a, 0) != pa(a, 1):
            return False
    for b in (0, 1):
        if pb(0, b) != pb(1, b):
            return False
    v = [pa(0, 0), pa(1, 0), pb(0, 0), pb(0, 1)] + [cond[(a, b)].get((0, 0), 0) for a in (0, 1) for b in (0, 1)]
    return all(sum(Fraction(ci) * vi for ci, vi in zip(f[:8], v)) + f[8] >= 0 for f in local_facets())

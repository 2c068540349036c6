"""Finite measurable spaces, exact probability tables and conditional probabilities.

Every sigma-algebra here is the power set of a finite label set (or, for
:class:`Partition`, the algebra generated by a list of blocks).  Masses are
:class:`fractions.Fraction` values, so all identities are checked exactly.
"""

from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from types import MappingProxyType
from typing import Hashable, Iterable, Mapping, Sequence

Label = Hashable
Cell = tuple


class ValidationError(ValueError):
    """Raised when a space, table or model violates its invariants."""


@dataclass(frozen=True)
class FiniteSpace:
    labels: tuple

    def __init__(self, labels: Iterable[Label]):
        labels = tuple(labels)
        if not labels:
            raise ValidationError("a finite space needs at least one label")
        if len(set(labels)) != len(labels):
            raise ValidationError(f"duplicate labels in {labels!r}")
        object.__setattr__(self, "labels", labels)

    def __len__(self) -> int:
        return len(self.labels)

    def __iter__(self):
        return iter(self.labels)

    def __contains__(self, label) -> bool:
        return label in self.labels

    def index(self, label) -> int:
        return self.labels.index(label)

    def subsets(self) -> Iterable[frozenset]:
        """All subsets, ordered by bitmask over the declared label order."""
        n = len(self.labels)
        for mask in range(1 << n):
            yield frozenset(self.labels[i] for i in range(n) if mask >> i & 1)


@dataclass(frozen=True)
class Partition:
    """A finite sub-algebra of ``base``, given by its atoms."""

    base: FiniteSpace
    blocks: tuple

    def __init__(self, base: FiniteSpace, blocks: Iterable[Iterable[Label]]):
        blocks = tuple(tuple(b) for b in blocks)
        seen: list = []
        for block in blocks:
            if not block:
                raise ValidationError("partition blocks must be nonempty")
            for label in block:
                if label not in base:
                    raise ValidationError(f"label {label!r} not in base space")
            seen.extend(block)
        if len(seen) != len(set(seen)):
            raise ValidationError("partition blocks overlap")
        if set(seen) != set(base.labels):
            raise ValidationError("partition blocks do not cover the base space")
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "blocks", blocks)

    @classmethod
    def discrete(cls, base: FiniteSpace) -> "Partition":
        return cls(base, [(x,) for x in base])

    @classmethod
    def trivial(cls, base: FiniteSpace) -> "Partition":
        return cls(base, [base.labels])

    def block_of(self, label) -> tuple:
        for block in self.blocks:
            if label in block:
                return block
        raise KeyError(label)


@dataclass(frozen=True)
class Event:
    """The set ``labels`` in factor ``factor``, i.e. a cylinder in the product."""

    factor: int
    labels: frozenset

    def __init__(self, factor: int, labels: Iterable[Label]):
        object.__setattr__(self, "factor", int(factor))
        object.__setattr__(self, "labels", frozenset(labels))


def product(spaces: Sequence[FiniteSpace]) -> FiniteSpace:
    if not spaces:
        raise ValidationError("product of an empty list of spaces")
    return FiniteSpace(itertools.product(*(s.labels for s in spaces)))


class ProbTable:
    """An exact probability mass function on a product of finite spaces.

    Only cells of positive mass are stored; ``table[cell]`` returns 0 for the
    others.
    """

    __slots__ = ("_factors", "_mass")

    def __init__(self, factors: Sequence[FiniteSpace], mass: Mapping[Cell, object]):
        factors = tuple(factors)
        if not factors:
            raise ValidationError("a table needs at least one factor")
        clean: dict = {}
        total = Fraction(0)
        for key, value in mass.items():
            key = tuple(key)
            if len(key) != len(factors):
                raise ValidationError(f"cell {key!r} has wrong arity for {len(factors)} factors")
            for label, space in zip(key, factors):
                if label not in space:
                    raise ValidationError(f"label {label!r} of cell {key!r} not in its factor")
            q = Fraction(value)
            if q < 0:
                raise ValidationError(f"negative mass {q} at {key!r}")
            if q:
                clean[key] = clean.get(key, Fraction(0)) + q
            total += q
        if total != 1:
            raise ValidationError(f"total mass is {total}, expected 1")
        self._factors = factors
        self._mass = MappingProxyType(clean)

    @classmethod
    def from_weights(cls, factors: Sequence[FiniteSpace], weights: Mapping[Cell, object]) -> "ProbTable":
        total = sum((Fraction(w) for w in weights.values()), Fraction(0))
        if total <= 0:
            raise ValidationError("weights must have positive total")
        return cls(factors, {k: Fraction(w) / total for k, w in weights.items()})

    @property
    def factors(self) -> tuple:
        return self._factors

    @property
    def mass(self) -> Mapping[Cell, Fraction]:
        return self._mass

    def __getitem__(self, cell) -> Fraction:
        return self._mass.get(tuple(cell), Fraction(0))

    def __iter__(self):
        return iter(self._mass)

    def items(self):
        return self._mass.items()

    def support(self) -> frozenset:
        return frozenset(self._mass)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ProbTable):
            return NotImplemented
        return self._factors == other._factors and dict(self._mass) == dict(other._mass)

    def __hash__(self):
        return hash((self._factors, frozenset(self._mass.items())))

    def __repr__(self) -> str:
        body = ", ".join(f"{k}: {v}" for k, v in sorted(self._mass.items(), key=lambda kv: repr(kv[0])))
        return f"ProbTable({{{body}}})"

    def prob(self, *events: Event) -> Fraction:
        """Mass of the intersection of the given cylinder events."""
        _check_events(self, events)
        return sum(
            (m for cell, m in self._mass.items() if all(cell[e.factor] in e.labels for e in events)),
            Fraction(0),
        )

    def permute(self, order: Sequence[int]) -> "ProbTable":
        order = tuple(order)
        if sorted(order) != list(range(len(self._factors))):
            raise ValidationError(f"{order!r} is not a permutation of the factors")
        return ProbTable(
            [self._factors[i] for i in order],
            {tuple(cell[i] for i in order): m for cell, m in self._mass.items()},
        )


def _check_events(p: ProbTable, events: Iterable[Event]) -> None:
    for e in events:
        if not 0 <= e.factor < len(p.factors):
            raise ValidationError(f"event refers to missing factor {e.factor}")
        if not e.labels <= set(p.factors[e.factor].labels):
            raise ValidationError(f"event labels {set(e.labels)!r} outside factor {e.factor}")


def _normalize_indices(p: ProbTable, idx: Iterable[int]) -> tuple:
    idx = tuple(idx)
    if not idx:
        raise ValidationError("factor index set must be nonempty")
    if len(set(idx)) != len(idx):
        raise ValidationError(f"repeated factor index in {idx!r}")
    for i in idx:
        if not 0 <= i < len(p.factors):
            raise ValidationError(f"no factor {i}")
    return idx


def marginal(p: ProbTable, keep: Iterable[int]) -> ProbTable:
    """Marginal on the factors ``keep``, in the order given."""
    keep = _normalize_indices(p, keep)
    out: dict = defaultdict(Fraction)
    for cell, m in p.items():
        out[tuple(cell[i] for i in keep)] += m
    return ProbTable([p.factors[i] for i in keep], out)


@dataclass(frozen=True)
class CondTable:
    """Values of ``p[J||Z]`` on the conditioning cells of positive mass."""

    factors: tuple
    values: Mapping[Cell, Fraction]

    @property
    def support(self) -> frozenset:
        return frozenset(self.values)

    def __getitem__(self, cell) -> Fraction:
        return self.values[tuple(cell)]


def conditional(p: ProbTable, J: Event | Sequence[Event], Z: Iterable[int]) -> CondTable:
    """The conditional probability ``p[J||Z]`` as a function of the Z-cell.

    ``J`` may be a single event or a list of events on distinct factors (their
    intersection); none of them may sit in a factor of ``Z``.
    """
    Z = _normalize_indices(p, Z)
    events = (J,) if isinstance(J, Event) else tuple(J)
    _check_events(p, events)
    for e in events:
        if e.factor in Z:
            raise ValidationError(f"event factor {e.factor} lies inside the conditioning set")
    hit: dict = defaultdict(Fraction)
    tot: dict = defaultdict(Fraction)
    for cell, m in p.items():
        z = tuple(cell[i] for i in Z)
        tot[z] += m
        if all(cell[e.factor] in e.labels for e in events):
            hit[z] += m
    return CondTable(Z, MappingProxyType({z: hit[z] / t for z, t in tot.items()}))


def conditional_distribution(p: ProbTable, target: Sequence[int], given: Sequence[int]) -> dict:
    """Map each positive-mass ``given`` cell to the law of the ``target`` factors.

    Equivalent to evaluating :func:`conditional` on every singleton event of
    the target factors; checkers use it to avoid re-scanning the table.
    """
    joint: dict = defaultdict(lambda: defaultdict(Fraction))
    tot: dict = defaultdict(Fraction)
    for cell, m in p.items():
        z = tuple(cell[i] for i in given)
        joint[z][tuple(cell[i] for i in target)] += m
        tot[z] += m
    return {z: {x: m / tot[z] for x, m in dist.items()} for z, dist in joint.items()}


def agrees_on(p: ProbTable, q: ProbTable, factors: Iterable[int]) -> bool:
    factors = tuple(factors)
    _normalize_indices(p, factors)
    _normalize_indices(q, factors)
    if any(p.factors[i] != q.factors[i] for i in factors):
        raise ValidationError("tables disagree on the named factor spaces")
    return marginal(p, factors) == marginal(q, factors)


def is_extension(p: ProbTable, r: ProbTable, factors: Iterable[int]) -> bool:
    """True when ``r`` is the marginal of ``p`` on ``factors``."""
    factors = tuple(factors)
    _normalize_indices(p, factors)
    if tuple(p.factors[i] for i in factors) != r.factors:
        raise ValidationError("factor spaces of the extension and the base table differ")
    return marginal(p, factors) == r

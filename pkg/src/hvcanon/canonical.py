"""Moving any finite h.v. model onto the Lebesgue unit interval.

For a finite model the sub-algebra of hidden events that the observable
conditionals can see is finite: its atoms are the classes of hidden states
with identical conditional laws on outcomes x measurements
(:func:`kernel_atoms`).  Laying those atoms out as consecutive half-open
intervals of [0, 1) with lengths equal to their masses is a measure-algebra
isomorphism onto its image, and pushing the model through it gives a
realization-equivalent model on ([0,1], Borel, Lebesgue).
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .measure import FiniteSpace, Partition, ProbTable, ValidationError, conditional_distribution, marginal
from .models import LAM, OBSERVABLE, EmpiricalModel, HVModel, format_fraction, parse_fraction, table_from_json, table_to_json
from .properties import check_all

ZERO = Fraction(0)
ONE = Fraction(1)


@dataclass(frozen=True, order=True)
class Interval:
    """Half-open interval ``[lo, hi)`` with rational endpoints."""

    lo: Fraction
    hi: Fraction

    def __init__(self, lo, hi):
        object.__setattr__(self, "lo", Fraction(lo))
        object.__setattr__(self, "hi", Fraction(hi))
        if self.lo > self.hi:
            raise ValidationError(f"interval [{self.lo}, {self.hi}) has lo > hi")

    @property
    def length(self) -> Fraction:
        return self.hi - self.lo

    def overlap(self, other: "Interval") -> Fraction:
        return max(ZERO, min(self.hi, other.hi) - max(self.lo, other.lo))

    def __contains__(self, other: "Interval") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    def __str__(self) -> str:
        return f"[{self.lo}, {self.hi})"


def total_length(intervals: Iterable[Interval]) -> Fraction:
    """Lebesgue measure of a finite union of intervals (overlaps counted once)."""
    ivs = sorted((iv for iv in intervals if iv.length), key=lambda iv: iv.lo)
    total, cur_lo, cur_hi = ZERO, None, None
    for iv in ivs:
        if cur_hi is None or iv.lo > cur_hi:
            if cur_hi is not None:
                total += cur_hi - cur_lo
            cur_lo, cur_hi = iv.lo, iv.hi
        else:
            cur_hi = max(cur_hi, iv.hi)
    if cur_hi is not None:
        total += cur_hi - cur_lo
    return total


def interval_halve(iv: Interval) -> Interval:
    """Left half of ``iv``: a sub-interval of exactly half its length."""
    if iv.lo >= iv.hi:
        raise ValidationError(f"cannot halve empty interval {iv}")
    return Interval(iv.lo, (iv.lo + iv.hi) / 2)


def dyadic_subevent(iv: Interval, fraction: Fraction) -> list:
    """A union of iterated halves of ``iv`` with length ``fraction * iv.length``.

    ``fraction`` must be a dyadic rational in [0, 1].
    """
    fraction = Fraction(fraction)
    den = fraction.denominator
    if not 0 <= fraction <= 1 or den & (den - 1):
        raise ValidationError(f"{fraction} is not a dyadic fraction in [0, 1]")
    if fraction == 1:
        return [iv]
    out = []
    cur, rest = iv, fraction
    while rest:
        left = interval_halve(cur)
        rest *= 2
        if rest >= 1:
            out.append(left)
            rest -= 1
            cur = Interval(left.hi, cur.hi)
        else:
            cur = left
    return out


class IntervalHVModel:
    """An h.v. model whose hidden variable is uniform on [0, 1).

    ``pieces`` is a list of ``(Interval, kernel)`` covering [0, 1) without
    overlap; on each piece the law of (outcomes, measurements) is ``kernel``.
    """

    def __init__(self, spaces: Sequence[FiniteSpace], pieces: Iterable[tuple]):
        spaces = tuple(spaces)
        if len(spaces) != 4:
            raise ValidationError("interval models carry the four observable spaces")
        pieces = tuple(sorted(((iv, k) for iv, k in pieces), key=lambda pk: pk[0].lo))
        if not pieces:
            raise ValidationError("interval model needs at least one piece")
        edge = ZERO
        for iv, kernel in pieces:
            if iv.lo != edge:
                raise ValidationError(f"pieces do not tile [0, 1): gap or overlap at {edge}")
            if iv.length <= 0:
                raise ValidationError(f"empty piece {iv}")
            if kernel.factors != spaces:
                raise ValidationError("piece kernel spaces differ from the model spaces")
            edge = iv.hi
        if edge != ONE:
            raise ValidationError(f"pieces end at {edge}, not 1")
        self.spaces = spaces
        self.pieces = pieces

    def __eq__(self, other):
        if not isinstance(other, IntervalHVModel):
            return NotImplemented
        return self.spaces == other.spaces and self.pieces == other.pieces

    def __repr__(self):
        return f"IntervalHVModel({len(self.pieces)} pieces)"

    def measure(self, cells: Iterable[tuple] | None, event: Iterable[Interval]) -> Fraction:
        """Mass of ``cells x event``; ``cells=None`` means all of X x Y."""
        event = list(event)
        cells = None if cells is None else {tuple(c) for c in cells}
        total = ZERO
        for iv, kernel in self.pieces:
            size = sum((iv.overlap(e) for e in event), ZERO)
            if not size:
                continue
            weight = ONE if cells is None else sum((kernel[c] for c in cells), ZERO)
            total += size * weight
        return total

    def empirical(self) -> EmpiricalModel:
        out: dict = defaultdict(Fraction)
        for iv, kernel in self.pieces:
            for cell, m in kernel.items():
                out[cell] += iv.length * m
        return EmpiricalModel(ProbTable(self.spaces, out))

    def collapse(self) -> HVModel:
        """Finite model with one hidden label per piece, of mass equal to its length."""
        width = len(str(len(self.pieces) - 1))
        labels = [f"u{i:0{width}d}" for i in range(len(self.pieces))]
        mass = {}
        for label, (iv, kernel) in zip(labels, self.pieces):
            for cell, m in kernel.items():
                mass[cell + (label,)] = iv.length * m
        return HVModel(ProbTable(self.spaces + (FiniteSpace(labels),), mass))


@dataclass(frozen=True)
class IsoMap:
    """Images of the hidden-state atoms as finite unions of intervals."""

    images: tuple  # ((block labels, (Interval, ...), mass), ...)

    def image(self, blocks: Iterable[Sequence]) -> list:
        wanted = {tuple(b) for b in blocks}
        return [iv for block, ivs, _ in self.images if block in wanted for iv in ivs]

    def mass(self, block: Sequence) -> Fraction:
        for b, _, m in self.images:
            if b == tuple(block):
                return m
        raise KeyError(block)

    def blocks(self) -> list:
        return [b for b, _, _ in self.images]


def hv_distribution(p: HVModel) -> ProbTable:
    return marginal(p.table, (LAM,))


def _kernels(p: HVModel) -> dict:
    return conditional_distribution(p.table, OBSERVABLE, (LAM,))


def atomless_lift(p: HVModel) -> IntervalHVModel:
    """Product with the unit interval: each hidden state of positive mass becomes
    an interval of that length, taken in declared label order."""
    ell = hv_distribution(p)
    kernels = _kernels(p)
    pieces, edge = [], ZERO
    for lam in p.hidden:
        w = ell[(lam,)]
        if not w:
            continue
        pieces.append((Interval(edge, edge + w), ProbTable(p.spaces[:4], kernels[(lam,)])))
        edge += w
    return IntervalHVModel(p.spaces[:4], pieces)


def kernel_atoms(p: HVModel) -> Partition:
    """Partition of the positive-mass hidden states by conditional law.

    Two states share a block iff their conditional laws on X x Y agree
    atom by atom.  Blocks are sorted by their smallest label (as strings).
    """
    kernels = _kernels(p)
    groups: dict = defaultdict(list)
    for lam in p.hidden:
        if (lam,) in kernels:
            groups[frozenset(kernels[(lam,)].items())].append(lam)
    blocks = sorted((tuple(g) for g in groups.values()), key=lambda b: min(str(x) for x in b))
    base = FiniteSpace(lam for lam in p.hidden if (lam,) in kernels)
    return Partition(base, blocks)


def canonicalize(p: HVModel) -> tuple:
    """Realization-equivalent model on the unit interval, with the atom map.

    Returns ``(IntervalHVModel, IsoMap)``.
    """
    atoms = kernel_atoms(p)
    ell = hv_distribution(p)
    kernels = _kernels(p)
    pieces, images, edge = [], [], ZERO
    for block in atoms.blocks:
        w = sum((ell[(lam,)] for lam in block), ZERO)
        iv = Interval(edge, edge + w)
        pieces.append((iv, ProbTable(p.spaces[:4], kernels[(block[0],)])))
        images.append((block, (iv,), w))
        edge += w
    return IntervalHVModel(p.spaces[:4], pieces), IsoMap(tuple(images))


def check_interval_properties(m: IntervalHVModel) -> dict:
    """The six property reports, each piece acting as one hidden atom of
    measure equal to its length."""
    return check_all(m.collapse())


# --- JSON ---------------------------------------------------------------------

def interval_model_to_json(m: IntervalHVModel, iso: IsoMap | None = None) -> dict:
    keys = ("outcomes_a", "outcomes_b", "measurements_a", "measurements_b")
    data: dict = {k: [str(x) for x in s] for k, s in zip(keys, m.spaces)}
    data["pieces"] = [
        {"lo": format_fraction(iv.lo), "hi": format_fraction(iv.hi), "kernel": table_to_json(k)}
        for iv, k in m.pieces
    ]
    if iso is not None:
        data["iso"] = [
            {
                "block": [str(x) for x in block],
                "mass": format_fraction(mass),
                "intervals": [[format_fraction(iv.lo), format_fraction(iv.hi)] for iv in ivs],
            }
            for block, ivs, mass in iso.images
        ]
    return data


def interval_model_from_json(data: dict) -> tuple:
    """Inverse of :func:`interval_model_to_json`; returns ``(model, iso or None)``."""
    keys = ("outcomes_a", "outcomes_b", "measurements_a", "measurements_b")
    try:
        spaces = [FiniteSpace(str(x) for x in data[k]) for k in keys]
        pieces = [
            (Interval(parse_fraction(pc["lo"]), parse_fraction(pc["hi"])),
             table_from_json(pc["kernel"], spaces))
            for pc in data["pieces"]
        ]
    except KeyError as exc:
        raise ValidationError(f"missing key {exc}") from None
    model = IntervalHVModel(spaces, pieces)
    iso = None
    if "iso" in data:
        iso = IsoMap(tuple(
            (tuple(item["block"]),
             tuple(Interval(parse_fraction(a), parse_fraction(b)) for a, b in item["intervals"]),
             parse_fraction(item["mass"]))
            for item in data["iso"]
        ))
    return model, iso

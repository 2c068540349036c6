"""Empirical and hidden-variable models of a bipartite experiment.

Factor order is fixed: outcomes ``(x_a, x_b)``, measurements ``(y_a, y_b)``,
then the hidden variable.
"""

from __future__ import annotations

import json
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Iterable, Sequence

from .measure import FiniteSpace, Partition, ProbTable, ValidationError, agrees_on, marginal

XA, XB, YA, YB, LAM = range(5)
OBSERVABLE = (XA, XB, YA, YB)


@dataclass(frozen=True)
class EmpiricalModel:
    table: ProbTable

    def __post_init__(self):
        if len(self.table.factors) != 4:
            raise ValidationError("an empirical model has exactly four factors")

    @property
    def spaces(self) -> tuple:
        return self.table.factors

    @property
    def outcomes_a(self) -> FiniteSpace:
        return self.table.factors[XA]

    @property
    def outcomes_b(self) -> FiniteSpace:
        return self.table.factors[XB]

    @property
    def measurements_a(self) -> FiniteSpace:
        return self.table.factors[YA]

    @property
    def measurements_b(self) -> FiniteSpace:
        return self.table.factors[YB]

    def contexts(self) -> list:
        """Measurement pairs of positive mass, in declared order."""
        my = marginal(self.table, (YA, YB))
        return [(a, b) for a in self.measurements_a for b in self.measurements_b if my[(a, b)]]


@dataclass(frozen=True)
class HVModel:
    table: ProbTable

    def __post_init__(self):
        if len(self.table.factors) != 5:
            raise ValidationError("a hidden-variable model has exactly five factors")

    @property
    def spaces(self) -> tuple:
        return self.table.factors

    @property
    def outcomes_a(self) -> FiniteSpace:
        return self.table.factors[XA]

    @property
    def outcomes_b(self) -> FiniteSpace:
        return self.table.factors[XB]

    @property
    def measurements_a(self) -> FiniteSpace:
        return self.table.factors[YA]

    @property
    def measurements_b(self) -> FiniteSpace:
        return self.table.factors[YB]

    @property
    def hidden(self) -> FiniteSpace:
        return self.table.factors[LAM]

    def empirical(self) -> EmpiricalModel:
        return EmpiricalModel(marginal(self.table, OBSERVABLE))


def realizes(p: HVModel, e: EmpiricalModel) -> bool:
    if p.spaces[:4] != e.spaces:
        raise ValidationError("observable spaces of the two models differ")
    return p.empirical().table == e.table


def realization_equivalent(p: HVModel, q: HVModel) -> bool:
    if p.spaces[:4] != q.spaces[:4]:
        raise ValidationError("observable spaces of the two models differ")
    return agrees_on(p.table, q.table, OBSERVABLE)


@dataclass(frozen=True)
class RestrictionSpec:
    """Finite sub-algebras of the two outcome spaces, given by their atoms."""

    blocks_a: Partition
    blocks_b: Partition


def block_label(block: Sequence) -> str:
    return "+".join(str(x) for x in block)


def _restrict_table(table: ProbTable, spec: RestrictionSpec) -> ProbTable:
    if table.factors[XA] != spec.blocks_a.base or table.factors[XB] != spec.blocks_b.base:
        raise ValidationError("restriction partitions do not match the outcome spaces")
    to_a = {x: block_label(b) for b in spec.blocks_a.blocks for x in b}
    to_b = {x: block_label(b) for b in spec.blocks_b.blocks for x in b}
    out: dict = defaultdict(Fraction)
    for cell, m in table.items():
        out[(to_a[cell[XA]], to_b[cell[XB]]) + cell[2:]] += m
    factors = (
        FiniteSpace(block_label(b) for b in spec.blocks_a.blocks),
        FiniteSpace(block_label(b) for b in spec.blocks_b.blocks),
    ) + table.factors[2:]
    return ProbTable(factors, out)


def restrict(model, spec: RestrictionSpec):
    """Restrict an empirical or h.v. model to the outcome sub-algebras of ``spec``.

    Each block becomes one outcome label; measurement and hidden factors are
    left alone.
    """
    if isinstance(model, HVModel):
        return HVModel(_restrict_table(model.table, spec))
    if isinstance(model, EmpiricalModel):
        return EmpiricalModel(_restrict_table(model.table, spec))
    raise TypeError(f"cannot restrict {type(model).__name__}")


# --- JSON ---------------------------------------------------------------------

def format_fraction(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def parse_fraction(text: Any) -> Fraction:
    if isinstance(text, int) and not isinstance(text, bool):
        return Fraction(text)
    if not isinstance(text, str):
        raise ValidationError(f"masses must be 'num/den' strings, got {text!r}")
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ValidationError(f"bad rational {text!r}") from exc


def _space(data: dict, key: str) -> FiniteSpace:
    if key not in data:
        raise ValidationError(f"missing key {key!r}")
    labels = [str(x) for x in data[key]]
    for label in labels:
        if "," in label:
            raise ValidationError(f"label {label!r} may not contain a comma")
    return FiniteSpace(labels)


def table_to_json(table: ProbTable) -> dict:
    """Cells in declared label order, omitting zero masses."""
    index = [{x: i for i, x in enumerate(f)} for f in table.factors]
    cells = sorted(table.mass, key=lambda c: tuple(index[i][x] for i, x in enumerate(c)))
    return {",".join(str(x) for x in c): format_fraction(table[c]) for c in cells}


def table_from_json(mass: dict, factors: Sequence[FiniteSpace]) -> ProbTable:
    out = {}
    for key, value in mass.items():
        cell = tuple(part.strip() for part in key.split(","))
        if len(cell) != len(factors):
            raise ValidationError(f"key {key!r} has arity {len(cell)}, expected {len(factors)}")
        if cell in out:
            raise ValidationError(f"duplicate key {key!r}")
        out[cell] = parse_fraction(value)
    return ProbTable(factors, out)


_SPACE_KEYS = ("outcomes_a", "outcomes_b", "measurements_a", "measurements_b")


def model_to_json(model) -> dict:
    t = model.table
    data: dict = {k: [str(x) for x in t.factors[i]] for i, k in enumerate(_SPACE_KEYS)}
    if isinstance(model, HVModel):
        data["lambda"] = [str(x) for x in model.hidden]
        data["p"] = table_to_json(t)
    else:
        data["e"] = table_to_json(t)
    return data


def model_from_json(data: dict):
    """Load an :class:`HVModel` (key ``"lambda"`` present) or an :class:`EmpiricalModel`."""
    if not isinstance(data, dict):
        raise ValidationError("model JSON must be an object")
    spaces = [_space(data, k) for k in _SPACE_KEYS]
    if "lambda" in data:
        spaces.append(_space(data, "lambda"))
        mass = data.get("p", data.get("e"))
        if mass is None:
            raise ValidationError("h.v. model needs a 'p' table")
        return HVModel(table_from_json(mass, spaces))
    if "e" not in data:
        raise ValidationError("empirical model needs an 'e' table")
    return EmpiricalModel(table_from_json(data["e"], spaces))


def load_model(path) -> Any:
    with open(path, encoding="utf-8") as fh:
        return model_from_json(json.load(fh))


def dumps(data: Any) -> str:
    return json.dumps(data, indent=2, sort_keys=False) + "\n"


def make_hv(outcomes_a: Iterable, outcomes_b: Iterable, measurements_a: Iterable,
            measurements_b: Iterable, hidden: Iterable, mass: dict) -> HVModel:
    spaces = [FiniteSpace(str(x) for x in s)
              for s in (outcomes_a, outcomes_b, measurements_a, measurements_b, hidden)]
    return HVModel(ProbTable(spaces, {tuple(str(x) for x in k): v for k, v in mass.items()}))


def make_empirical(outcomes_a: Iterable, outcomes_b: Iterable, measurements_a: Iterable,
                   measurements_b: Iterable, mass: dict) -> EmpiricalModel:
    spaces = [FiniteSpace(str(x) for x in s)
              for s in (outcomes_a, outcomes_b, measurements_a, measurements_b)]
    return EmpiricalModel(ProbTable(spaces, {tuple(str(x) for x in k): v for k, v in mass.items()}))

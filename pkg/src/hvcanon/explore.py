"""Empirical map of implications between the six properties.

For each property P, models built to satisfy P are checked against every
other property Q.  The first model where Q fails is kept as a counterexample
fixture; a pair with no failure after all trials is reported with its trial
count.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

from .measure import ValidationError
from .models import HVModel, model_from_json, model_to_json
from .properties import (LOCALITY, OUTCOME_INDEPENDENCE, PARAMETER_INDEPENDENCE, PROPERTIES, SHORT,
                         STRONG_DETERMINISM, WEAK_DETERMINISM, check_all)
from .generate import random_hv_model

# Implications that hold (locality <=> PI and OI, strong => weak determinism,
# strong determinism => PI, weak determinism => OI, and their consequences).
KNOWN_TRUE = frozenset({
    (LOCALITY, PARAMETER_INDEPENDENCE),
    (LOCALITY, OUTCOME_INDEPENDENCE),
    (STRONG_DETERMINISM, WEAK_DETERMINISM),
    (STRONG_DETERMINISM, PARAMETER_INDEPENDENCE),
    (STRONG_DETERMINISM, OUTCOME_INDEPENDENCE),
    (STRONG_DETERMINISM, LOCALITY),
    (WEAK_DETERMINISM, OUTCOME_INDEPENDENCE),
})

PAIRS = tuple((p, q) for p in PROPERTIES for q in PROPERTIES if p != q)

FIXTURE_DIR = Path(__file__).parent / "fixtures" / "counterexamples"


def fixture_name(p: str, q: str) -> str:
    return f"{SHORT[p]}_not_{SHORT[q]}.json"


@dataclass
class Entry:
    holds: str
    fails: str
    trials: int = 0
    counterexample: Optional[HVModel] = None
    trial: Optional[int] = None
    fixture: Optional[str] = None

    @property
    def status(self) -> str:
        return "counterexample" if self.counterexample is not None else "no-counterexample"


@dataclass
class ImplicationMatrix:
    seed: object
    trials: int
    dims: tuple
    entries: dict = field(default_factory=dict)  # (P, Q) -> Entry
    joint_checked: int = 0  # models where PI and OI both hold
    joint_violations: int = 0  # models where locality differs from PI and OI

    def problems(self) -> list:
        """Pairs whose outcome contradicts the known relationships."""
        out = []
        for (p, q), e in self.entries.items():
            if (p, q) in KNOWN_TRUE and e.counterexample is not None:
                out.append(f"counterexample to known implication {SHORT[p]} => {SHORT[q]}")
            if (p, q) not in KNOWN_TRUE and e.counterexample is None:
                out.append(f"no counterexample found for {SHORT[p]} => {SHORT[q]}")
        if self.joint_violations:
            out.append(f"locality <=> PI and OI failed on {self.joint_violations} models")
        return out

    def to_json(self) -> dict:
        return {
            "seed": self.seed,
            "trials": self.trials,
            "dims": list(self.dims),
            "locality_iff_pi_and_oi": {
                "models_checked": self.trials * len(PROPERTIES),
                "pi_and_oi_models": self.joint_checked,
                "violations": self.joint_violations,
            },
            "pairs": [
                {
                    "holds": SHORT[p],
                    "implies": SHORT[q],
                    "known": "true" if (p, q) in KNOWN_TRUE else "false",
                    "status": e.status,
                    "trials": e.trials,
                    "fixture": e.fixture,
                }
                for (p, q), e in self.entries.items()
            ],
            "problems": self.problems(),
        }

    def to_text(self) -> str:
        names = [SHORT[p] for p in PROPERTIES]
        lines = [f"implication map (seed={self.seed}, trials={self.trials}, dims={','.join(map(str, self.dims))})",
                 "row holds => column?  '.' no counterexample, 'x' counterexample",
                 "      " + " ".join(f"{n:>3}" for n in names)]
        for p in PROPERTIES:
            cells = []
            for q in PROPERTIES:
                if p == q:
                    cells.append("  -")
                else:
                    cells.append("  x" if self.entries[(p, q)].counterexample is not None else "  .")
            lines.append(f"{SHORT[p]:>5} " + " ".join(cells))
        lines.append(f"locality <=> PI and OI: {self.joint_violations} violations "
                     f"over {self.trials * len(PROPERTIES)} models ({self.joint_checked} with PI and OI)")
        probs = self.problems()
        lines.append("status: " + ("consistent" if not probs else "; ".join(probs)))
        return "\n".join(lines) + "\n"


def explore_implications(seed, trials: int, dims: Sequence[int] = (2, 2, 2, 2, 2)) -> ImplicationMatrix:
    if trials < 1:
        raise ValidationError("trials must be at least 1")
    dims = tuple(dims)
    matrix = ImplicationMatrix(seed, trials, dims)
    for pair in PAIRS:
        matrix.entries[pair] = Entry(*pair)
    for p in PROPERTIES:
        for trial in range(trials):
            model = random_hv_model(f"{seed}:{trial}", dims, p)
            v = {name: r.holds for name, r in check_all(model).items()}
            if not v[p]:
                raise RuntimeError(f"generator for {p} produced a model violating it (trial {trial})")
            for q in PROPERTIES:
                if q == p:
                    continue
                e = matrix.entries[(p, q)]
                e.trials += 1
                if not v[q] and e.counterexample is None:
                    e.counterexample, e.trial = model, trial
            if v[PARAMETER_INDEPENDENCE] and v[OUTCOME_INDEPENDENCE]:
                matrix.joint_checked += 1
            if v[LOCALITY] != (v[PARAMETER_INDEPENDENCE] and v[OUTCOME_INDEPENDENCE]):
                matrix.joint_violations += 1
    return matrix


def fixture_json(entry: Entry, seed, dims, date: Optional[str] = None) -> dict:
    provenance = {
        "seed": f"{seed}:{entry.trial}",
        "generator": f"random_hv_model(constraint={entry.holds})",
        "dims": list(dims),
    }
    if date:
        provenance["date"] = date
    return {
        "provenance": provenance,
        "holds": entry.holds,
        "fails": entry.fails,
        "model": model_to_json(entry.counterexample),
    }


def write_fixtures(matrix: ImplicationMatrix, out_dir, date: Optional[str] = None) -> list:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []
    for (p, q), e in matrix.entries.items():
        if e.counterexample is None:
            continue
        path = out_dir / fixture_name(p, q)
        path.write_text(json.dumps(fixture_json(e, matrix.seed, matrix.dims, date), indent=2) + "\n",
                        encoding="utf-8")
        e.fixture = path.name
        written.append(path)
    return written


@dataclass(frozen=True)
class Counterexample:
    holds: str
    fails: str
    model: HVModel
    provenance: dict


def load_counterexample(path) -> Counterexample:
    """Load a fixture and recompute both verdicts; raise if it does not separate."""
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    model = model_from_json(data["model"])
    if not isinstance(model, HVModel):
        raise ValidationError(f"{path}: fixture model is not an h.v. model")
    v = {name: r.holds for name, r in check_all(model).items()}
    holds, fails = data["holds"], data["fails"]
    if not v[holds] or v[fails]:
        raise ValidationError(f"{path}: fixture does not show {holds} without {fails}")
    return Counterexample(holds, fails, model, data.get("provenance", {}))


def shipped_fixtures() -> list:
    return sorted(FIXTURE_DIR.glob("*.json")) if FIXTURE_DIR.is_dir() else []

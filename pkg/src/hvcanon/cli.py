"""Command-line interface: ``hvcanon <command> ...``.

Exit status: 0 when the checked property holds / the model is feasible,
1 when it fails / is infeasible, 2 on usage or input errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import scenarios
from .canonical import (check_interval_properties, canonicalize, interval_model_from_json,
                        interval_model_to_json, kernel_atoms)
from .explore import explore_implications, write_fixtures
from .generate import parse_dims, random_hv_model
from .measure import Partition, ValidationError
from .models import (EmpiricalModel, HVModel, RestrictionSpec, format_fraction, model_from_json,
                     model_to_json, realizes, restrict)
from .properties import PROPERTIES, SHORT, check, check_all, resolve
from .solver import CapExceeded, chsh_value, solve_local


class UsageError(Exception):
    pass


def _read_json(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: invalid JSON ({exc})") from None


def _load_hv(path: str) -> HVModel:
    model = model_from_json(_read_json(path))
    if not isinstance(model, HVModel):
        raise UsageError(f"{path} is not a hidden-variable model")
    return model


def _load_empirical(path: str) -> EmpiricalModel:
    model = model_from_json(_read_json(path))
    return model.empirical() if isinstance(model, HVModel) else model


def _emit(text: str, out: str | None = None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _dump(data) -> str:
    return json.dumps(data, indent=2) + "\n"


def _model_text(model) -> str:
    t = model.table
    names = ["x_a", "x_b", "y_a", "y_b", "lambda"][: len(t.factors)]
    lines = [f"{type(model).__name__}: " + ", ".join(f"{n}={{{' '.join(map(str, s))}}}"
                                                   for n, s in zip(names, t.factors))]
    key = "p" if isinstance(model, HVModel) else "e"
    data = model_to_json(model)[key]
    for cell, mass in data.items():
        lines.append(f"  {cell:<20} {mass}")
    return "\n".join(lines) + "\n"


# --- commands -------------------------------------------------------------------

def cmd_check(args) -> int:
    data = _read_json(args.model)
    if "pieces" in data:
        model, _ = interval_model_from_json(data)
        reports = check_interval_properties(model)
    else:
        model = model_from_json(data)
        if not isinstance(model, HVModel):
            raise UsageError(f"{args.model} is not a hidden-variable model")
        reports = check_all(model)
    if args.property:
        name = resolve(args.property)
        reports = {name: reports[name]}
    ok = all(r.holds for r in reports.values())
    if args.format == "json":
        _emit(_dump({"holds": ok, "reports": [r.to_json() for r in reports.values()]}))
    else:
        lines = []
        for name, r in reports.items():
            line = f"{name:<24} {'holds' if r.holds else 'FAILS'}"
            if not r.holds:
                w = r.witnesses[0]
                ev = " ".join(f"{k}={{{','.join(map(str, v))}}}" for k, v in w.events)
                cell = " ".join(f"{k}={v}" for k, v in w.cell)
                rhs = "{0,1}" if w.right is None else format_fraction(w.right)
                line += (f"  ({r.violations} violations; first: {ev} at {cell or 'all'}: "
                         f"{format_fraction(w.left)} vs {rhs})")
            lines.append(line)
        _emit("\n".join(lines) + "\n")
    return 0 if ok else 1


def cmd_realize(args) -> int:
    p = _load_hv(args.model)
    e = _load_empirical(args.empirical)
    ok = realizes(p, e)
    if args.format == "json":
        _emit(_dump({"realizes": ok}))
    else:
        _emit(("realizes" if ok else "does not realize") + "\n")
    return 0 if ok else 1


def cmd_canonicalize(args) -> int:
    p = _load_hv(args.model)
    model, iso = canonicalize(p)
    payload = _dump(interval_model_to_json(model, iso))
    if args.out:
        _emit(payload, args.out)
    src = check_all(p)
    dst = check_interval_properties(model)
    preserved = all(dst[n].holds for n in PROPERTIES if src[n].holds)
    if args.format == "json":
        if not args.out:
            _emit(payload)
        else:
            _emit(_dump({
                "out": args.out,
                "pieces": len(model.pieces),
                "realization_equivalent": model.empirical() == p.empirical(),
                "properties": {n: {"source": src[n].holds, "canonical": dst[n].holds} for n in PROPERTIES},
            }))
    else:
        lines = [f"{len(model.pieces)} pieces from {len(p.hidden)} hidden states "
                 f"({len(kernel_atoms(p).blocks)} kernel atoms)"]
        for block, ivs, mass in iso.images:
            lines.append(f"  {{{','.join(map(str, block))}}} -> "
                         + " u ".join(str(iv) for iv in ivs) + f"  mass {mass}")
        lines.append("realization-equivalent: " + str(model.empirical() == p.empirical()).lower())
        lines.append("properties (source -> canonical): " + ", ".join(
            f"{SHORT[n]} {int(src[n].holds)}->{int(dst[n].holds)}" for n in PROPERTIES))
        if args.out:
            lines.append(f"wrote {args.out}")
        else:
            lines.append(payload.rstrip("\n"))
        _emit("\n".join(lines) + "\n")
    return 0 if preserved else 1


def _parse_blocks(text: str | None, space) -> Partition:
    if text is None:
        return Partition.discrete(space)
    blocks = [[x.strip() for x in part.split(",") if x.strip()] for part in text.split("|")]
    return Partition(space, blocks)


def cmd_restrict(args) -> int:
    p = model_from_json(_read_json(args.model))
    spec = RestrictionSpec(_parse_blocks(args.blocks_a, p.outcomes_a),
                           _parse_blocks(args.blocks_b, p.outcomes_b))
    r = restrict(p, spec)
    _emit(_dump(model_to_json(r)) if args.format == "json" else _model_text(r), args.out)
    return 0


def cmd_solve_local(args) -> int:
    e = _load_empirical(args.empirical)
    res = solve_local(e, certificate=True)
    if args.format == "json":
        data: dict = {"feasible": res.feasible}
        if res.feasible:
            data["weights"] = {s.label: format_fraction(w) for s, w in res.weights.items()}
            data["model"] = model_to_json(res.model)
        elif args.certificate:
            c = res.certificate
            data["certificate"] = {
                "kind": c.kind,
                "value": format_fraction(c.value),
                "bound": format_fraction(c.bound),
                "coefficients": {",".join(map(str, k)): format_fraction(v)
                                 for k, v in c.coefficients.items()},
            }
        _emit(_dump(data))
    else:
        if res.feasible:
            lines = ["feasible: local, lambda-independent, weakly deterministic realization"]
            lines += [f"  {s.label:<20} {w}" for s, w in res.weights.items()]
        else:
            c = res.certificate
            lines = ["infeasible: no local lambda-independent realization",
                     f"  certificate ({c.kind}): value {c.value} > deterministic bound {c.bound}"]
            if args.certificate:
                lines += [f"    c[y={k[0]},{k[1]} x={k[2]},{k[3]}] = {v}" for k, v in c.coefficients.items()]
        _emit("\n".join(lines) + "\n")
    return 0 if res.feasible else 1


def cmd_chsh(args) -> int:
    e = _load_empirical(args.empirical)
    value, best = chsh_value(e)
    if args.format == "json":
        _emit(_dump({"chsh": format_fraction(value), "max_symmetric": format_fraction(best), "bound": "2/1"}))
    else:
        _emit(f"CHSH = {value}\nmax over symmetric forms = {best}\nclassical bound = 2\n")
    return 0 if best <= 2 else 1


def cmd_gen(args) -> int:
    model = random_hv_model(args.seed, parse_dims(args.dims), args.constraint)
    _emit(_dump(model_to_json(model)) if args.format == "json" else _model_text(model), args.out)
    return 0


def cmd_explore(args) -> int:
    matrix = explore_implications(args.seed, args.trials, parse_dims(args.dims))
    if args.out:
        write_fixtures(matrix, args.out, args.date)
    _emit(_dump(matrix.to_json()) if args.format == "json" else matrix.to_text())
    return 0 if not matrix.problems() else 1


def cmd_scenarios(args) -> int:
    model = scenarios.SCENARIOS[args.name]()
    if args.empirical and isinstance(model, HVModel):
        model = model.empirical()
    _emit(_dump(model_to_json(model)) if args.format == "json" else _model_text(model), args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hvcanon", description="Hidden-variable model toolkit.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help, fmt="text"):
        sp = sub.add_parser(name, help=help)
        sp.add_argument("--format", choices=("json", "text"), default=fmt)
        sp.set_defaults(func=func)
        return sp

    sp = add("check", cmd_check, "check the six properties of an h.v. or interval model")
    sp.add_argument("--model", required=True)
    sp.add_argument("--property", help="one of " + ", ".join(PROPERTIES) + " (or L, PI, OI, LI, SD, WD)")

    sp = add("realize", cmd_realize, "does the h.v. model realize the empirical model?")
    sp.add_argument("--model", required=True)
    sp.add_argument("--empirical", required=True)

    sp = add("canonicalize", cmd_canonicalize, "move the hidden variable onto [0, 1]")
    sp.add_argument("--model", required=True)
    sp.add_argument("--out")

    sp = add("restrict", cmd_restrict, "coarsen outcome spaces, e.g. --blocks-a '0,1|2'", fmt="json")
    sp.add_argument("--model", required=True)
    sp.add_argument("--blocks-a")
    sp.add_argument("--blocks-b")
    sp.add_argument("--out")

    sp = add("solve-local", cmd_solve_local, "search for a local deterministic realization")
    sp.add_argument("--empirical", required=True)
    sp.add_argument("--certificate", action="store_true", help="print the separating functional")

    sp = add("chsh", cmd_chsh, "CHSH value of a two-setting binary empirical model")
    sp.add_argument("--empirical", required=True)

    sp = add("gen", cmd_gen, "generate a random h.v. model", fmt="json")
    sp.add_argument("--seed", required=True)
    sp.add_argument("--dims", default="2,2,2,2,2", help="x_a,x_b,y_a,y_b,lambda sizes")
    sp.add_argument("--constraint")
    sp.add_argument("--out")

    sp = add("explore", cmd_explore, "map implications between the properties")
    sp.add_argument("--seed", required=True)
    sp.add_argument("--trials", type=int, default=500)
    sp.add_argument("--dims", default="2,2,2,2,2")
    sp.add_argument("--out", help="directory for counterexample fixtures")
    sp.add_argument("--date", help="date recorded in fixture provenance")

    sp = add("scenarios", cmd_scenarios, "emit a built-in model", fmt="json")
    sp.add_argument("--name", required=True, choices=sorted(scenarios.SCENARIOS))
    sp.add_argument("--empirical", action="store_true", help="emit the realized empirical model")
    sp.add_argument("--out")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ValidationError, CapExceeded, ValueError) as exc:
        print(f"hvcanon {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

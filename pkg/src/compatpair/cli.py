"""Batch command-line front end.

Commands:

    verify <file.cp>   run a scenario file, write a report, exit by outcome
    star <a> <b> -o c  twisted product of two symbol files
    op <a> -o m        quantization matrix of a symbol file
    rep <file.cp> -o m induced operators of a scenario
    list               catalogue of shipped scenarios and action kinds

Exit codes: 0 all checks pass, 1 at least one check failed, 2 parse or
validation or structural error, 3 numeric guard tripped (decay, analytic
amplification, rewrite divergence, non-finite residual).

Reports are byte-identical for identical inputs and seed; wall-clock
timing is written only with --timings (it would break the determinism
contract otherwise) and the report carries null there by default.
The corpus directory can be overridden with COMPATPAIR_CORPUS.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
import time
from pathlib import Path

import numpy as np

from .actions import BlockSymbol, block_star
from .dsl import ACTION_KINDS, parse, validate
from .errors import (AnalyticClassError, CompatPairError, ConventionError,
                     DecayGuardError, DegenerateDomainError, DivergenceError,
                     ScenarioParseError, ScenarioValidationError)
from .scenarios import (SCENARIO_KINDS, Report, Scenario, induced_matrices,
                        run_scenario)
from .symbols import PhaseSymbol
from .symio import (read_symbol, write_matrix, write_named_matrices,
                    write_symbol)
from .weyl import star, weyl_op

GUARD_ERRORS = (DecayGuardError, AnalyticClassError, DivergenceError,
                ConventionError, DegenerateDomainError)


def corpus_dir() -> Path:
    override = os.environ.get("COMPATPAIR_CORPUS")
    if override:
        return Path(override)
    return Path(__file__).parent / "corpus"


def report_payload(rep: Report, timing) -> dict:
    return {
        "scenario": rep.scenario,
        "kind": rep.kind,
        "passed": rep.passed(),
        "checks": [dataclasses.asdict(r) for r in rep.records],
        "environment": rep.environment,
        "timing": timing,
    }


def render_report(rep: Report, fmt: str, timing) -> str:
    if fmt == "json":
        return json.dumps(report_payload(rep, timing), sort_keys=True, indent=1) + "\n"
    lines = ["check_id,kind,residual,tolerance,passed,digest"]
    for r in rep.records:
        lines.append(f"{r.check_id},{r.kind},{r.residual!r},{r.tolerance!r},"
                     f"{int(r.passed)},{r.digest}")
    return "\n".join(lines) + "\n"


def _load_scenario(path: str, args) -> Scenario:
    text = Path(path).read_bytes()
    sc = validate(parse(text))
    over = {}
    if getattr(args, "grid", None):
        over["grid_n"] = args.grid
    if getattr(args, "box", None):
        over["box"] = args.box
    if getattr(args, "hermite", None):
        over["hermite"] = args.hermite
    if getattr(args, "seed", None) is not None:
        over["seed"] = args.seed
    if getattr(args, "tol", None):
        over["tol_scale"] = args.tol
    return dataclasses.replace(sc, **over) if over else sc


def cmd_verify(args) -> int:
    sc = _load_scenario(args.file, args)
    t0 = time.perf_counter()
    rep = run_scenario(sc)
    elapsed = time.perf_counter() - t0
    if any(not np.isfinite(r.residual) for r in rep.records):
        print("error: non-finite residual in the report", file=sys.stderr)
        return 3
    timing = {"wall_s": elapsed} if args.timings else None
    text = render_report(rep, args.format, timing)
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    if rep.passed():
        return 0
    for r in rep.failing():
        print(f"failed check: {r.check_id} (residual {r.residual:.3e}, "
              f"tolerance {r.tolerance:.1e})", file=sys.stderr)
    return 1


def cmd_star(args) -> int:
    a = read_symbol(args.a)
    b = read_symbol(args.b)
    if isinstance(a, BlockSymbol) and isinstance(b, BlockSymbol):
        out = block_star(a, b)
    elif isinstance(a, PhaseSymbol) and isinstance(b, PhaseSymbol):
        out = star(a, b)
    else:
        print("error: operands have different layouts", file=sys.stderr)
        return 2
    write_symbol(args.output, out)
    return 0


def cmd_op(args) -> int:
    a = read_symbol(args.a)
    if not isinstance(a, PhaseSymbol):
        print("error: quantization needs a scalar phase symbol", file=sys.stderr)
        return 2
    mat = weyl_op(a, "hermite", args.hermite)
    write_matrix(args.output, mat)
    if args.spectrum:
        sv = np.linalg.svd(mat.entries, compute_uv=False)
        lines = ["index,singular_value"]
        lines += [f"{i},{float(v)!r}" for i, v in enumerate(sv)]
        Path(args.spectrum).write_text("\n".join(lines) + "\n")
    return 0


def cmd_rep(args) -> int:
    sc = _load_scenario(args.file, args)
    mats = induced_matrices(sc)
    write_named_matrices(args.output, mats)
    return 0


def cmd_list(_args) -> int:
    entries = []
    root = corpus_dir()
    for path in sorted(root.rglob("*.cp")):
        try:
            sc = validate(parse(path.read_bytes()))
            entries.append((path.relative_to(root).as_posix(), sc.kind, sc.corrupt))
        except CompatPairError:
            entries.append((path.relative_to(root).as_posix(), "invalid", "-"))
    print("scenario kinds:", " ".join(SCENARIO_KINDS))
    print("action kinds:  ", " ".join(sorted(ACTION_KINDS)))
    for name, kind, corrupt in entries:
        tag = "" if corrupt in ("none", "-") else f"  [control: {corrupt}]"
        print(f"  {name:32s} {kind}{tag}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="compatpair",
                                description="compatible-pair verification toolkit")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run a scenario file")
    v.add_argument("file")
    v.add_argument("--grid", type=int, help="override the phase-space grid size")
    v.add_argument("--box", type=float, help="override the box half-width")
    v.add_argument("--hermite", type=int, help="override the Hermite truncation")
    v.add_argument("--tol", type=float, help="scale every check tolerance")
    v.add_argument("--seed", type=int, help="override the random seed")
    v.add_argument("--format", choices=("json", "csv"), default="json")
    v.add_argument("--timings", action="store_true",
                   help="include wall time (breaks byte determinism)")
    v.add_argument("-o", "--output", help="report file (default stdout)")
    v.set_defaults(fn=cmd_verify)

    s = sub.add_parser("star", help="twisted product of two symbol files")
    s.add_argument("a")
    s.add_argument("b")
    s.add_argument("-o", "--output", required=True)
    s.set_defaults(fn=cmd_star)

    o = sub.add_parser("op", help="quantization matrix of a symbol file")
    o.add_argument("a")
    o.add_argument("--hermite", type=int, default=32)
    o.add_argument("--spectrum", help="also dump singular values as CSV")
    o.add_argument("-o", "--output", required=True)
    o.set_defaults(fn=cmd_op)

    r = sub.add_parser("rep", help="induced operators of a scenario")
    r.add_argument("file")
    r.add_argument("--grid", type=int)
    r.add_argument("--box", type=float)
    r.add_argument("--hermite", type=int)
    r.add_argument("--seed", type=int)
    r.add_argument("-o", "--output", required=True)
    r.set_defaults(fn=cmd_rep)

    l = sub.add_parser("list", help="catalogue of shipped scenarios")
    l.set_defaults(fn=cmd_list)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (ScenarioParseError, ScenarioValidationError) as e:
        if isinstance(e, ScenarioValidationError):
            for msg in e.errors:
                print(f"error: {msg}", file=sys.stderr)
        else:
            print(f"error: {e}", file=sys.stderr)
        return 2
    except GUARD_ERRORS as e:
        print(f"numeric guard: {e}", file=sys.stderr)
        return 3
    except FileNotFoundError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except CompatPairError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

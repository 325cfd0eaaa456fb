"""Command-line entry point: ``multireg <mode> ...``.

Exit codes: 0 all checks pass, 1 some check was violated, 2 bad configuration.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np

from .experiment import (
    MAX_VARS,
    ConfigError,
    ExperimentConfig,
    analyze_scheme,
    emit_report,
    run_experiment,
)
from .formulas import PreconditionError, bound_report
from .hilbert import hilbert_table
from .points import GenericityError, PointScheme, fat_point_ideal
from .regularity import DEFAULT_TRIALS
from .ring import DEFAULT_PRIME

EXIT_OK, EXIT_VIOLATION, EXIT_CONFIG = 0, 1, 2


def _int_tuple(text: str) -> tuple[int, ...]:
    try:
        vals = tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from exc
    if not vals:
        raise argparse.ArgumentTypeError("empty tuple")
    return vals


def _s_range(text: str) -> tuple[int, int]:
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            return int(lo), int(hi)
        v = int(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected N or LO..HI, got {text!r}") from exc
    return v, v


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage, which is the config-error code already
    pass


def _common(sp: argparse.ArgumentParser, dims: bool = True):
    if dims:
        sp.add_argument("--dims", type=_int_tuple, action="append", required=True,
                        help="projective dimensions n_1,...,n_k (repeatable)")
    sp.add_argument("--p", type=int, default=DEFAULT_PRIME, help="field characteristic")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--seeds", type=int, default=1, help="random instances per cell")
    sp.add_argument("--trials", type=int, default=DEFAULT_TRIALS, help="criterion retries")
    sp.add_argument("--max-vars", type=int, default=MAX_VARS)
    sp.add_argument("--no-gin", action="store_true", help="skip the generic-initial-ideal cross-check")
    sp.add_argument("--out", type=Path, default=None)
    sp.add_argument("--format", choices=("csv", "json"), default=None,
                    help="report format (default: from --out suffix, else csv)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="multireg", description="Regularity of point schemes in products of projective spaces.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="mode", required=True)

    sp = sub.add_parser("verify-theorem", help="reduced generic points: reg against max(d_i) + 1")
    _common(sp)
    sp.add_argument("--s", type=_s_range, default=(2, 6), help="number of points, N or LO..HI")

    sp = sub.add_parser("verify-bound", help="fat points: reg and ri against their upper bounds")
    _common(sp)
    sp.add_argument("--mults", type=_int_tuple, action="append", required=True,
                    help="multiplicity profile m_1,...,m_s (repeatable)")

    sp = sub.add_parser("ri", help="regularity index of fat point schemes")
    _common(sp)
    sp.add_argument("--mults", type=_int_tuple, action="append", required=True)

    for name, helptext in (("regularity", "reg, ri and bounds for a point file"),
                           ("hilbert", "Hilbert function table for a point file")):
        sp = sub.add_parser(name, help=helptext)
        sp.add_argument("--points", type=Path, required=True, help="JSON point file")
        sp.add_argument("--seed", type=int, default=None, help="override the file's seed")
        sp.add_argument("--trials", type=int, default=DEFAULT_TRIALS)
        sp.add_argument("--out", type=Path, default=None)
        if name == "hilbert":
            sp.add_argument("--box", type=_int_tuple, default=(5,),
                            help="box bound b or b_1,...,b_k for multidegrees")
        else:
            sp.add_argument("--no-gin", action="store_true")
    return parser


def _write(text: str, out: Path | None):
    if out is None:
        sys.stdout.write(text)
    else:
        out.write_text(text)


def _report_format(args) -> str:
    if args.format:
        return args.format
    if args.out is not None and args.out.suffix == ".json":
        return "json"
    return "csv"


def _sweep(args) -> int:
    cfg = ExperimentConfig(
        mode=args.mode,
        shapes=list(args.dims),
        s_range=getattr(args, "s", (1, 1)),
        mult_profiles=getattr(args, "mults", None),
        p=args.p,
        seed=args.seed,
        seeds_per_cell=args.seeds,
        trials=args.trials,
        max_vars=args.max_vars,
        gin=not args.no_gin,
    )
    reports, summary = run_experiment(cfg)
    text = emit_report(reports, _report_format(args), args.out)
    if args.out is None:
        sys.stdout.write(text)
    print(
        f"cells={summary.cells} passed={summary.passed} violations={summary.violations} skipped={summary.skipped}",
        file=sys.stderr,
    )
    for i in summary.violated:
        r = reports[i]
        print(f"violation in cell {i}: {r.to_dict()} flags={r.flags()}", file=sys.stderr)
    return summary.exit_code


def _load_scheme(args) -> PointScheme:
    try:
        Z = PointScheme.from_json(args.points)
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise ConfigError(f"cannot read point file {args.points}: {exc}") from exc
    if args.seed is not None:
        Z.seed = args.seed
    return Z


def _regularity(args) -> int:
    Z = _load_scheme(args)
    rng = np.random.default_rng(Z.seed if Z.seed is not None else 0)
    res = analyze_scheme(Z, rng, args.trials, gin=not args.no_gin)
    out = {
        "dims": list(Z.shape.dims),
        "mults": list(Z.mults),
        "reg": res.reg,
        "ri": res.ri,
        "gin_reg": res.gin_reg,
        "reg_formula": res.reg_formula,
        "hilbert_polynomial": [str(c) for c in res.hp.coeffs],
        "certificate": res.certificate.to_dict(),
    }
    violated = res.gin_reg is not None and res.gin_reg != res.reg
    violated |= not res.ri <= res.reg <= res.ri + Z.shape.k
    if res.reg_formula is not None:
        violated |= res.reg != res.reg_formula
    if Z.s >= 2:
        out["bounds"] = bound_report(Z.shape, Z.mults).to_dict()
        violated |= res.reg > res.reg_bound or res.ri > res.ri_bound
    _write(json.dumps(out, indent=2, sort_keys=True) + "\n", args.out)
    return EXIT_VIOLATION if violated else EXIT_OK


def _hilbert(args) -> int:
    Z = _load_scheme(args)
    box = args.box * Z.shape.k if len(args.box) == 1 else args.box
    if len(box) != Z.shape.k:
        raise ConfigError(f"box has {len(box)} entries, scheme has {Z.shape.k} factors")
    I = fat_point_ideal(Z)
    tab = hilbert_table(I, box, max_total=sum(box))
    out = {
        "dims": list(Z.shape.dims),
        "box": list(box),
        "multigraded": [{"t": list(t), "value": v} for t, v in sorted(tab.values.items())],
        "total": [{"t": t, "value": v} for t, v in sorted(tab.total.items())],
    }
    violated = any(tab.composition_sum(t) != v for t, v in tab.total.items() if t <= min(box))
    _write(json.dumps(out, indent=2) + "\n", args.out)
    return EXIT_VIOLATION if violated else EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        if args.mode in ("verify-theorem", "verify-bound", "ri"):
            return _sweep(args)
        if args.mode == "regularity":
            return _regularity(args)
        return _hilbert(args)
    except (ConfigError, PreconditionError, GenericityError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())

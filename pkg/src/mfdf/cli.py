"""Command line entry point: ``mfdf <subcommand> ...``.

Exit codes: 0 success, 1 validation error, 2 runtime failure (blow-up, I/O).
"""
from __future__ import annotations

import argparse
import math
import os
import sys

from . import experiments
from .config import load_config
from .dispersion import (
    DispersionKind, RATIO_HEADER, fdf, verify_dispersion_bounds,
)
from .dynamics import BlowUpError, EquationSpec, run
from .io import SnapshotFormatError, diagnostics_text, ensure_dir, read_snapshot, write_diagnostics, write_snapshot
from .observables import CSV_HEADER, invariants
from .spectral import ConfigurationError, Field, make_grid

EXIT_OK, EXIT_INVALID, EXIT_RUNTIME = 0, 1, 2


def _floats(text):
    return [float(x) for x in text.split(",") if x.strip()]


def cmd_simulate(args, out):
    config = load_config(args.config)
    result = run(config)
    if args.out:
        ensure_dir(args.out)
        write_diagnostics(result.records, os.path.join(args.out, "diagnostics.csv"))
        kind = config.kind()
        for i, snap in enumerate(result.snapshots):
            write_snapshot(snap, kind, os.path.join(args.out, f"snapshot_{i:04d}.bin"))
        write_snapshot(result.final, kind, os.path.join(args.out, "final.bin"))
    else:
        out.write(diagnostics_text(result.records))
    first, last = result.records[0], result.records[-1]
    drift = abs(last.l2 - first.l2) / first.l2 if first.l2 else 0.0
    out.write(f"# steps={result.final.step_count} t={result.final.time!r} l2_drift={drift:.3e}\n")


def cmd_limit_study(args, out):
    config = load_config(args.config)
    res = experiments.limit_study(config, _floats(args.deltas), args.s, args.T,
                                  nonlinear=not args.linear)
    out.write(res.csv())
    out.write(f"# fitted_rate={res.fitted_rate:.6g}\n" if math.isfinite(res.fitted_rate)
              else "# fitted_rate=undefined\n")


def cmd_scaling_check(args, out):
    config = load_config(args.config)
    res = experiments.scaling_runs(config, args.lam, args.s)
    out.write(res.csv())
    out.write(f"# discrepancy={res.discrepancy:.6e}\n")


def cmd_transform_check(args, out):
    config = load_config(args.config)
    res = experiments.transform_runs(config, args.delta, args.s)
    out.write(res.csv())
    out.write(f"# discrepancy={res.discrepancy:.6e}\n")


def cmd_check_dispersion(args, out):
    reports = verify_dispersion_bounds(fdf(args.delta), args.ximin, args.ximax, args.samples)
    out.write(RATIO_HEADER + "\n")
    for r in reports:
        out.write(r.csv_row() + "\n")


def cmd_illposed_probe(args, out):
    res = experiments.illposed_probe(args.N, args.gamma, args.s, args.t, args.delta,
                                     nodes=args.nodes)
    out.write(experiments.PROBE_HEADER + "\n" + res.csv_row() + "\n")
    out.write(f"# hs_value={res.hs_value:.6e}\n")


_SNAPSHOT_TAGS = {"mfdf": "FDF", "mfdf2": "FDF2", "mbo": "BO", "mkdv": "AIRY"}


def cmd_invariants(args, out):
    snap = read_snapshot(args.snapshot)
    equation = args.equation or ("mfdf" if snap.delta > 0 else "mbo")
    tag = _SNAPSHOT_TAGS[equation]
    delta = snap.delta if tag in ("FDF", "FDF2") else None
    kind = DispersionKind(tag, delta, 2, args.sign)
    grid = make_grid(snap.n, snap.length)
    rec = invariants(Field(grid, snap.values), EquationSpec(kind), snap.time)
    out.write(CSV_HEADER + "\n" + rec.csv_row() + "\n")


def build_parser():
    p = argparse.ArgumentParser(prog="mfdf", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("simulate", help="run a configuration, write diagnostics and snapshots")
    s.add_argument("--config", required=True)
    s.add_argument("--out", help="output directory (default: diagnostics to stdout)")
    s.set_defaults(func=cmd_simulate)

    s = sub.add_parser("limit-study", help="mFDF(delta) versus mBO as delta grows")
    s.add_argument("--config", required=True)
    s.add_argument("--deltas", default="1,2,4,8,16")
    s.add_argument("--s", type=float, default=0.5)
    s.add_argument("--T", type=float, default=None, help="final time (default: t_end)")
    s.add_argument("--linear", action="store_true", help="disable the nonlinearity")
    s.set_defaults(func=cmd_limit_study)

    s = sub.add_parser("scaling-check", help="compare a run with its rescaled copy")
    s.add_argument("--config", required=True)
    s.add_argument("--lambda", dest="lam", type=float, default=2.0)
    s.add_argument("--s", type=float, default=0.5)
    s.set_defaults(func=cmd_scaling_check)

    s = sub.add_parser("transform-check", help="compare mFDF with the transformed mFDF2 run")
    s.add_argument("--config", required=True)
    s.add_argument("--delta", type=float, default=None)
    s.add_argument("--s", type=float, default=0.5)
    s.set_defaults(func=cmd_transform_check)

    s = sub.add_parser("check-dispersion", help="empirical dispersion-bound ratios")
    s.add_argument("--delta", type=float, required=True)
    s.add_argument("--ximin", type=float, required=True)
    s.add_argument("--ximax", type=float, required=True)
    s.add_argument("--samples", type=int, default=16, help="samples per octave")
    s.set_defaults(func=cmd_check_dispersion)

    s = sub.add_parser("illposed-probe", help="H^s norm of the third Picard iterate")
    s.add_argument("--N", type=float, required=True)
    s.add_argument("--gamma", type=float, required=True)
    s.add_argument("--s", type=float, required=True)
    s.add_argument("--t", type=float, required=True)
    s.add_argument("--delta", type=float, required=True)
    s.add_argument("--nodes", type=int, default=128)
    s.set_defaults(func=cmd_illposed_probe)

    s = sub.add_parser("invariants", help="conserved quantities of a snapshot file")
    s.add_argument("--snapshot", required=True)
    s.add_argument("--equation", choices=sorted(_SNAPSHOT_TAGS))
    s.add_argument("--sign", choices=("defocusing", "focusing"), default="defocusing")
    s.set_defaults(func=cmd_invariants)
    return p


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INVALID
    try:
        args.func(args, out)
    except SnapshotFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except (ConfigurationError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (BlowUpError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

"""Command-line entry point: ``oneway <command> ...``.

Commands write into a run directory ``<out>/<kind>-<hash12>`` where the
hash covers every input that affects the results, so rerunning the same
configuration reproduces the same directory and bit-identical files.

Exit codes: 0 ok, 2 configuration or input mismatch, 3 numerical failure
(CFL violation, non-finite values), 4 file errors.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .analysis import (
    GridMismatchError,
    SectionFormatError,
    SpectralSection,
    q_metric,
    read_section,
    write_qcurve,
    write_section,
    write_section_csv,
)
from .fd import CflError, record_seismogram
from .model import ConfigError, RunPlan, load_config, validate, write_config
from .simulate import run_oneway
from .studies import contrast_sweep

log = logging.getLogger("oneway")

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_IO = 0, 2, 3, 4


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def _run_dir(out, kind, plan: RunPlan) -> Path:
    path = Path(out) / f"{kind}-{plan.digest()[:12]}"
    path.mkdir(parents=True, exist_ok=True)
    return path


def _write_manifest(run_dir: Path, command: str, plan: RunPlan, files, **extra) -> Path:
    manifest = {
        "command": command,
        "version": __version__,
        "config_hash": plan.digest(),
        "source_x": plan.shot.source_x,
        "receiver_depth": plan.shot.receiver_depth,
        "files": {f.name: _sha256(f) for f in files},
    }
    manifest.update(extra)
    path = run_dir / "manifest.json"
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return path


def _apply_run_flags(plan: RunPlan, args) -> RunPlan:
    changes = {}
    if getattr(args, "epsilon", None) is not None:
        changes["epsilon"] = args.epsilon
    if getattr(args, "multiples", None) is not None:
        changes["n_multiples"] = args.multiples
    if getattr(args, "no_transmission", False):
        changes["include_transmission"] = False
    return plan.with_config(**changes) if changes else plan


def cmd_oneway(args) -> int:
    plan = _apply_run_flags(load_config(args.config), args)
    times = [float(t) for t in args.snapshots.split(",")] if args.snapshots else None
    result = run_oneway(plan, workers=args.workers, snapshot_times=times)
    run_dir = _run_dir(args.out, "oneway", plan)
    files = [write_config(plan, run_dir / "config.ini")]
    total = result.total
    if not np.all(np.isfinite(total.values)):
        raise FloatingPointError("one-way solution is not finite")
    files.append(write_section(run_dir / "seismogram.owwf", total))
    files.append(write_section_csv(run_dir / "seismogram.csv", total))
    for m, sec in enumerate(result.sections):
        files.append(write_section(run_dir / f"multiple_{m}.owwf", sec))
    if result.snapshots:
        for i, (t, field) in enumerate(sorted(result.snapshots.items())):
            # rows are depth nodes; the header's depth slot holds the time
            snap = SpectralSection(np.asarray(field, dtype=float), plan.grid.dz, plan.grid.dx, t, "snapshot")
            files.append(write_section(run_dir / f"snapshot_{i:03d}.owwf", snap))
    _write_manifest(run_dir, "oneway", plan, files, epsilon=plan.config.epsilon,
                    multiples=list(range(plan.config.n_multiples + 1)),
                    transmission=plan.config.include_transmission, snapshot_times=times or [])
    print(run_dir)
    return EXIT_OK


def cmd_fullwave(args) -> int:
    plan = load_config(args.config)
    seis = record_seismogram(plan)
    run_dir = _run_dir(args.out, "fullwave", plan)
    files = [write_config(plan, run_dir / "config.ini"),
             write_section(run_dir / "seismogram.owwf", seis),
             write_section_csv(run_dir / "seismogram.csv", seis)]
    _write_manifest(run_dir, "fullwave", plan, files)
    print(run_dir)
    return EXIT_OK


def _section_path(path) -> Path:
    path = Path(path)
    return path / "seismogram.owwf" if path.is_dir() else path


def cmd_qcurve(args) -> int:
    full = read_section(_section_path(args.full))
    one = read_section(_section_path(args.oneway))
    shot_x = args.shot_x
    if shot_x is None:
        shot_x = _shot_from_manifest(args.full)
    curve = q_metric(full, one, shot_x if shot_x is not None else 0.0)
    write_qcurve(args.out, curve)
    ok = curve.defined
    if np.any(ok):
        print(f"defined traces: {int(ok.sum())}/{ok.size}  median |Q-1| = {np.median(curve.error[ok]):.4f}")
    return EXIT_OK


def _shot_from_manifest(path):
    manifest = Path(path) / "manifest.json"
    if Path(path).is_dir() and manifest.exists():
        return json.loads(manifest.read_text()).get("source_x")
    return None


def cmd_sweep(args) -> int:
    plan = load_config(args.config)
    speeds = [float(s) for s in args.contrasts.split(",")]
    rows = contrast_sweep(plan, speeds, epsilon=args.epsilon)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    lines = ["speed,halfwidth_m,near_shot_error"]
    for row in rows:
        write_qcurve(out / f"qcurve_{row.speed:g}.csv", row.curve)
        lines.append(f"{row.speed:g},{row.halfwidth:g},{row.near_shot:.6g}")
    (out / "summary.csv").write_text("\n".join(lines) + "\n")
    print(f"{'speed':>8} {'half-width (m)':>15} {'near-shot |Q-1|':>16}")
    for row in rows:
        print(f"{row.speed:8g} {row.halfwidth:15g} {row.near_shot:16.4f}")
    return EXIT_OK


def cmd_check(args) -> int:
    plan = load_config(args.config)
    validate(plan.config, plan.grid, plan.model, plan.shot, check_cfl=True)
    print(f"ok  hash={plan.digest()[:12]}  speeds {plan.speeds.min():g}..{plan.speeds.max():g} m/s  "
          f"max frequency {plan.config.omega_max / (2 * math.pi):g} Hz")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="oneway", description="Bremmer-series one-way modelling and full-wave reference.")
    p.add_argument("-v", "--verbose", action="store_true")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    o = sub.add_parser("oneway", help="one-way seismograms, one section per multiple")
    o.add_argument("config")
    o.add_argument("--epsilon", type=int, choices=(0, 1))
    o.add_argument("--no-transmission", action="store_true", help="drop the transmission symbol, keep reflection")
    o.add_argument("--multiples", type=int, metavar="N")
    o.add_argument("--snapshots", metavar="T1,T2,...", help="also write p(x, z) at these times (s)")
    o.add_argument("--workers", type=int, default=1, help="frequency-bin threads (ONEWAY_WORKERS overrides)")
    o.add_argument("--out", default="runs")
    o.set_defaults(func=cmd_oneway)

    f = sub.add_parser("fullwave", help="finite-difference reference seismogram")
    f.add_argument("config")
    f.add_argument("--out", default="runs")
    f.set_defaults(func=cmd_fullwave)

    q = sub.add_parser("qcurve", help="Q(x) from a full-wave and a one-way section")
    q.add_argument("full", help="section file or full-wave run directory")
    q.add_argument("oneway", help="section file or one-way run directory")
    q.add_argument("--shot-x", type=float)
    q.add_argument("--out", required=True, help="CSV file")
    q.set_defaults(func=cmd_qcurve)

    s = sub.add_parser("sweep", help="Q-curves over lower-layer speeds")
    s.add_argument("config")
    s.add_argument("--contrasts", required=True, help="comma-separated lower-layer speeds (m/s)")
    s.add_argument("--epsilon", type=int, choices=(0, 1), default=1)
    s.add_argument("--out", default="sweep")
    s.set_defaults(func=cmd_sweep)

    c = sub.add_parser("check", help="validate a config file, including the full-wave stability condition")
    c.add_argument("config")
    c.set_defaults(func=cmd_check)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (ConfigError, GridMismatchError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except CflError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except FloatingPointError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (OSError, SectionFormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())

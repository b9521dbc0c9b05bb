"""Command line entry point: ``point``, ``sweep`` and ``figures``.

Exit codes: 0 success, 2 configuration error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import tempfile
from dataclasses import replace
from pathlib import Path
from typing import Sequence

import numpy as np

from . import bell
from .config import PRESETS, ConfigError, Curve, OutputSpec, RunConfig, SweepSpec, config_from_dict, load_config
from .scenario import transform_scenario

log = logging.getLogger("wigner_bell")

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_IO = 3

CSV_HEADER = "omega_rad,bell_value,converged"


def _num(x: float) -> str:
    return f"{x:.12g}"


def sweep_rows(points: Sequence[bell.SweepPoint]) -> list[dict]:
    return [
        {"omega_rad": p.omega, "bell_value": p.value, "converged": bool(p.converged)} for p in points
    ]


def format_csv(rows: Sequence[dict], extra: Sequence[str] = ()) -> str:
    lines = [",".join([CSV_HEADER, *extra]) if extra else CSV_HEADER]
    for r in rows:
        cells = [_num(r["omega_rad"]), _num(r["bell_value"]), "1" if r["converged"] else "0"]
        cells += [_num(r[k]) for k in extra]
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def format_json(payload) -> str:
    return json.dumps(payload, indent=2) + "\n"


def write_atomic(path: Path, data: str | bytes) -> None:
    """Write to a temp file beside ``path`` and rename it into place."""
    path.parent.mkdir(parents=True, exist_ok=True)
    mode = "wb" if isinstance(data, bytes) else "w"
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, mode) as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise


def _sweep(cfg: RunConfig) -> list[bell.SweepPoint]:
    scenario = cfg.scenario.build()
    f = bell.functional_for(scenario.n_qubits)
    return bell.sweep(f, scenario, cfg.sweep.grid(), cfg.optimizer)


def run_point(cfg: RunConfig) -> dict:
    """Optimized Bell value at the first grid angle of ``cfg``."""
    scenario = cfg.scenario.build()
    f = bell.functional_for(scenario.n_qubits)
    omega = float(cfg.sweep.grid()[0])
    res = bell.maximize(f, transform_scenario(scenario, omega), cfg.optimizer)
    angles = bell.settings_to_angles(res.settings)
    record = {"omega_rad": omega, "bell_value": res.value, "converged": res.converged}
    for k in range(f.n_parties):
        for s in range(2):
            record[f"theta_{k + 1}_{s + 1}"] = float(angles[k, s, 0])
            record[f"phi_{k + 1}_{s + 1}"] = float(angles[k, s, 1])
    return record


def run_sweep(cfg: RunConfig) -> list[dict]:
    return sweep_rows(_sweep(cfg))


def _render(rows: list[dict], fmt: str, extra: Sequence[str] = ()) -> str:
    return format_csv(rows, extra) if fmt == "csv" else format_json(rows)


def plot_svg(curves: Sequence[tuple[str, list[dict]]], title: str, path: Path) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6, 4))
    for label, rows in curves:
        ax.plot([r["omega_rad"] for r in rows], [r["bell_value"] for r in rows], label=label)
    ax.axhline(1.0, color="k", lw=0.8, ls="--", label="classical bound")
    ax.set_xlabel("Wigner angle (rad)")
    ax.set_ylabel("optimized Bell value")
    ax.set_title(title)
    ax.legend(fontsize=6, ncol=2)
    fig.tight_layout()
    tmp = path.with_name(f".{path.name}.tmp")
    try:
        fig.savefig(tmp, format="svg", metadata={"Date": None})
        os.replace(tmp, path)
    finally:
        plt.close(fig)
        tmp.unlink(missing_ok=True)


def run_figures(
    presets: Sequence[str],
    out_dir: Path,
    sweep_spec: SweepSpec,
    opts: bell.OptimizerOptions,
    fmt: str = "csv",
    svg: bool = False,
) -> list[Path]:
    """Sweep every curve of each preset and write one file per curve."""
    unknown = [p for p in presets if p not in PRESETS]
    if unknown:
        raise ConfigError("preset", f"unknown {unknown}; valid presets: {', '.join(PRESETS)}")
    written = []
    grid = sweep_spec.grid()
    for preset in presets:
        results: list[tuple[Curve, list[dict]]] = []
        for curve in PRESETS[preset]:
            scenario = curve.scenario.build()
            f = bell.functional_for(scenario.n_qubits)
            rows = sweep_rows(bell.sweep(f, scenario, grid, opts))
            path = out_dir / preset / f"{curve.name}.{fmt}"
            write_atomic(path, _render(rows, fmt))
            written.append(path)
            results.append((curve, rows))
            log.info("%s %s: min %.6f", preset, curve.name, min(r["bell_value"] for r in rows))
        manifest = [{"file": f"{c.name}.{fmt}", "label": c.label, **vars(c.scenario)} for c, _ in results]
        write_atomic(out_dir / preset / "curves.json", format_json(manifest))
        if svg:
            path = out_dir / f"{preset}.svg"
            plot_svg([(c.label, rows) for c, rows in results], preset, path)
            written.append(path)
    return written


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="JSON run configuration")
    common.add_argument("--out", type=Path, help="output directory (overrides output.dir)")
    common.add_argument("--seed", type=int, help="optimizer seed (overrides optimizer.seed)")
    common.add_argument("--format", choices=["csv", "json"], help="output format")
    common.add_argument("--svg", action="store_true", help="also write an SVG plot")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="wigner-bell", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("point", parents=[common], help="one optimized Bell value")
    sub.add_parser("sweep", parents=[common], help="optimized Bell value over a Wigner-angle grid")
    fig = sub.add_parser("figures", parents=[common], help="reproduce the preset figure curves")
    fig.add_argument("presets", nargs="+", metavar="PRESET", help=f"one or more of {', '.join(PRESETS)}")
    fig.add_argument("--steps", type=int, help="grid points per curve (overrides sweep.steps)")
    return p


def _resolve(args) -> RunConfig:
    cfg = load_config(args.config) if args.config else config_from_dict({})
    output = cfg.output
    if args.out is not None:
        output = replace(output, dir=str(args.out))
    if args.format is not None:
        output = replace(output, format=args.format)
    if args.svg:
        output = replace(output, svg=True)
    optimizer = cfg.optimizer
    if args.seed is not None:
        if args.seed < 0:
            raise ConfigError("--seed", "must be non-negative")
        optimizer = replace(optimizer, seed=args.seed)
    sweep_spec = cfg.sweep
    if getattr(args, "steps", None) is not None:
        if args.steps < 1:
            raise ConfigError("--steps", "must be >= 1")
        sweep_spec = replace(sweep_spec, steps=args.steps)
    return replace(cfg, output=output, optimizer=optimizer, sweep=sweep_spec)


def _write_sweep_svg(rows: list[dict], out: OutputSpec) -> None:
    plot_svg([(out.name, rows)], out.name, Path(out.dir) / f"{out.name}.svg")


def main(argv: Sequence[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        cfg = _resolve(args)
        out = cfg.output
        if args.command == "point":
            record = run_point(cfg)
            extra = [k for k in record if k not in ("omega_rad", "bell_value", "converged")]
            write_atomic(Path(out.dir) / f"{out.name}.{out.format}", _render([record], out.format, extra))
            print(format_json(record), end="")
        elif args.command == "sweep":
            rows = run_sweep(cfg)
            write_atomic(Path(out.dir) / f"{out.name}.{out.format}", _render(rows, out.format))
            if out.svg:
                _write_sweep_svg(rows, out)
            print(f"wrote {len(rows)} rows; min {min(r['bell_value'] for r in rows):.6f}")
        else:
            written = run_figures(args.presets, Path(out.dir), cfg.sweep, cfg.optimizer, out.format, out.svg)
            print(f"wrote {len(written)} files under {out.dir}")
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

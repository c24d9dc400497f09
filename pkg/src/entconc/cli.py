"""Command line front end: deterministic figure-data exports.

Subcommands
    cavity    filter-phase sweep of the dispersive-readout scheme plus the
              fidelity optimum: fig2a.csv (phi0, P, S), fig2b.csv (phi0, F),
              optimum.json
    kerr      outcome-grid scan and threshold sweep of the probe scheme:
              fig5a.csv (x, y, Q), fig5b.csv (x, y, F), fig6.csv
              (delta_F, avg_F, P_omega), fig7.csv (delta_F, F_teleport),
              summary.json
    optimize  the fidelity optimum alone: optimum.json
    plot      render previously exported CSVs to SVG

Parameters come from built-in defaults, overridden by an INI --config file,
overridden by repeatable --set section.key=value flags.  Unknown sections or
keys are rejected.  All inputs are validated and all results computed before
the first byte is written, so a failing run leaves no partial output.

Exit codes: 0 success, 2 bad arguments or config, 3 numerical failure
(a filter that annihilates the input, an unreachable acceptance threshold).
"""

from __future__ import annotations

import argparse
import configparser
import math
import os
import sys
from typing import Optional

import numpy as np

from . import __version__, _kernels
from ._util import csv_text, json_text, write_text
from .analysis import optimize_phi0, sweep_cavity_phi0, sweep_kerr_threshold
from .errors import ConcentrationError
from .kerr import GridSpec, KerrParams, scan_grid
from .svgplot import heatmap, line_chart

__all__ = ["main", "DEFAULTS"]

DEFAULTS = {
    "cavity": {
        "lambda": 0.5,
        "phi": math.pi / 10,
        "phi0_min": -math.pi,
        "phi0_max": math.pi,
        "steps": 400,
        "tol": 1e-6,
    },
    "kerr": {
        "lambda": 0.5,
        "alpha": 10.0,
        "phi": math.pi / 100,
        "n_max": 128,
        "fock_cut": 10,
        "half_width": 5.0,
        "step": 0.1,
        "delta_f_min": 0.0,
        "delta_f_max": 0.4,
        "delta_f_step": 0.05,
    },
}

_INT_KEYS = {"steps", "n_max", "fock_cut"}
_FORMATS = ("csv", "json", "svg")


class _ConfigError(Exception):
    """Bad user input (config file, --set, CSV to plot): exit code 2."""


def _parse_value(section: str, key: str, raw: str):
    if section not in DEFAULTS:
        raise _ConfigError(f"unknown config section [{section}]")
    if key not in DEFAULTS[section]:
        raise _ConfigError(f"unknown key {key!r} in section [{section}]")
    try:
        return int(raw) if key in _INT_KEYS else float(raw)
    except ValueError:
        kind = "integer" if key in _INT_KEYS else "number"
        raise _ConfigError(
            f"value for {section}.{key} must be a {kind}, got {raw!r}"
        ) from None


def _load_settings(config_path: Optional[str], overrides: list) -> dict:
    settings = {sec: dict(vals) for sec, vals in DEFAULTS.items()}
    if config_path is not None:
        try:
            with open(config_path, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise _ConfigError(f"cannot read config file: {exc}") from None
        parser = configparser.ConfigParser()
        try:
            parser.read_string(text, source=config_path)
        except configparser.Error as exc:
            raise _ConfigError(f"malformed config file: {exc}") from None
        for section in parser.sections():
            for key, raw in parser.items(section):
                settings.setdefault(section, {})
                settings[section][key] = _parse_value(section, key, raw)
    for item in overrides:
        head, sep, raw = item.partition("=")
        section, dot, key = head.partition(".")
        if not sep or not dot or not section or not key:
            raise _ConfigError(
                f"--set expects section.key=value, got {item!r}"
            )
        settings[section][key] = _parse_value(section, key, raw)
    return settings


def _parse_formats(raw: str) -> set:
    formats = {part.strip() for part in raw.split(",") if part.strip()}
    if not formats:
        raise _ConfigError("--format must name at least one of csv, json, svg")
    for fmt in formats:
        if fmt not in _FORMATS:
            raise _ConfigError(f"unknown format {fmt!r} (expected csv, json, svg)")
    return formats


def _delta_values(lo: float, hi: float, step: float) -> list:
    if step <= 0.0:
        raise _ConfigError("kerr.delta_f_step must be positive")
    if hi < lo:
        raise _ConfigError("kerr.delta_f_max must be >= kerr.delta_f_min")
    count = int(math.floor((hi - lo) / step + 1e-9)) + 1
    return [lo + k * step for k in range(count)]


def _emit(out_dir: str, outputs: dict) -> None:
    """Write every prepared file; creation is deferred to this single point."""
    os.makedirs(out_dir, exist_ok=True)
    for name in sorted(outputs):
        path = os.path.join(out_dir, name)
        write_text(path, outputs[name])
        print(f"wrote {path}")


def _cmd_cavity(args, optimum_only: bool) -> int:
    settings = _load_settings(args.config, args.overrides)
    formats = _parse_formats(args.format)
    if args.threads is not None:
        _kernels.set_threads(args.threads)
    s = settings["cavity"]
    lam, phi = s["lambda"], s["phi"]

    report = optimize_phi0(lam, phi, tol=s["tol"], steps=s["steps"])
    outputs = {}
    if "json" in formats:
        outputs["optimum.json"] = json_text(
            {"lambda": lam, "phi": phi, **report.to_json_dict()}
        )
    if not optimum_only:
        sweep = sweep_cavity_phi0(
            lam, phi, s["phi0_min"], s["phi0_max"], steps=s["steps"]
        )
        axis = sweep.axis_values
        p, ent, fid = sweep.series["P"], sweep.series["S"], sweep.series["F"]
        if "csv" in formats:
            outputs["fig2a.csv"] = csv_text(("phi0", "P", "S"), zip(axis, p, ent))
            outputs["fig2b.csv"] = csv_text(("phi0", "F"), zip(axis, fid))
        if "svg" in formats:
            outputs["fig2a.svg"] = line_chart(
                axis,
                {"P": p, "S": ent},
                title="Success probability and output entanglement",
                xlabel="phi0",
            )
            outputs["fig2b.svg"] = line_chart(
                axis,
                {"F": fid},
                title="Teleportation fidelity of the filtered state",
                xlabel="phi0",
                ylabel="F",
            )

    _emit(args.out, outputs)
    print(
        f"optimum: phi0 = {report.phi0_star:.6f}, F = {report.fidelity_star:.6f}, "
        f"P = {report.probability_at_star:.6f} "
        f"({report.evaluations} evaluations)"
    )
    return 0


def _cmd_kerr(args) -> int:
    settings = _load_settings(args.config, args.overrides)
    formats = _parse_formats(args.format)
    threads = _kernels.set_threads(args.threads) if args.threads is not None else None
    s = settings["kerr"]
    params = KerrParams(
        s["lambda"], s["alpha"], s["phi"], n_max=s["n_max"], fock_cut=s["fock_cut"]
    )
    grid = GridSpec(s["half_width"], s["step"])
    deltas = _delta_values(s["delta_f_min"], s["delta_f_max"], s["delta_f_step"])

    scan = scan_grid(params, grid)
    sweep = sweep_kerr_threshold(params, grid, deltas)

    warnings = []
    if sweep.truncated_at is not None:
        warnings.append(
            f"acceptance region empty at delta_F = {sweep.truncated_at:g}; "
            "sweep truncated"
        )

    outputs = {}
    if "csv" in formats:
        outputs["fig5a.csv"] = csv_text(
            ("x", "y", "Q"), zip(scan.x, scan.y, scan.q)
        )
        outputs["fig5b.csv"] = csv_text(
            ("x", "y", "F"), zip(scan.x, scan.y, scan.f_cut)
        )
        outputs["fig6.csv"] = csv_text(
            ("delta_F", "avg_F", "P_omega"),
            zip(
                sweep.axis_values,
                sweep.series["avg_F"],
                sweep.series["P_omega"],
            ),
        )
        outputs["fig7.csv"] = csv_text(
            ("delta_F", "F_teleport"),
            zip(sweep.axis_values, sweep.series["avg_F_teleport"]),
        )
    if "json" in formats:
        outputs["summary.json"] = json_text(
            {
                "f0": scan.f_baseline,
                "params": {
                    "lambda": params.lam,
                    "alpha": params.alpha,
                    "phi": params.phi,
                    "n_max": params.n_max,
                    "fock_cut": params.fock_cut,
                },
                "grid": {
                    "half_width": grid.half_width,
                    "step": grid.step,
                    "points_per_axis": grid.points_per_axis,
                },
                "sweep": [
                    {
                        "delta_F": float(d),
                        "P_omega": float(p),
                        "avg_F": float(f),
                        "avg_F_teleport": float(ft),
                        "n_points": int(n),
                    }
                    for d, p, f, ft, n in zip(
                        sweep.axis_values,
                        sweep.series["P_omega"],
                        sweep.series["avg_F"],
                        sweep.series["avg_F_teleport"],
                        sweep.series["n_points"],
                    )
                ],
                "truncated_at": sweep.truncated_at,
                "warnings": warnings,
                "meta": {
                    "backend": _kernels.BACKEND,
                    "threads": threads,
                    "version": __version__,
                    "formats": sorted(formats),
                },
            }
        )
    if "svg" in formats:
        outputs["fig5a.svg"] = heatmap(
            scan.x, scan.y, scan.q,
            title="Outcome density over the measurement window",
            xlabel="x", ylabel="y", zlabel="Q",
        )
        outputs["fig5b.svg"] = heatmap(
            scan.x, scan.y, scan.f_cut,
            title="Conditional fidelity over the measurement window",
            xlabel="x", ylabel="y", zlabel="F",
        )
        outputs["fig6.svg"] = line_chart(
            sweep.axis_values,
            {"avg_F": sweep.series["avg_F"], "P_omega": sweep.series["P_omega"]},
            title="Accepted-region quality vs threshold",
            xlabel="delta_F",
        )
        outputs["fig7.svg"] = line_chart(
            sweep.axis_values,
            {"F_teleport": sweep.series["avg_F_teleport"]},
            title="Teleportation fidelity of accepted outcomes",
            xlabel="delta_F",
            ylabel="F_teleport",
        )

    _emit(args.out, outputs)
    print(f"baseline fidelity f0 = {scan.f_baseline:.6f}")
    for line in warnings:
        print(f"warning: {line}")
    return 0


def _read_csv(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            lines = [ln.strip() for ln in fh if ln.strip()]
    except OSError as exc:
        raise _ConfigError(f"cannot read {path}: {exc}") from None
    if len(lines) < 2:
        raise _ConfigError(f"{path}: need a header row and at least one data row")
    header = lines[0].split(",")
    cols = [[] for _ in header]
    for ln in lines[1:]:
        parts = ln.split(",")
        if len(parts) != len(header):
            raise _ConfigError(f"{path}: row has {len(parts)} fields, expected {len(header)}")
        for col, part in zip(cols, parts):
            try:
                col.append(float(part))
            except ValueError:
                raise _ConfigError(f"{path}: non-numeric field {part!r}") from None
    return header, [np.array(c) for c in cols]


def _cmd_plot(args) -> int:
    rendered = []
    for path in args.paths:
        header, cols = _read_csv(path)
        stem = os.path.splitext(os.path.basename(path))[0]
        if len(header) >= 3 and header[0] == "x" and header[1] == "y":
            svg = heatmap(
                cols[0], cols[1], cols[2],
                title=stem, xlabel="x", ylabel="y", zlabel=header[2],
            )
        elif len(header) >= 2:
            svg = line_chart(
                cols[0],
                {name: col for name, col in zip(header[1:], cols[1:])},
                title=stem,
                xlabel=header[0],
            )
        else:
            raise _ConfigError(f"{path}: need at least two columns to plot")
        out_dir = args.out if args.out is not None else (os.path.dirname(path) or ".")
        rendered.append((out_dir, f"{stem}.svg", svg))
    for out_dir, name, svg in rendered:
        os.makedirs(out_dir, exist_ok=True)
        target = os.path.join(out_dir, name)
        write_text(target, svg)
        print(f"wrote {target}")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="entconc",
        description="Entanglement concentration of a two-mode squeezed ladder: "
        "figure-data exports for the dispersive-filter and coherent-probe schemes.",
    )
    parser.add_argument("--version", action="version", version=f"entconc {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(sp):
        sp.add_argument("--config", metavar="FILE", help="INI parameter file")
        sp.add_argument(
            "--set",
            dest="overrides",
            action="append",
            default=[],
            metavar="SECTION.KEY=VALUE",
            help="override one parameter (repeatable)",
        )
        sp.add_argument("--out", default=".", metavar="DIR", help="output directory")
        sp.add_argument(
            "--format",
            default="csv,json",
            metavar="LIST",
            help="comma-separated outputs: csv, json, svg (default csv,json)",
        )
        sp.add_argument(
            "--threads", type=int, metavar="N", help="cap compiled-kernel threads"
        )

    add_common(sub.add_parser("cavity", help="filter-phase sweep and optimum"))
    add_common(sub.add_parser("kerr", help="outcome-grid scan and threshold sweep"))
    add_common(sub.add_parser("optimize", help="fidelity optimum only"))

    sp = sub.add_parser("plot", help="render exported CSVs to SVG")
    sp.add_argument("paths", nargs="+", metavar="CSV", help="CSV files to render")
    sp.add_argument(
        "--out", default=None, metavar="DIR",
        help="output directory (default: alongside each input)",
    )
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "cavity":
            return _cmd_cavity(args, optimum_only=False)
        if args.command == "optimize":
            return _cmd_cavity(args, optimum_only=True)
        if args.command == "kerr":
            return _cmd_kerr(args)
        return _cmd_plot(args)
    except (_ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ConcentrationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())

"""Command-line entry point for the verification suites.

Configuration is a flat key=value text file plus flag overrides (flags
win).  Every run writes manifest.json, report.json, and results.csv into
the output directory; the exit status is 0 when all verdicts pass, 1 on a
verdict failure, 2 on usage errors.  Identical config and seed reproduce
byte-identical CSVs (only the JSON timestamp field varies).
"""

from __future__ import annotations

import argparse
import sys
import time
from dataclasses import fields as dc_fields
from pathlib import Path

from . import grid as grid_mod
from .serialize import write_csv, write_json
from .suites import (
    SUITE_ANCHORS,
    ExperimentConfig,
    SuiteResult,
    apply_suite_defaults,
    list_suites,
    run_suite,
)

USAGE_ERROR = 2

_CONFIG_FIELDS = {
    "suite": str,
    "seed": int,
    "dim": int,
    "points": int,
    "half_width": float,
    "k_min": int,
    "k_max": int,
    "ensemble": int,
    "n_times": int,
    "horizon": float,
    "out": str,
    "parallel": int,
}


def parse_config_file(path: str | Path) -> dict:
    """Flat key = value lines; '#' starts a comment."""
    values: dict = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected key = value, got {raw!r}")
        key, _, val = line.partition("=")
        key = key.strip()
        if key not in _CONFIG_FIELDS:
            raise ValueError(f"{path}:{lineno}: unknown config key {key!r}")
        values[key] = _CONFIG_FIELDS[key](val.strip())
    return values


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="smoothlab",
        description="run one verification suite and write machine-readable reports",
    )
    ap.add_argument("--suite", help="suite name (see --list-suites)")
    ap.add_argument("--config", help="flat key=value config file")
    ap.add_argument("--seed", type=int, help="RNG seed (mandatory)")
    ap.add_argument("--grid", type=int, dest="points", help="points per axis (power of two)")
    ap.add_argument("--dim", type=int, help="space dimension")
    ap.add_argument("--shells", help="shell range as kmin:kmax")
    ap.add_argument("--ensemble", type=int, help="ensemble size")
    ap.add_argument("--half-width", type=float, dest="half_width", help="box half-width")
    ap.add_argument("--out", help="output directory (default: suite name)")
    ap.add_argument("--parallel", type=int, help="FFT worker threads fanning out the members")
    ap.add_argument("--list-suites", action="store_true", help="print the suite catalog")
    return ap


def _error(msg: str) -> int:
    print(f"error: {msg}", file=sys.stderr)
    return USAGE_ERROR


def main(argv: list[str] | None = None) -> int:
    ap = _build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:  # argparse uses exit(2) for usage errors already
        return int(exc.code or 0)

    if args.list_suites:
        for line in list_suites():
            print(line)
        return 0

    values: dict = {}
    if args.config:
        try:
            values.update(parse_config_file(args.config))
        except (OSError, ValueError) as exc:
            return _error(str(exc))
    explicit = set(values)
    for name in ("suite", "seed", "points", "dim", "ensemble", "half_width", "out", "parallel"):
        val = getattr(args, name, None)
        if val is not None:
            values[name] = val
            explicit.add(name)
    if args.shells:
        try:
            k_min, k_max = (int(v) for v in args.shells.split(":"))
        except ValueError:
            return _error(f"--shells expects kmin:kmax, got {args.shells!r}")
        values["k_min"], values["k_max"] = k_min, k_max
        explicit |= {"k_min", "k_max"}

    if "suite" not in values:
        return _error("--suite is required (or provide it in --config)")
    if values["suite"] not in SUITE_ANCHORS:
        return _error(f"unknown suite {values['suite']!r}; see --list-suites")
    if "seed" not in values:
        return _error("--seed is required (determinism contract)")

    known = {f.name for f in dc_fields(ExperimentConfig)}
    cfg = ExperimentConfig(**{k: v for k, v in values.items() if k in known})
    cfg = apply_suite_defaults(cfg, explicit)
    try:
        cfg.validate()
    except ValueError as exc:
        return _error(f"config: {exc}")

    if cfg.parallel and cfg.parallel > 1:
        grid_mod.fft_workers = cfg.parallel

    out_dir = Path(cfg.out or cfg.suite)
    out_dir.mkdir(parents=True, exist_ok=True)

    start = time.time()
    result = run_suite(cfg)
    elapsed = time.time() - start

    # only the timestamp may differ between reruns of the same config
    manifest = {
        "suite": cfg.suite,
        "anchor": SUITE_ANCHORS[cfg.suite],
        "config": {f.name: getattr(cfg, f.name) for f in dc_fields(cfg)},
        "timestamp": time.strftime("%Y-%m-%dT%H:%M:%S"),
    }
    write_json(out_dir / "manifest.json", manifest)
    write_json(
        out_dir / "report.json",
        {
            "suite": result.suite,
            "anchor": result.anchor,
            "passed": result.passed,
            "verdicts": [v.__dict__ for v in result.verdicts],
            "detail": result.report,
        },
    )
    fieldnames: list[str] = []
    for row in result.csv_rows:
        for key in row:
            if key not in fieldnames:
                fieldnames.append(key)
    write_csv(out_dir / "results.csv", result.csv_rows, fieldnames)

    for v in result.verdicts:
        print(f"[{'PASS' if v.passed else 'FAIL'}] {result.suite}: {v.name} ({v.detail})")
    print(f"{result.suite}: {'all verdicts passed' if result.passed else 'verdict failure'} "
          f"in {elapsed:.1f}s; reports in {out_dir}/")
    return 0 if result.passed else 1


if __name__ == "__main__":
    raise SystemExit(main())

"""Command line entry point ``fofana-lab``.

::

    fofana-lab run --config cfg.json --suite norms --out results/ [--seed N]
    fofana-lab diff old/summary.json new/summary.json
    fofana-lab default-config

Exit codes: 0 when every check passes (or no band drifted), 1 on a failed
check or a drifted band, 2 on invalid input.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import platform
import sys
from pathlib import Path
from typing import Any, Sequence

import numpy as np
import scipy

from . import __version__, _accel
from .config import ConfigError, ExperimentConfig, default_config_dict, load_config
from .suites import SUITES, SuiteResult, iter_suites, run_suite

__all__ = ["main", "write_csv", "build_summary", "diff_summaries", "SCHEMA_VERSION", "DRIFT_TOLERANCE"]

SCHEMA_VERSION = 1
DRIFT_TOLERANCE = 0.10
EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2

log = logging.getLogger("fofana_lab")


def _cell(v: Any) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def write_csv(result: SuiteResult, path: Path) -> None:
    """Write rows with ``repr`` floats and ``\\n`` line endings (byte-stable)."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(result.columns)
    for row in result.rows:
        w.writerow([_cell(v) for v in row])
    path.write_text(buf.getvalue(), encoding="utf-8")


def _versions() -> dict[str, str | None]:
    try:
        import numba

        nb = numba.__version__
    except ImportError:
        nb = None
    return {
        "fofana_lab": __version__,
        "python": platform.python_version(),
        "numpy": np.__version__,
        "scipy": scipy.__version__,
        "numba": nb,
    }


def build_summary(suite: str, cfg: ExperimentConfig, results: Sequence[SuiteResult]) -> dict[str, Any]:
    """Machine-readable record of one run: config echo, versions, checks and bands."""
    checks = [c.to_dict() for r in results for c in r.checks]
    bands: dict[str, float] = {}
    for r in results:
        for k, v in r.bands.items():
            bands[f"{r.name}/{k}"] = v
    failed = [c["name"] for c in checks if not c["passed"]]
    return {
        "schema_version": SCHEMA_VERSION,
        "suite": suite,
        "suites": [r.name for r in results],
        "seed": cfg.seed,
        "config": cfg.to_dict(),
        "backend": _accel.BACKEND,
        "versions": _versions(),
        "counts": {"checks": len(checks), "failed": len(failed), "rows": {r.name: len(r.rows) for r in results}},
        "passed": not failed,
        "failed": failed,
        "checks": checks,
        "bands": bands,
    }


def _run(args: argparse.Namespace) -> int:
    cfg = load_config(args.config)
    if args.seed is not None:
        if args.seed < 0:
            raise ConfigError("--seed must be non-negative")
        cfg = cfg.with_seed(args.seed)
    out = Path(args.out if args.out is not None else (cfg.out or ""))
    if not str(out):
        raise ConfigError("no output directory: pass --out or set \"out\" in the config")
    try:
        out.mkdir(parents=True, exist_ok=True)
        probe = out / ".write-test"
        probe.write_text("")
        probe.unlink()
    except OSError as exc:
        raise ConfigError(f"output directory {out} is not writable: {exc}") from exc

    names = iter_suites([args.suite])
    results = []
    for name in names:
        log.info("running suite %s", name)
        res = run_suite(name, cfg)
        write_csv(res, out / f"{name}.csv")
        results.append(res)
        status = "ok" if not res.failed else f"{len(res.failed)} FAILED"
        print(f"{name}: {len(res.rows)} rows, {len(res.checks)} checks, {status}")
        for c in res.failed:
            print(f"  FAIL {c.name}: {c.value!r} {c.relation} {c.tolerance!r} does not hold")
    summary = build_summary(args.suite, cfg, results)
    (out / "summary.json").write_text(json.dumps(summary, indent=2, sort_keys=False) + "\n", encoding="utf-8")
    return EXIT_OK if summary["passed"] else EXIT_FAIL


# ---------------------------------------------------------------- diff


class DiffError(ValueError):
    """The two summaries cannot be compared."""


def _load_summary(path: str) -> dict[str, Any]:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise DiffError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise DiffError(f"{path} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict) or data.get("schema_version") != SCHEMA_VERSION:
        raise DiffError(f"{path}: unsupported summary schema {data.get('schema_version') if isinstance(data, dict) else None!r}")
    if not isinstance(data.get("bands"), dict) or not isinstance(data.get("config"), dict):
        raise DiffError(f"{path}: summary lacks bands or config")
    return data


def diff_summaries(old: dict[str, Any], new: dict[str, Any], tolerance: float = DRIFT_TOLERANCE) -> dict[str, Any]:
    """Compare logged bands of two runs.

    Grids, ladders and exponents must agree, and both runs must log the same
    band keys; otherwise :class:`DiffError` is raised.  A band drifts when
    ``|new / old - 1| > tolerance``.
    """
    for key in ("grids", "exponents", "ladders"):
        if old["config"].get(key) != new["config"].get(key):
            raise DiffError(f"incompatible runs: config {key!r} differs")
    a, b = old["bands"], new["bands"]
    only_old, only_new = sorted(set(a) - set(b)), sorted(set(b) - set(a))
    if only_old or only_new:
        parts = []
        if only_old:
            parts.append(f"missing from new run: {only_old[:5]}{' ...' if len(only_old) > 5 else ''}")
        if only_new:
            parts.append(f"missing from old run: {only_new[:5]}{' ...' if len(only_new) > 5 else ''}")
        raise DiffError("band sets differ; " + "; ".join(parts))
    drifted = []
    for k in a:
        x, y = float(a[k]), float(b[k])
        if x == y:
            continue
        d = math.inf if x == 0 else abs(y / x - 1)
        if not d <= tolerance:
            drifted.append({"band": k, "old": x, "new": y, "drift": d})
    return {"compared": len(a), "drifted": drifted, "tolerance": tolerance}


def _diff(args: argparse.Namespace) -> int:
    rep = diff_summaries(_load_summary(args.old), _load_summary(args.new), args.tolerance)
    for item in rep["drifted"]:
        print(f"DRIFT {item['band']}: {item['old']!r} -> {item['new']!r} ({100 * item['drift']:.1f}%)")
    print(f"{rep['compared']} bands compared, {len(rep['drifted'])} drifted beyond {100 * rep['tolerance']:g}%")
    return EXIT_FAIL if rep["drifted"] else EXIT_OK


# ---------------------------------------------------------------- entry point


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="fofana-lab", description="Numerical experiments for Hardy-Fofana spaces.")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run an experiment suite")
    run.add_argument("--config", required=True, help="JSON configuration file")
    run.add_argument("--suite", required=True, choices=[*SUITES, "all"])
    run.add_argument("--out", help="output directory (overrides \"out\" in the config)")
    run.add_argument("--seed", type=int, help="seed for randomized catalog entries")
    run.set_defaults(func=_run)

    diff = sub.add_parser("diff", help="compare the logged bands of two summary.json files")
    diff.add_argument("old")
    diff.add_argument("new")
    diff.add_argument("--tolerance", type=float, default=DRIFT_TOLERANCE, help="relative drift that flags a band")
    diff.set_defaults(func=_diff)

    dc = sub.add_parser("default-config", help="print the default configuration as JSON")
    dc.set_defaults(func=lambda a: print(json.dumps(default_config_dict(), indent=2)) or EXIT_OK)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code not in (0, None) else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return int(args.func(args))
    except (ConfigError, DiffError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())

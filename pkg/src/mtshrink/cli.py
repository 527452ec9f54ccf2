"""Command-line front end (``mts``)."""

from __future__ import annotations

import argparse
import json
import os
import secrets
import sys
import tempfile
from pathlib import Path
from typing import Dict, List, Sequence

import numpy as np

from .cov import CovMtsOptions, TargetSpec, mts_cov
from .evaluation.runner import SCHEMA_VERSION, SimConfig, records_to_csv, run_monte_carlo, summarize
from .evaluation.scenarios import SCENARIOS
from .mean import MeanMtsOptions, ShrinkageResult, mts_mean
from .stat_core import Dataset, WhitenMode, load_csv

EXIT_USAGE = 2

CLI_TARGETS = {
    "identity": "identity_scaled",
    "diag": "diagonal",
    "const-corr": "const_corr",
}


class CliError(Exception):
    """Reported as ``error: <message>`` with a non-zero exit status."""


def _atomic_write(files: Dict[Path, str]) -> None:
    """Write every file to a temporary sibling first, then rename them all."""
    staged = []
    try:
        for path, text in files.items():
            path.parent.mkdir(parents=True, exist_ok=True)
            fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
            staged.append((tmp, path))
            try:
                fh = os.fdopen(fd, "w", newline="")
            except BaseException:
                os.close(fd)
                raise
            with fh:
                fh.write(text)
    except BaseException:
        for tmp, _ in staged:
            Path(tmp).unlink(missing_ok=True)
        raise
    for tmp, path in staged:
        os.replace(tmp, path)


def _tolist(a):
    return np.asarray(a, dtype=float).tolist()


def _result_json(res: ShrinkageResult, target_names: Sequence[str], dump_targets=False) -> str:
    doc = {
        "schema_version": SCHEMA_VERSION,
        "estimate": _tolist(res.estimate),
        "lambda": _tolist(res.lam),
        "A_hat": _tolist(res.A_hat),
        "b_hat": _tolist(res.b_hat),
        "objective": float(res.objective),
        "targets": list(target_names),
        "active_set": list(res.active_set),
    }
    if dump_targets:
        doc["target_matrices"] = [_tolist(T) for T in res.targets]
    return json.dumps(doc, indent=2) + "\n"


def _load(path: str, role: str) -> Dataset:
    try:
        return load_csv(path, label=path)
    except OSError as exc:
        raise CliError(f"cannot read {role} file {path}: {exc.strerror or exc}") from exc
    except ValueError as exc:
        raise CliError(f"cannot parse {role} file {path}: {exc}") from exc


def _check_dims(primary: Dataset, other: Dataset, path: str) -> None:
    if other.p != primary.p:
        raise CliError(
            f"{path} has {other.p} columns (dimensions) but the primary file {primary.label} "
            f"has {primary.p}; expected p={primary.p}"
        )


def _whiten(text):
    if text is None:
        return None
    try:
        return WhitenMode.parse(text)
    except ValueError as exc:
        raise CliError(str(exc)) from exc


def _emit(text: str, output) -> None:
    if output in (None, "-"):
        sys.stdout.write(text)
    else:
        _atomic_write({Path(output): text})


def cmd_estimate_mean(args) -> int:
    paths = list(args.aux or [])
    for t in args.target or []:
        if not t.startswith("aux:"):
            raise CliError(f"mean targets must be auxiliary datasets (aux:<path>), got {t!r}")
        paths.append(t[4:])
    if not paths:
        raise CliError("estimate-mean needs at least one auxiliary dataset (--aux or --target aux:<path>)")
    X = _load(args.input, "primary")
    aux = []
    for path in paths:
        Y = _load(path, "auxiliary")
        _check_dims(X, Y, path)
        aux.append(Y)
    opts = MeanMtsOptions(weight_constraint=not args.no_weight_constraint, whiten=_whiten(args.whiten))
    try:
        res = mts_mean(X, aux, opts)
    except ValueError as exc:
        raise CliError(str(exc)) from exc
    _emit(_result_json(res, [f"aux:{p}" for p in paths]), args.output)
    return 0


def _parse_target(text: str, X: Dataset) -> TargetSpec:
    if text.startswith("aux:"):
        path = text[4:]
        Y = _load(path, "auxiliary")
        _check_dims(X, Y, path)
        return TargetSpec.aux(Y)
    if text in CLI_TARGETS:
        return TargetSpec(CLI_TARGETS[text])
    raise CliError(f"unknown target {text!r}; use one of {', '.join(CLI_TARGETS)} or aux:<path>")


def cmd_estimate_cov(args) -> int:
    if not args.target:
        raise CliError("estimate-cov needs at least one --target")
    X = _load(args.input, "primary")
    specs = [_parse_target(t, X) for t in args.target]
    opts = CovMtsOptions(whiten=_whiten(args.whiten), assume_zero_mean=args.assume_zero_mean)
    try:
        res = mts_cov(X, specs, opts)
    except ValueError as exc:
        raise CliError(str(exc)) from exc
    _emit(_result_json(res, args.target, dump_targets=args.dump_targets), args.output)
    return 0


def cmd_simulate(args) -> int:
    try:
        raw = json.loads(Path(args.config).read_text())
    except OSError as exc:
        raise CliError(f"cannot read config {args.config}: {exc.strerror or exc}") from exc
    except json.JSONDecodeError as exc:
        raise CliError(f"config {args.config} is not valid JSON: {exc}") from exc
    if args.seed is not None:
        raw["seed"] = args.seed
    elif "seed" not in raw:
        raw["seed"] = secrets.randbits(63)
        print(f"seed: {raw['seed']}", file=sys.stderr)
    try:
        cfg = SimConfig.from_dict(raw)
    except (TypeError, ValueError) as exc:
        raise CliError(f"invalid config {args.config}: {exc}") from exc
    workers = args.workers
    if workers is None:
        workers = int(os.environ.get("MTS_WORKERS", "1"))
    records = run_monte_carlo(cfg, workers=workers, progress=not args.quiet)
    summary = summarize(cfg, records)
    _atomic_write({
        Path(args.records): records_to_csv(records),
        Path(args.summary): json.dumps(summary, indent=2) + "\n",
    })
    return 0


def cmd_targets_list(args) -> int:
    lines = [
        "identity     scaled identity trace(S)/p * I",
        "diag         diagonal of the sample covariance",
        "const-corr   constant-correlation matrix",
        "aux:<path>   covariance (or mean) of an auxiliary CSV dataset",
        "",
        "scenarios for 'simulate': " + ", ".join(sorted(SCENARIOS)),
    ]
    print("\n".join(lines))
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="mts", description="Multi-target shrinkage of means and covariances.")
    sub = p.add_subparsers(dest="command", required=True)

    m = sub.add_parser("estimate-mean", help="shrink a sample mean towards auxiliary sample means")
    m.add_argument("input", help="primary CSV (rows = observations)")
    m.add_argument("--aux", action="append", metavar="PATH", help="auxiliary CSV (repeatable)")
    m.add_argument("--target", action="append", metavar="aux:PATH", help="same as --aux (repeatable)")
    m.add_argument("--no-weight-constraint", action="store_true")
    m.add_argument("--whiten", metavar="MODE", help="full, partial or partial:<k>")
    m.add_argument("-o", "--output", help="output JSON path (default: stdout)")
    m.set_defaults(func=cmd_estimate_mean)

    c = sub.add_parser("estimate-cov", help="shrink a sample covariance towards several targets")
    c.add_argument("input", help="primary CSV (rows = observations)")
    c.add_argument("--target", action="append", metavar="KIND",
                   help="identity | diag | const-corr | aux:<path> (repeatable)")
    c.add_argument("--whiten", metavar="MODE", help="full, partial or partial:<k>")
    c.add_argument("--assume-zero-mean", action="store_true")
    c.add_argument("--dump-targets", action="store_true", help="include the target matrices")
    c.add_argument("-o", "--output", help="output JSON path (default: stdout)")
    c.set_defaults(func=cmd_estimate_cov)

    s = sub.add_parser("simulate", help="run a Monte Carlo study from a JSON config")
    s.add_argument("config")
    s.add_argument("--records", default="records.csv", help="per-repetition CSV (default: records.csv)")
    s.add_argument("--summary", default="summary.json", help="summary JSON (default: summary.json)")
    s.add_argument("--seed", type=int, help="root seed; overrides the config")
    s.add_argument("--workers", type=int, help="worker processes (default: $MTS_WORKERS or 1)")
    s.add_argument("-q", "--quiet", action="store_true", help="no progress output")
    s.set_defaults(func=cmd_simulate)

    t = sub.add_parser("targets-list", help="list target kinds and simulation scenarios")
    t.set_defaults(func=cmd_targets_list)
    return p


def main(argv: List[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

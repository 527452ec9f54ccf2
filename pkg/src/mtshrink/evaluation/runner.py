"""Seeded Monte Carlo runner.

Every model draw and every noise repetition gets its own generator, keyed
by ``(seed, sweep_index, model_index[, rep_index])``. Results therefore do
not depend on how work is split across processes.
"""

from __future__ import annotations

import csv
import io
import itertools
import json
import logging
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .metrics import paired_difference, prial, prial_difference, prial_se
from .scenarios import SCENARIOS

log = logging.getLogger(__name__)

__all__ = [
    "SimConfig",
    "RunRecord",
    "run_monte_carlo",
    "records_to_csv",
    "summarize",
    "estimator_values",
    "compare",
    "CSV_COLUMNS",
    "SCHEMA_VERSION",
]

SCHEMA_VERSION = 1
CSV_COLUMNS = (
    "scenario",
    "sweep_index",
    "sweep_point",
    "model_index",
    "rep_index",
    "estimator",
    "metric",
    "value",
    "lambda",
    "seed_used",
    "status",
    "message",
)


@dataclass(frozen=True)
class SimConfig:
    """One Monte Carlo study.

    Parameters
    ----------
    scenario : str
        Key of :data:`~mtshrink.evaluation.scenarios.SCENARIOS`.
    sweep : dict
        Parameter name to list of values; the sweep is their Cartesian
        product in key order.
    reps_model, reps_noise : int
        Model draws per sweep point and noise repetitions per model.
    seed : int
        Root seed (64-bit).
    params : dict
        Fixed scenario parameters, overridden by sweep values.
    """

    scenario: str
    sweep: Dict[str, list]
    reps_model: int = 100
    reps_noise: int = 5
    seed: int = 0
    params: Dict[str, object] = field(default_factory=dict)

    def __post_init__(self):
        if self.scenario not in SCENARIOS:
            raise ValueError(
                f"unknown scenario {self.scenario!r}; valid scenarios: {', '.join(sorted(SCENARIOS))}"
            )
        if not self.sweep or any(len(v) == 0 for v in self.sweep.values()):
            raise ValueError("sweep must name at least one parameter with at least one value")
        if self.reps_model < 1 or self.reps_noise < 1:
            raise ValueError("reps_model and reps_noise must be >= 1")
        if not 0 <= int(self.seed) < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        sc = SCENARIOS[self.scenario]
        unknown = (set(self.sweep) | set(self.params)) - set(sc.defaults)
        if unknown:
            raise ValueError(f"unknown parameters for {self.scenario}: {sorted(unknown)}")
        for point in self.points():
            sc.validate(point)

    def points(self) -> List[dict]:
        base = dict(SCENARIOS[self.scenario].defaults)
        base.update(self.params)
        keys = list(self.sweep)
        out = []
        for combo in itertools.product(*(self.sweep[k] for k in keys)):
            pt = dict(base)
            pt.update(zip(keys, combo))
            out.append(pt)
        return out

    def sweep_point(self, index: int) -> Dict[str, object]:
        """The swept coordinates (only) of sweep point ``index``."""
        pt = self.points()[index]
        return {k: pt[k] for k in self.sweep}

    @classmethod
    def from_dict(cls, d: dict) -> "SimConfig":
        d = dict(d)
        d.pop("schema_version", None)
        return cls(**d)

    def to_dict(self) -> dict:
        return {
            "scenario": self.scenario,
            "sweep": self.sweep,
            "reps_model": self.reps_model,
            "reps_noise": self.reps_noise,
            "seed": int(self.seed),
            "params": self.params,
        }


@dataclass(frozen=True)
class RunRecord:
    scenario: str
    sweep_index: int
    sweep_point: Dict[str, object]
    model_index: int
    rep_index: int
    estimator: str
    metric: str
    value: float
    lam: Optional[Tuple[float, ...]]
    seed_used: int
    status: str = "ok"
    message: str = ""

    @property
    def ok(self) -> bool:
        return self.status == "ok"


def _stream(seed: int, *key: int) -> Tuple[np.random.Generator, int]:
    ss = np.random.SeedSequence(int(seed), spawn_key=tuple(int(k) for k in key))
    return np.random.default_rng(ss), int(ss.generate_state(1, np.uint64)[0])


def _run_unit(args) -> List[RunRecord]:
    cfg, sweep_index, model_index = args
    sc = SCENARIOS[cfg.scenario]
    point = cfg.points()[sweep_index]
    swept = {k: point[k] for k in cfg.sweep}
    order = {e: i for i, e in enumerate(sc.estimators)}
    records: List[RunRecord] = []
    model_rng, model_seed = _stream(cfg.seed, sweep_index, model_index)
    try:
        model = sc.make_model(point, model_rng)
    except Exception as exc:
        msg = f"{type(exc).__name__}: {exc}"
        for r in range(cfg.reps_noise):
            for e in sc.estimators:
                records.append(RunRecord(cfg.scenario, sweep_index, swept, model_index, r, e, "",
                                         math.nan, None, model_seed, "failed", msg))
        return records
    for r in range(cfg.reps_noise):
        rng, seed_used = _stream(cfg.seed, sweep_index, model_index, r)
        try:
            outcomes = sc.evaluate(model, rng)
        except Exception as exc:
            msg = f"{type(exc).__name__}: {exc}"
            for e in sc.estimators:
                records.append(RunRecord(cfg.scenario, sweep_index, swept, model_index, r, e, "",
                                         math.nan, None, seed_used, "failed", msg))
            continue
        outcomes.sort(key=lambda o: order.get(o.estimator, len(order)))
        for o in outcomes:
            records.append(RunRecord(
                cfg.scenario, sweep_index, swept, model_index, r, o.estimator, o.metric,
                o.value, o.lam, seed_used,
                "ok" if o.error is None else "failed", o.error or "",
            ))
    return records


def _default_workers() -> int:
    env = os.environ.get("MTS_WORKERS")
    return int(env) if env else 1


def run_monte_carlo(cfg: SimConfig, workers: Optional[int] = None, progress: bool = False) -> List[RunRecord]:
    """Run every (sweep point, model, repetition) of ``cfg``.

    Parameters
    ----------
    workers : int, optional
        Number of processes; defaults to ``$MTS_WORKERS`` or 1. The output
        is identical for any value.
    progress : bool
        Report completed units on standard error.
    """
    if workers is None:
        workers = _default_workers()
    n_points = len(cfg.points())
    units = [(cfg, s, m) for s in range(n_points) for m in range(cfg.reps_model)]
    results: List[RunRecord] = []

    def report(done):
        if progress and (done % max(1, len(units) // 20) == 0 or done == len(units)):
            print(f"[{cfg.scenario}] {done}/{len(units)} model draws", file=sys.stderr, flush=True)

    if workers <= 1:
        for i, u in enumerate(units, 1):
            results.extend(_run_unit(u))
            report(i)
    else:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            for i, recs in enumerate(ex.map(_run_unit, units, chunksize=max(1, len(units) // (8 * workers))), 1):
                results.extend(recs)
                report(i)
    results.sort(key=lambda r: (r.sweep_index, r.model_index, r.rep_index))
    n_failed = sum(not r.ok for r in results)
    if n_failed:
        log.warning("%d of %d records failed", n_failed, len(results))
    return results


def _fmt(v: float) -> str:
    return repr(float(v))


def records_to_csv(records: Iterable[RunRecord]) -> str:
    """Serialise records with round-trip float formatting; one line per record."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in records:
        w.writerow([
            r.scenario,
            r.sweep_index,
            json.dumps(r.sweep_point, sort_keys=True, separators=(",", ":")),
            r.model_index,
            r.rep_index,
            r.estimator,
            r.metric,
            _fmt(r.value),
            "" if r.lam is None else ";".join(_fmt(v) for v in r.lam),
            r.seed_used,
            r.status,
            r.message,
        ])
    return buf.getvalue()


def estimator_values(records: Sequence[RunRecord], sweep_index: int, estimator: str) -> np.ndarray:
    """Per-model mean of the metric, shape ``(reps_model,)``; NaN where any repetition failed."""
    by_model: Dict[int, List[float]] = {}
    for r in records:
        if r.sweep_index == sweep_index and r.estimator == estimator:
            by_model.setdefault(r.model_index, []).append(r.value if r.ok else math.nan)
    return np.array([np.mean(by_model[m]) for m in sorted(by_model)])


def _mean_lambda(records, sweep_index, estimator):
    lams = [r.lam for r in records if r.sweep_index == sweep_index and r.estimator == estimator
            and r.ok and r.lam is not None]
    if not lams:
        return None
    return [float(v) for v in np.mean(np.array(lams), axis=0)]


def summarize(cfg: SimConfig, records: Sequence[RunRecord]) -> dict:
    """Per (sweep point, estimator) means and standard errors.

    Standard errors treat model draws as the independent units. Squared
    error metrics also get a PRIAL against ``sample``; accuracy metrics get
    the accuracy gain against ``sample``.
    """
    sc = SCENARIOS[cfg.scenario]
    n_points = len(cfg.points())
    entries = []
    for s in range(n_points):
        base = estimator_values(records, s, "sample")
        ok_base = np.isfinite(base)
        for e in sc.estimators:
            vals = estimator_values(records, s, e)
            metric = next((r.metric for r in records if r.sweep_index == s and r.estimator == e and r.metric), "")
            ok = np.isfinite(vals) & ok_base
            entry = {
                "sweep_index": s,
                "sweep_point": cfg.sweep_point(s),
                "estimator": e,
                "metric": metric,
                "n_models": int(ok.sum()),
                "n_failed_records": int(sum(1 for r in records
                                           if r.sweep_index == s and r.estimator == e and not r.ok)),
                "mean": float(np.mean(vals[ok])) if ok.any() else None,
                "se": float(np.std(vals[ok], ddof=1) / np.sqrt(ok.sum())) if ok.sum() > 1 else None,
                "mean_lambda": _mean_lambda(records, s, e),
            }
            if ok.sum() > 1 and metric == "squared_error":
                entry["prial"] = prial(base[ok], vals[ok])
                entry["prial_se"] = prial_se(base[ok], vals[ok])
            elif ok.sum() > 1 and metric == "accuracy":
                entry["accuracy_gain"], entry["accuracy_gain_se"] = paired_difference(vals[ok], base[ok])
            entries.append(entry)
    return {
        "schema_version": SCHEMA_VERSION,
        "config": cfg.to_dict(),
        "entries": entries,
    }


def compare(records: Sequence[RunRecord], sweep_index: int, a: str, b: str):
    """Difference ``a - b`` in PRIAL (squared error) or accuracy, with its standard error."""
    base = estimator_values(records, sweep_index, "sample")
    va = estimator_values(records, sweep_index, a)
    vb = estimator_values(records, sweep_index, b)
    ok = np.isfinite(base) & np.isfinite(va) & np.isfinite(vb)
    metric = next(r.metric for r in records if r.sweep_index == sweep_index and r.estimator == a)
    if metric == "squared_error":
        return prial_difference(base[ok], va[ok], vb[ok])
    return paired_difference(va[ok], vb[ok])

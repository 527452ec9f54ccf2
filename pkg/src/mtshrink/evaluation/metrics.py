"""Loss summaries used to compare estimators over Monte Carlo repetitions."""

from __future__ import annotations

import numpy as np

__all__ = ["prial", "accuracy_gain", "prial_se", "prial_difference", "paired_difference"]


def prial(sq_err_sample, sq_err_shrunk) -> float:
    """Percentage improvement in average (squared) loss over the sample estimator.

    100 means no error, 0 no improvement, negative values are worse than
    the sample estimator.
    """
    a = np.asarray(sq_err_sample, dtype=float)
    s = np.asarray(sq_err_shrunk, dtype=float)
    if a.size == 0 or a.shape != s.shape:
        raise ValueError("need two non-empty error lists of equal length")
    base = a.mean()
    if base == 0:
        raise ValueError("mean sample error is zero; PRIAL undefined")
    return float(100.0 * (base - s.mean()) / base)


def accuracy_gain(acc_shrunk: float, acc_sample: float) -> float:
    for v in (acc_shrunk, acc_sample):
        if not 0.0 <= v <= 1.0:
            raise ValueError(f"accuracy {v} outside [0, 1]")
    return float(acc_shrunk - acc_sample)


def _ratio_se(num, den):
    """Delta-method standard error of ``mean(num) / mean(den)`` over paired units."""
    num = np.asarray(num, dtype=float)
    den = np.asarray(den, dtype=float)
    N = num.size
    if N < 2:
        return float("nan")
    R = num.mean() / den.mean()
    resid = num - R * den
    return float(np.sqrt(resid.var(ddof=1) / N) / abs(den.mean()))


def prial_se(sq_err_sample, sq_err_shrunk) -> float:
    """Monte Carlo standard error of :func:`prial`; inputs are i.i.d. paired units."""
    a = np.asarray(sq_err_sample, dtype=float)
    s = np.asarray(sq_err_shrunk, dtype=float)
    return 100.0 * _ratio_se(a - s, a)


def prial_difference(sq_err_sample, sq_err_a, sq_err_b):
    """``PRIAL(a) - PRIAL(b)`` and its standard error."""
    e0 = np.asarray(sq_err_sample, dtype=float)
    d = np.asarray(sq_err_b, dtype=float) - np.asarray(sq_err_a, dtype=float)
    return float(100.0 * d.mean() / e0.mean()), 100.0 * _ratio_se(d, e0)


def paired_difference(x, y):
    """Mean of ``x - y`` and its standard error."""
    d = np.asarray(x, dtype=float) - np.asarray(y, dtype=float)
    se = float(d.std(ddof=1) / np.sqrt(d.size)) if d.size > 1 else float("nan")
    return float(d.mean()), se

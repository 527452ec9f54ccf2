"""Multi-target shrinkage of the sample mean towards auxiliary sample means."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np

from . import qp
from .stat_core import (
    Dataset,
    DatasetLike,
    WhitenMode,
    as_dataset,
    pooled_covariance,
    sample_mean,
    whitening_transform,
)

__all__ = [
    "MeanMtsOptions",
    "ShrinkageResult",
    "estimate_A_mean",
    "estimate_b_mean",
    "weight_constraint_rows",
    "combine",
    "mts_mean",
]


@dataclass(frozen=True)
class MeanMtsOptions:
    """Options for :func:`mts_mean`.

    Parameters
    ----------
    weight_constraint : bool
        Require that no auxiliary observation is weighted more than a
        primary observation.
    whiten : WhitenMode, optional
        Whiten the data before estimating the intensities.
    covariance_for_whitening : (p, p) array_like, optional
        Covariance defining the whitening; defaults to the average sample
        covariance of all datasets.
    """

    weight_constraint: bool = True
    whiten: Optional[WhitenMode] = None
    covariance_for_whitening: Optional[np.ndarray] = None


@dataclass(frozen=True)
class ShrinkageResult:
    """Combined estimate together with the program that produced it.

    ``unbiased`` and ``targets`` hold the ingredients of the convex
    combination in original coordinates, so ``estimate`` can be recomputed
    with :func:`combine`. ``A_hat`` and ``b_hat`` are in whatever
    coordinates the intensities were estimated in.
    """

    estimate: np.ndarray
    lam: np.ndarray
    A_hat: np.ndarray
    b_hat: np.ndarray
    objective: float
    unbiased: np.ndarray
    targets: tuple
    active_set: tuple = ()

    @property
    def K(self) -> int:
        return self.lam.size


def combine(unbiased, targets, lam) -> np.ndarray:
    """``(1 - sum(lam)) * unbiased + sum_k lam[k] * targets[k]``."""
    lam = np.asarray(lam, dtype=float)
    out = (1.0 - lam.sum()) * np.asarray(unbiased, dtype=float)
    for lk, T in zip(lam, targets):
        if lk != 0.0:
            out = out + lk * np.asarray(T, dtype=float)
    return out


def estimate_A_mean(mu_hat, targets) -> np.ndarray:
    """Gram matrix of the differences ``targets[k] - mu_hat``."""
    mu_hat = np.asarray(mu_hat, dtype=float).ravel()
    if len(targets) == 0:
        raise ValueError("need at least one target")
    D = []
    for k, t in enumerate(targets):
        t = np.asarray(t, dtype=float).ravel()
        if t.size != mu_hat.size:
            raise ValueError(f"target {k} has length {t.size}, expected {mu_hat.size}")
        D.append(t - mu_hat)
    D = np.column_stack(D)
    return D.T @ D


def estimate_b_mean(X: DatasetLike, K: int) -> np.ndarray:
    """Summed variance estimates of the sample mean, repeated ``K`` times.

    Each dimension contributes ``sum_t (x_it - mean_i)^2 / (n (n - 1))``.
    """
    X = as_dataset(X)
    n = X.n
    dev = X.data - sample_mean(X)[:, np.newaxis]
    b = np.sum(dev * dev) / (n * (n - 1))
    return np.full(int(K), b)


def weight_constraint_rows(n: int, n_k: Sequence[float]):
    """Rows of ``lam_k / n_k + sum_l lam_l / n <= 1 / n``, one per target."""
    if n < 1 or any(m < 1 for m in n_k):
        raise ValueError("sample sizes must be positive")
    K = len(n_k)
    rows = []
    for k in range(K):
        row = np.full(K, 1.0 / n)
        row[k] += 1.0 / n_k[k]
        rows.append((row, 1.0 / n))
    return rows


def mts_mean(
    X: DatasetLike,
    aux: Sequence[DatasetLike],
    opts: MeanMtsOptions = MeanMtsOptions(),
) -> ShrinkageResult:
    """Shrink the sample mean of ``X`` towards the sample means of ``aux``.

    Intensities come from the simplex-constrained program with the data
    estimates of ``A`` and ``b``; when whitening is requested these are
    computed on whitened data, while the returned estimate combines the
    means in original coordinates.
    """
    X = as_dataset(X, label="primary")
    aux = [as_dataset(Y, label=f"aux[{k}]") for k, Y in enumerate(aux)]
    if not aux:
        raise ValueError("need at least one auxiliary dataset")
    for k, Y in enumerate(aux):
        if Y.p != X.p:
            raise ValueError(f"auxiliary dataset {k} has p={Y.p}, primary has p={X.p}")

    mu = sample_mean(X)
    targets = tuple(sample_mean(Y) for Y in aux)

    Xe, mue, te = X, mu, targets
    if opts.whiten is not None:
        C = opts.covariance_for_whitening
        if C is None:
            C = pooled_covariance([X, *aux])
        C = np.asarray(C, dtype=float)
        if C.shape != (X.p, X.p):
            raise ValueError(f"whitening covariance has shape {C.shape}, expected ({X.p}, {X.p})")
        W = whitening_transform(C, opts.whiten)
        Xe = X.transform(W)
        mue = W @ mu
        te = tuple(W @ t for t in targets)

    K = len(aux)
    A_hat = estimate_A_mean(mue, te)
    b_hat = estimate_b_mean(Xe, K)
    extras = weight_constraint_rows(X.n, [Y.n for Y in aux]) if opts.weight_constraint else ()
    sol = qp.solve(qp.QpProblem(A_hat, b_hat, tuple(extras)))
    estimate = combine(mu, targets, sol.lam)
    return ShrinkageResult(
        estimate=estimate,
        lam=sol.lam,
        A_hat=A_hat,
        b_hat=b_hat,
        objective=sol.objective,
        unbiased=mu,
        targets=targets,
        active_set=sol.active_set,
    )

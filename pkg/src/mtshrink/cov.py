"""Multi-target shrinkage of the sample covariance matrix.

Targets are either structured estimators computed from the sample
covariance itself (scaled identity, diagonal, constant correlation) or
covariance estimates from auxiliary datasets.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import qp
from .mean import ShrinkageResult, combine
from .stat_core import (
    Dataset,
    DatasetLike,
    WhitenMode,
    as_dataset,
    sample_covariance,
    second_moment,
    symmetrize,
    whitening_transform,
)

__all__ = [
    "TargetSpec",
    "CovMtsOptions",
    "TARGET_KINDS",
    "build_target",
    "estimate_A_cov",
    "estimate_b_cov",
    "mts_cov",
]

TARGET_KINDS = ("identity_scaled", "diagonal", "const_corr", "aux_dataset")


@dataclass(frozen=True)
class TargetSpec:
    kind: str
    dataset: Optional[Dataset] = None

    def __post_init__(self):
        if self.kind not in TARGET_KINDS:
            raise ValueError(f"unknown target kind {self.kind!r}; expected one of {TARGET_KINDS}")
        if (self.kind == "aux_dataset") != (self.dataset is not None):
            raise ValueError("a dataset is required for aux_dataset targets and only for them")
        if self.dataset is not None:
            object.__setattr__(self, "dataset", as_dataset(self.dataset))

    @classmethod
    def identity(cls):
        return cls("identity_scaled")

    @classmethod
    def diagonal(cls):
        return cls("diagonal")

    @classmethod
    def const_corr(cls):
        return cls("const_corr")

    @classmethod
    def aux(cls, X: DatasetLike):
        return cls("aux_dataset", as_dataset(X))

    @property
    def name(self) -> str:
        if self.kind == "aux_dataset":
            return f"aux:{self.dataset.label}" if self.dataset.label else "aux"
        return self.kind


@dataclass(frozen=True)
class CovMtsOptions:
    """Options for :func:`mts_cov`.

    ``assume_zero_mean`` skips centering everywhere: covariances become
    ``X X^T / n`` and the variance estimate uses raw products.
    """

    whiten: Optional[WhitenMode] = None
    assume_zero_mean: bool = False


def _cov(X, assume_zero_mean):
    return second_moment(X) if assume_zero_mean else sample_covariance(X)


def build_target(spec: TargetSpec, S, X: DatasetLike = None, assume_zero_mean: bool = False) -> np.ndarray:
    S = symmetrize(S)
    p = S.shape[0]
    if spec.kind == "identity_scaled":
        return np.trace(S) / p * np.eye(p)
    if spec.kind == "diagonal":
        return np.diag(np.diag(S))
    if spec.kind == "const_corr":
        d = np.diag(S)
        bad = np.flatnonzero(d <= 0)
        if bad.size:
            raise ValueError(f"constant-correlation target needs positive variances; dimension {bad[0]} has {d[bad[0]]:.3g}")
        if p == 1:
            return S.copy()
        sd = np.sqrt(d)
        R = S / np.outer(sd, sd)
        iu = np.triu_indices(p, 1)
        r_bar = R[iu].mean()
        F = r_bar * np.outer(sd, sd)
        np.fill_diagonal(F, d)
        return F
    Y = spec.dataset
    if Y.p != p:
        raise ValueError(f"auxiliary dataset {Y.label!r} has p={Y.p}, expected p={p}")
    return _cov(Y, assume_zero_mean)


def estimate_A_cov(S, targets) -> np.ndarray:
    """Frobenius Gram matrix of the differences ``targets[k] - S``."""
    S = np.asarray(S, dtype=float)
    if len(targets) == 0:
        raise ValueError("need at least one target")
    D = []
    for k, T in enumerate(targets):
        T = np.asarray(T, dtype=float)
        if T.shape != S.shape:
            raise ValueError(f"target {k} has shape {T.shape}, expected {S.shape}")
        D.append((T - S).ravel())
    D = np.column_stack(D)
    return D.T @ D


def estimate_b_cov(X: DatasetLike, K: int, assume_zero_mean: bool = False) -> np.ndarray:
    """Summed variance estimates of all sample-covariance entries, repeated ``K`` times.

    With ``w_ijs = x_is x_js`` (centered data unless ``assume_zero_mean``),
    entry ``(i, j)`` contributes ``sum_s (w_ijs - mean_s w_ij)^2 / ((n-1) n)``.
    The sum over all ``(i, j)`` collapses to
    ``sum_s |x_s|^4 - n * |M|_F^2`` with ``M = X X^T / n``.
    """
    X = as_dataset(X)
    n = X.n
    Z = X.data if assume_zero_mean else X.data - X.data.mean(axis=1, keepdims=True)
    sq = np.einsum("is,is->s", Z, Z)
    M = Z @ Z.T / n
    total = np.sum(sq * sq) - n * np.sum(M * M)
    return np.full(int(K), max(total, 0.0) / ((n - 1) * n))


def mts_cov(
    X: DatasetLike,
    specs: Sequence[TargetSpec],
    opts: CovMtsOptions = CovMtsOptions(),
) -> ShrinkageResult:
    """Shrink the sample covariance of ``X`` towards the targets in ``specs``.

    With whitening, ``W`` is built from the sample covariance and the
    intensities are estimated from ``W X`` and the mapped targets
    ``W T W^T``; the returned estimate combines the unmapped matrices.
    """
    X = as_dataset(X, label="primary")
    specs = list(specs)
    if not specs:
        raise ValueError("need at least one target")
    zm = opts.assume_zero_mean
    S = _cov(X, zm)
    targets = tuple(build_target(s, S, X, zm) for s in specs)

    Xe, Se, te = X, S, targets
    if opts.whiten is not None:
        W = whitening_transform(S, opts.whiten)
        Xe = X.transform(W)
        Se = symmetrize(W @ S @ W.T)
        te = tuple(symmetrize(W @ T @ W.T) for T in targets)

    K = len(specs)
    A_hat = estimate_A_cov(Se, te)
    b_hat = estimate_b_cov(Xe, K, zm)
    sol = qp.solve(qp.QpProblem(A_hat, b_hat))
    estimate = symmetrize(combine(S, targets, sol.lam)) if np.any(sol.lam) else S
    return ShrinkageResult(
        estimate=estimate,
        lam=sol.lam,
        A_hat=A_hat,
        b_hat=b_hat,
        objective=sol.objective,
        unbiased=S,
        targets=targets,
        active_set=sol.active_set,
    )

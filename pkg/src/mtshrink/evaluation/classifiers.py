"""Linear discriminant analysis and common spatial patterns."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from scipy.linalg import eigh
from scipy.stats import norm

from ..stat_core import DatasetLike, as_dataset, symmetrize

__all__ = [
    "LdaModel",
    "lda_train",
    "gaussian_accuracy",
    "CspFilters",
    "csp_filters",
    "csp_features",
]


@dataclass(frozen=True)
class LdaModel:
    weight: np.ndarray
    bias: float
    class_labels: Tuple[str, str] = ("A", "B")

    def decision(self, x) -> np.ndarray:
        return np.asarray(x, dtype=float).T @ self.weight + self.bias

    def predict(self, x) -> np.ndarray:
        """Labels for the columns of ``x`` (``(p, m)``); ties go to the second class."""
        d = np.atleast_1d(self.decision(x))
        a, b = self.class_labels
        return np.where(d > 0, a, b)


def _default_ridge(cov):
    p = cov.shape[0]
    return 1e-8 * np.trace(cov) / p


def lda_train(mean_a, mean_b, cov, ridge: Optional[float] = None, class_labels=("A", "B")) -> LdaModel:
    """Fisher discriminant ``w = (cov + ridge I)^{-1} (mean_a - mean_b)``.

    The boundary sits halfway between the class means. ``ridge`` defaults
    to ``1e-8 * trace(cov) / p``.
    """
    mean_a = np.asarray(mean_a, dtype=float).ravel()
    mean_b = np.asarray(mean_b, dtype=float).ravel()
    cov = symmetrize(cov)
    p = mean_a.size
    if cov.shape != (p, p) or mean_b.size != p:
        raise ValueError("means and covariance dimensions disagree")
    if ridge is None:
        ridge = _default_ridge(cov)
    if ridge < 0:
        raise ValueError("ridge must be non-negative")
    M = cov + ridge * np.eye(p)
    try:
        w = np.linalg.solve(M, mean_a - mean_b)
    except np.linalg.LinAlgError as exc:
        raise np.linalg.LinAlgError("LDA covariance is singular even after the ridge") from exc
    if not np.all(np.isfinite(w)):
        raise np.linalg.LinAlgError("LDA covariance is singular even after the ridge")
    bias = -float(w @ (mean_a + mean_b)) / 2
    return LdaModel(w, bias, tuple(class_labels))


def gaussian_accuracy(model: LdaModel, mu_a, mu_b, cov) -> float:
    """Exact balanced accuracy of a linear rule on two Gaussian classes with shared ``cov``."""
    w = model.weight
    s = float(np.sqrt(w @ np.asarray(cov) @ w))
    if s == 0:
        # w = 0: every point is assigned to the second class.
        return 0.5
    acc_a = norm.cdf((w @ mu_a + model.bias) / s)
    acc_b = norm.cdf(-(w @ mu_b + model.bias) / s)
    return float((acc_a + acc_b) / 2)


@dataclass(frozen=True)
class CspFilters:
    """CSP filters as columns: class-A filters first, then class-B filters."""

    filters: np.ndarray
    gen_eigenvalues: np.ndarray

    @property
    def m(self) -> int:
        return self.filters.shape[1]


def csp_filters(S_a, S_b, m_per_class: int = 3, ridge: Optional[float] = None) -> CspFilters:
    """Solve ``S_a f = gamma (S_a + S_b) f`` and keep both ends of the spectrum.

    Filters are normalised so that ``f^T (S_a + S_b) f = 1``.
    """
    S_a = symmetrize(S_a)
    S_b = symmetrize(S_b)
    p = S_a.shape[0]
    if S_b.shape != (p, p):
        raise ValueError("class covariances have different shapes")
    if not 1 <= m_per_class <= p // 2:
        raise ValueError(f"m_per_class must lie in [1, {p // 2}], got {m_per_class}")
    B = S_a + S_b
    try:
        gam, F = eigh(S_a, B + (ridge or 0.0) * np.eye(p))
    except np.linalg.LinAlgError as exc:
        if ridge is not None:
            raise np.linalg.LinAlgError("CSP generalized eigenproblem failed") from exc
        # Singular S_a + S_b: retry once with the LDA default ridge.
        try:
            gam, F = eigh(S_a, B + _default_ridge(B) * np.eye(p))
        except np.linalg.LinAlgError as exc2:
            raise np.linalg.LinAlgError("CSP generalized eigenproblem failed") from exc2
    order = np.argsort(gam)[::-1]
    gam, F = gam[order], F[:, order]
    idx = np.r_[np.arange(m_per_class), np.arange(p - m_per_class, p)]
    return CspFilters(F[:, idx], gam[idx])


def csp_features(X_trial: DatasetLike, filters: CspFilters) -> np.ndarray:
    """Log of the unbiased variance of each filtered signal ``f^T X``."""
    X = as_dataset(X_trial)
    Y = filters.filters.T @ X.data
    v = Y.var(axis=1, ddof=1)
    zero = np.flatnonzero(v <= 0)
    if zero.size:
        raise ValueError(f"filtered signal {zero[0]} has zero variance")
    return np.log(v)

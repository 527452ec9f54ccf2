"""Sample estimators, symmetric eigendecomposition and whitening.

All data matrices use the ``(p, n)`` layout: one row per dimension and one
column per observation.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path
from typing import NamedTuple, Optional, Union

import numpy as np

__all__ = [
    "Dataset",
    "EigDecomp",
    "WhitenMode",
    "as_dataset",
    "symmetrize",
    "sample_mean",
    "sample_covariance",
    "second_moment",
    "eig_sym",
    "whitening_transform",
    "pooled_covariance",
    "load_csv",
]


@dataclass(frozen=True)
class Dataset:
    """Observation matrix of shape ``(p, n)``.

    Parameters
    ----------
    data : array_like of shape (p, n)
        Rows are dimensions, columns are observations.
    label : str, optional
        Free-form tag, used in error messages.
    """

    data: np.ndarray
    label: Optional[str] = field(default=None, compare=False)

    def __post_init__(self):
        arr = np.array(self.data, dtype=float, copy=True)
        if arr.ndim == 1:
            arr = arr[np.newaxis, :]
        if arr.ndim != 2:
            raise ValueError(f"dataset {self._name()} must be 2-D, got shape {arr.shape}")
        p, n = arr.shape
        if p < 1:
            raise ValueError(f"dataset {self._name()} has no dimensions")
        if n < 2:
            raise ValueError(f"dataset {self._name()} needs n >= 2 observations, got {n}")
        if not np.all(np.isfinite(arr)):
            raise ValueError(f"dataset {self._name()} contains non-finite entries")
        arr.setflags(write=False)
        object.__setattr__(self, "data", arr)

    def _name(self):
        return repr(self.label) if self.label else "<unnamed>"

    @property
    def p(self) -> int:
        return self.data.shape[0]

    @property
    def n(self) -> int:
        return self.data.shape[1]

    def transform(self, W: np.ndarray) -> "Dataset":
        """Return the dataset with every observation mapped through ``W``."""
        return Dataset(W @ self.data, label=self.label)


DatasetLike = Union[Dataset, np.ndarray]


def as_dataset(X: DatasetLike, label: Optional[str] = None) -> Dataset:
    if isinstance(X, Dataset):
        return X
    return Dataset(np.asarray(X, dtype=float), label=label)


def symmetrize(M) -> np.ndarray:
    """Return ``(M + M.T) / 2`` as a float array."""
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {M.shape}")
    return (M + M.T) / 2


def sample_mean(X: DatasetLike) -> np.ndarray:
    """Row means of ``X``, a vector of length p."""
    return as_dataset(X).data.mean(axis=1)


def sample_covariance(X: DatasetLike) -> np.ndarray:
    """Sample covariance with divisor n (not n - 1)."""
    X = as_dataset(X)
    Xc = X.data - sample_mean(X)[:, np.newaxis]
    return symmetrize(Xc @ Xc.T / X.n)


def second_moment(X: DatasetLike) -> np.ndarray:
    """Uncentered second moment ``X X^T / n``; the covariance estimate for known zero mean."""
    X = as_dataset(X)
    return symmetrize(X.data @ X.data.T / X.n)


class EigDecomp(NamedTuple):
    """Eigenvalues in descending order and matching orthonormal eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        R = self.eigenvectors
        return (R * self.eigenvalues) @ R.T


def eig_sym(M, name: str = "matrix") -> EigDecomp:
    M = symmetrize(M)
    try:
        w, R = np.linalg.eigh(M)
    except np.linalg.LinAlgError as exc:
        raise np.linalg.LinAlgError(f"eigendecomposition of {name} did not converge") from exc
    order = np.argsort(w)[::-1]
    return EigDecomp(w[order], R[:, order])


@dataclass(frozen=True)
class WhitenMode:
    """Full whitening, or partial whitening of the top ``k`` principal components.

    Partial whitening rescales the ``k`` leading principal components so their
    variance equals that of component ``k + 1`` and leaves the rest alone.
    """

    variant: str = "full"
    k: Optional[int] = None

    def __post_init__(self):
        if self.variant == "full":
            if self.k is not None:
                raise ValueError("full whitening takes no k")
        elif self.variant == "partial":
            if self.k is None or int(self.k) != self.k or self.k < 1:
                raise ValueError(f"partial whitening needs a positive integer k, got {self.k!r}")
        else:
            raise ValueError(f"unknown whitening variant {self.variant!r}")

    @classmethod
    def full(cls) -> "WhitenMode":
        return cls("full")

    @classmethod
    def partial(cls, k: int = 5) -> "WhitenMode":
        return cls("partial", k)

    @classmethod
    def parse(cls, text: str) -> "WhitenMode":
        """Parse ``"full"``, ``"partial"`` or ``"partial:<k>"``."""
        if text == "full":
            return cls.full()
        if text == "partial":
            return cls.partial()
        if text.startswith("partial:"):
            return cls.partial(int(text.split(":", 1)[1]))
        raise ValueError(f"cannot parse whitening mode {text!r}")


def whitening_transform(S, mode: WhitenMode = WhitenMode.full(), floor: Optional[float] = None) -> np.ndarray:
    """Whitening matrix ``W`` for covariance ``S``.

    Parameters
    ----------
    S : (p, p) array_like
        Positive semi-definite covariance.
    mode : WhitenMode
        ``full`` gives ``W S W^T = I``. ``partial(k)`` shrinks the top ``k``
        eigenvalues down to the ``(k+1)``-th.
    floor : float, optional
        Smallest admissible eigenvalue for full whitening. Defaults to
        ``1e-12`` times the largest eigenvalue.

    Returns
    -------
    W : (p, p) ndarray
        Symmetric transform ``R diag(d) R^T``.

    Raises
    ------
    ValueError
        If an eigenvalue that must be inverted lies below ``floor``.
    """
    gamma, R = eig_sym(S, name="whitening covariance")
    p = gamma.size
    if floor is None:
        floor = 1e-12 * max(gamma[0], 0.0)
    if mode.variant == "full":
        bad = np.flatnonzero(gamma < floor) if floor > 0 else np.flatnonzero(gamma <= 0)
        if bad.size:
            i = int(bad[0])
            raise ValueError(
                f"eigenvalue {i} ({gamma[i]:.3g}) is below the whitening floor {floor:.3g}; "
                "regularize the covariance first"
            )
        d = 1.0 / np.sqrt(gamma)
    else:
        k = mode.k
        if not 1 <= k < p:
            raise ValueError(f"partial whitening needs 1 <= k < p, got k={k}, p={p}")
        ref = gamma[k]
        if ref < floor or ref <= 0:
            raise ValueError(
                f"eigenvalue {k} ({ref:.3g}) is below the whitening floor {floor:.3g}; "
                "regularize the covariance first"
            )
        d = np.ones(p)
        d[:k] = np.sqrt(ref / gamma[:k])
    return symmetrize((R * d) @ R.T)


def pooled_covariance(datasets, assume_zero_mean: bool = False) -> np.ndarray:
    """Unweighted average of the per-dataset covariance estimates."""
    est = second_moment if assume_zero_mean else sample_covariance
    mats = [est(X) for X in datasets]
    return symmetrize(sum(mats) / len(mats))


def load_csv(path, label: Optional[str] = None) -> Dataset:
    """Read a CSV with one observation per row into a ``(p, n)`` dataset.

    A first row that does not parse as numbers is taken to be a header.
    """
    path = Path(path)
    with path.open(newline="") as fh:
        rows = [r for r in csv.reader(fh) if r and any(c.strip() for c in r)]
    if not rows:
        raise ValueError(f"{path}: empty file")
    try:
        [float(c) for c in rows[0]]
    except ValueError:
        rows = rows[1:]
    width = len(rows[0]) if rows else 0
    for lineno, r in enumerate(rows, start=1):
        if len(r) != width:
            raise ValueError(f"{path}: row {lineno} has {len(r)} columns, expected {width}")
    try:
        data = np.array([[float(c) for c in r] for r in rows], dtype=float)
    except ValueError as exc:
        raise ValueError(f"{path}: {exc}") from exc
    if data.size == 0:
        raise ValueError(f"{path}: no observations")
    return Dataset(data.T, label=label or str(path))

"""Data generators and estimator line-ups for the simulation scenarios.

Each scenario splits its randomness in two: a *model* (random signs,
rotations, rescaled eigenvalues) drawn once per model index, and the
*data* drawn afresh for every noise repetition. ``evaluate_*`` functions
take a model plus a noise generator and return one :class:`Outcome` per
estimator.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.stats import norm

from .. import qp
from ..cov import estimate_A_cov, estimate_b_cov
from ..mean import (
    MeanMtsOptions,
    combine,
    estimate_A_mean,
    estimate_b_mean,
    mts_mean,
    weight_constraint_rows,
)
from ..cov import CovMtsOptions, TargetSpec, mts_cov
from ..stat_core import Dataset, WhitenMode, pooled_covariance, sample_mean, second_moment
from .classifiers import csp_features, csp_filters, gaussian_accuracy, lda_train

__all__ = [
    "Outcome",
    "log_spaced_eigenvalues",
    "constrained_rotation",
    "rescale_random_eigenvalues",
    "sim1_model",
    "gen_sim1",
    "sim2_model",
    "gen_sim2",
    "sim3_model",
    "gen_sim3",
    "sim4_model",
    "gen_sim4",
    "sim5_model",
    "gen_sim5",
    "SCENARIOS",
]


@dataclass
class Outcome:
    estimator: str
    metric: str
    value: float = float("nan")
    lam: Optional[Tuple[float, ...]] = None
    error: Optional[str] = None


def _attempt(out: List[Outcome], name: str, metric: str, fn: Callable):
    try:
        value, lam = fn()
        lam = None if lam is None else tuple(float(v) for v in np.ravel(lam))
        out.append(Outcome(name, metric, float(value), lam))
    except Exception as exc:  # recorded, never raised: one bad estimator must not sink the sweep
        out.append(Outcome(name, metric, error=f"{type(exc).__name__}: {exc}"))


def _qp(A, b, extras=()):
    return qp.solve(qp.QpProblem(A, b, tuple(extras))).lam


def log_spaced_eigenvalues(p: int, lo: float = -1.0, hi: float = 1.0) -> np.ndarray:
    """``10 ** linspace(lo, hi, p)``, i.e. ``gamma_i = 10^(2(i-1)/(p-1) - 1)`` by default."""
    return 10.0 ** np.linspace(lo, hi, p)


def constrained_rotation(p: int, phi_deg: float, rng, exclude: Sequence[int] = ()) -> np.ndarray:
    """Product of Givens rotations by ``phi_deg`` over a random disjoint pairing of coordinates.

    Coordinates in ``exclude`` are left untouched; with an odd number of
    free coordinates one of them stays unpaired.
    """
    if not 0.0 <= phi_deg <= 90.0:
        raise ValueError(f"rotation angle must lie in [0, 90], got {phi_deg}")
    free = np.array([i for i in range(p) if i not in set(exclude)], dtype=int)
    perm = rng.permutation(free)
    R = np.eye(p)
    if phi_deg == 0:
        return R
    phi = np.deg2rad(phi_deg)
    c, s = np.cos(phi), np.sin(phi)
    if phi_deg == 90:
        c, s = 0.0, 1.0
    for a, b in zip(perm[0::2], perm[1::2]):
        R[a, a] = c
        R[b, b] = c
        R[a, b] = -s
        R[b, a] = s
    return R


def rescale_random_eigenvalues(gamma, rng, P: int = 10, exclude: Sequence[int] = ()) -> np.ndarray:
    """Multiply ``P`` randomly chosen entries by ``1 + i/P`` for ``i = 1..P``."""
    gamma = np.array(gamma, dtype=float)
    free = np.array([i for i in range(gamma.size) if i not in set(exclude)], dtype=int)
    idx = rng.choice(free, size=P, replace=False)
    gamma[idx] *= 1.0 + np.arange(1, P + 1) / P
    return gamma


def _gaussian(rng, scale_or_cov, n, mean=None):
    """``p x n`` Gaussian sample from a diagonal scale vector or a full covariance."""
    a = np.asarray(scale_or_cov, dtype=float)
    if a.ndim == 1:
        Z = rng.standard_normal((a.size, n)) * np.sqrt(a)[:, None]
    else:
        L = np.linalg.cholesky(a)
        Z = L @ rng.standard_normal((a.shape[0], n))
    if mean is not None:
        Z += np.asarray(mean)[:, None]
    return Z


# --------------------------------------------------------------------------
# Simulation 1: mean, four auxiliary datasets of decreasing quality

@dataclass(frozen=True)
class Sim1Model:
    p: int
    n: int
    n_aux: Tuple[int, ...]
    aux_means: np.ndarray

    @property
    def true_mean(self) -> np.ndarray:
        return np.zeros(self.p)

    def sample(self, rng):
        X = Dataset(rng.standard_normal((self.p, self.n)), "primary")
        aux = [
            Dataset(_gaussian(rng, np.ones(self.p), nk, m), f"aux{k + 1}")
            for k, (nk, m) in enumerate(zip(self.n_aux, self.aux_means))
        ]
        return X, aux


def sim1_eta(p: int) -> np.ndarray:
    return np.array([1.0 / np.sqrt(p), 0.5, 1.0, 2.0]) / 5


def sim1_model(p: int, regime: str, rng) -> Sim1Model:
    if p < 2:
        raise ValueError("p must be >= 2")
    if regime == "ldl":
        n = p
    elif regime == "foldl":
        n = 50
    else:
        raise ValueError(f"unknown regime {regime!r}")
    eta = sim1_eta(p)
    signs = rng.choice([-1.0, 1.0], size=(eta.size, p))
    return Sim1Model(p, n, (n,) * eta.size, signs * eta[:, None])


def gen_sim1(p: int, regime: str, rng):
    """Primary dataset, four auxiliary datasets and the true (zero) mean."""
    model = sim1_model(p, regime, rng)
    X, aux = model.sample(rng)
    return X, aux, model.true_mean


SIM1_ESTIMATORS = ("sample", "sts_1", "sts_2", "sts_3", "sts_4", "sts_joint", "mts")


def evaluate_sim1(model: Sim1Model, rng) -> List[Outcome]:
    X, aux = model.sample(rng)
    truth = model.true_mean
    mu = sample_mean(X)
    tmeans = [sample_mean(Y) for Y in aux]
    n_joint = sum(model.n_aux)
    joint = sum(nk * t for nk, t in zip(model.n_aux, tmeans)) / n_joint
    K = len(aux)
    G = estimate_A_mean(mu, tmeans + [joint])
    b = estimate_b_mean(X, K + 1)
    sizes = list(model.n_aux) + [n_joint]
    all_t = tmeans + [joint]

    def err(est):
        return float(np.sum((est - truth) ** 2))

    out: List[Outcome] = []
    _attempt(out, "sample", "squared_error", lambda: (err(mu), None))
    for k in range(K + 1):
        name = f"sts_{k + 1}" if k < K else "sts_joint"

        def sts(k=k):
            lam = _qp(G[k:k + 1, k:k + 1], b[:1], weight_constraint_rows(model.n, [sizes[k]]))
            return err(combine(mu, [all_t[k]], lam)), lam

        _attempt(out, name, "squared_error", sts)

    def mts():
        lam = _qp(G[:K, :K], b[:K], weight_constraint_rows(model.n, list(model.n_aux)))
        return err(combine(mu, tmeans, lam)), lam

    _attempt(out, "mts", "squared_error", mts)
    return out


# --------------------------------------------------------------------------
# Simulation 2: LDA with shrunk class means

BAYES_ACCURACY = 0.8


@dataclass(frozen=True)
class Sim2Model:
    gamma: np.ndarray
    mu_a: np.ndarray
    mu_b: np.ndarray
    aux_a: np.ndarray
    aux_b: np.ndarray
    n: int = 50
    n_aux: int = 100
    spike_index: Optional[int] = None

    @property
    def p(self) -> int:
        return self.gamma.size

    @property
    def cov(self) -> np.ndarray:
        return np.diag(self.gamma)

    def bayes_accuracy(self) -> float:
        d = self.mu_a - self.mu_b
        return float(norm.cdf(np.sqrt(np.sum(d * d / self.gamma)) / 2))

    def sample(self, rng):
        g = self.gamma
        XA = Dataset(_gaussian(rng, g, self.n, self.mu_a), "A")
        XB = Dataset(_gaussian(rng, g, self.n, self.mu_b), "B")
        auxA = [Dataset(_gaussian(rng, g, self.n_aux, m), f"A{k + 1}") for k, m in enumerate(self.aux_a)]
        auxB = [Dataset(_gaussian(rng, g, self.n_aux, m), f"B{k + 1}") for k, m in enumerate(self.aux_b)]
        return XA, XB, auxA, auxB


def sim2_delta(n_discriminative: int) -> float:
    """Per-dimension class-mean difference giving Bayes accuracy 0.8 at unit covariance."""
    return 2.0 * norm.ppf(BAYES_ACCURACY) / np.sqrt(n_discriminative)


def sim2_model(kappa: float, spike: bool, rng, p: int = 50, n: int = 50, n_aux: int = 100) -> Sim2Model:
    if not np.isfinite(kappa):
        raise ValueError("kappa must be finite")
    eta = 10.0 ** kappa * np.array([0.25, 0.5, 1.0, 2.0])
    gamma = log_spaced_eigenvalues(p)
    spike_index = None
    disc = np.ones(p, dtype=bool)
    if spike:
        spike_index = int(np.argmax(gamma))
        gamma[spike_index] *= 100.0
        disc[spike_index] = False
    delta = sim2_delta(int(disc.sum()))
    base_a = np.where(disc, delta / 2, 0.0)
    base_b = -base_a
    scale = np.sqrt(gamma)

    def offsets():
        s = rng.choice([-1.0, 1.0], size=(eta.size, p)) * disc
        return s * eta[:, None]

    aux_a = (base_a + offsets()) * scale
    aux_b = (base_b + offsets()) * scale
    return Sim2Model(gamma, base_a * scale, base_b * scale, aux_a, aux_b, n, n_aux, spike_index)


def gen_sim2(kappa: float, spike: bool, rng):
    model = sim2_model(kappa, spike, rng)
    return model, model.sample(rng)


SIM2_ESTIMATORS = ("sample", "pooled", "sts_joint", "mts", "wmts")


def evaluate_sim2(model: Sim2Model, rng) -> List[Outcome]:
    XA, XB, auxA, auxB = model.sample(rng)
    C = pooled_covariance([XA, XB, *auxA, *auxB])
    truth = (model.mu_a, model.mu_b, model.cov)

    def acc(ma, mb):
        return gaussian_accuracy(lda_train(ma, mb, C), *truth)

    out: List[Outcome] = []
    mA, mB = sample_mean(XA), sample_mean(XB)
    _attempt(out, "sample", "accuracy", lambda: (acc(mA, mB), None))

    def pooled():
        pa = (sum(sample_mean(Y) for Y in auxA) + mA) / (len(auxA) + 1)
        pb = (sum(sample_mean(Y) for Y in auxB) + mB) / (len(auxB) + 1)
        return acc(pa, pb), None

    _attempt(out, "pooled", "accuracy", pooled)

    def joint(aux, label):
        return Dataset(np.hstack([Y.data for Y in aux]), label)

    def shrink(opts, joint_target=False):
        ta = [joint(auxA, "A_joint")] if joint_target else auxA
        tb = [joint(auxB, "B_joint")] if joint_target else auxB
        ra = mts_mean(XA, ta, opts)
        rb = mts_mean(XB, tb, opts)
        return acc(ra.estimate, rb.estimate), np.concatenate([ra.lam, rb.lam])

    _attempt(out, "sts_joint", "accuracy", lambda: shrink(MeanMtsOptions(), joint_target=True))
    _attempt(out, "mts", "accuracy", lambda: shrink(MeanMtsOptions()))
    _attempt(
        out,
        "wmts",
        "accuracy",
        lambda: shrink(MeanMtsOptions(whiten=WhitenMode.full(), covariance_for_whitening=C)),
    )
    return out


# --------------------------------------------------------------------------
# Simulation 3: covariance, auxiliary datasets differing in the top eigenvalue

@dataclass(frozen=True)
class CovModel:
    cov: np.ndarray
    aux_covs: Tuple[np.ndarray, ...]
    n: int
    n_aux: Tuple[int, ...]

    @property
    def p(self) -> int:
        return self.cov.shape[0]

    def sample(self, rng):
        def draw(C, m, label):
            d = np.diag(C)
            if np.count_nonzero(C - np.diag(d)) == 0:
                return Dataset(_gaussian(rng, d, m), label)
            return Dataset(_gaussian(rng, C, m), label)

        X = draw(self.cov, self.n, "primary")
        aux = [draw(C, m, f"aux{k + 1}") for k, (C, m) in enumerate(zip(self.aux_covs, self.n_aux))]
        return X, aux


def sim3_eta(p: int) -> np.ndarray:
    return np.array([1.0 / np.sqrt(p), 1.0, 2.5, 5.0]) / 10


def sim3_model(p: int, regime: str, rng=None) -> CovModel:
    """Deterministic given ``p`` and ``regime``; ``rng`` is accepted for interface symmetry."""
    if p < 4:
        raise ValueError("p must be >= 4")
    if regime == "ldl":
        n = p
    elif regime == "foldl":
        n = 50
    else:
        raise ValueError(f"unknown regime {regime!r}")
    gamma = log_spaced_eigenvalues(p)
    top = int(np.argmax(gamma))
    aux = []
    for e in sim3_eta(p):
        g = gamma.copy()
        g[top] = e * p
        aux.append(np.diag(g))
    return CovModel(np.diag(gamma), tuple(aux), n, (n,) * 4)


def gen_sim3(p: int, regime: str, rng):
    model = sim3_model(p, regime, rng)
    X, aux = model.sample(rng)
    return X, aux, model.cov


def _frob2(M):
    return float(np.sum(M * M))


SIM3_ESTIMATORS = ("sample", "sts_1", "sts_2", "sts_3", "sts_4", "sts_joint", "mts")


def evaluate_sim3(model: CovModel, rng) -> List[Outcome]:
    X, aux = model.sample(rng)
    C = model.cov
    S = second_moment(X)
    T = [second_moment(Y) for Y in aux]
    joint = sum(T) / len(T)
    all_t = T + [joint]
    K = len(T)
    G = estimate_A_cov(S, all_t)
    b = estimate_b_cov(X, K + 1, assume_zero_mean=True)

    out: List[Outcome] = []
    _attempt(out, "sample", "squared_error", lambda: (_frob2(S - C), None))
    for k in range(K + 1):
        name = f"sts_{k + 1}" if k < K else "sts_joint"

        def sts(k=k):
            lam = _qp(G[k:k + 1, k:k + 1], b[:1])
            return _frob2(combine(S, [all_t[k]], lam) - C), lam

        _attempt(out, name, "squared_error", sts)

    def mts():
        lam = _qp(G[:K, :K], b[:K])
        return _frob2(combine(S, T, lam) - C), lam

    _attempt(out, "mts", "squared_error", mts)
    return out


# --------------------------------------------------------------------------
# Simulation 4: identity target plus rotated auxiliary datasets

def sim4_model(p: int, phi: float, rng) -> CovModel:
    if p < 4 or p % 2:
        raise ValueError("p must be even and >= 4")
    gamma = log_spaced_eigenvalues(p)
    C = np.diag(gamma)
    aux = []
    for _ in range(4):
        R = constrained_rotation(p, phi, rng)
        aux.append((R * gamma) @ R.T)
    return CovModel(C, tuple(aux), p, (p // 2, p, 2 * p, 4 * p))


def gen_sim4(p: int, phi: float, rng):
    model = sim4_model(p, phi, rng)
    X, aux = model.sample(rng)
    return X, aux, model


SIM4_ESTIMATORS = ("sample", "sts_identity", "sts_1", "sts_2", "sts_3", "sts_4", "mts")


def evaluate_sim4(model: CovModel, rng) -> List[Outcome]:
    X, aux = model.sample(rng)
    C = model.cov
    S = second_moment(X)
    p = S.shape[0]
    T = [np.trace(S) / p * np.eye(p)] + [second_moment(Y) for Y in aux]
    K = len(T)
    G = estimate_A_cov(S, T)
    b = estimate_b_cov(X, K, assume_zero_mean=True)

    out: List[Outcome] = []
    _attempt(out, "sample", "squared_error", lambda: (_frob2(S - C), None))
    for k in range(K):
        name = "sts_identity" if k == 0 else f"sts_{k}"

        def sts(k=k):
            lam = _qp(G[k:k + 1, k:k + 1], b[:1])
            return _frob2(combine(S, [T[k]], lam) - C), lam

        _attempt(out, name, "squared_error", sts)

    def mts():
        lam = _qp(G, b)
        return _frob2(combine(S, T, lam) - C), lam

    _attempt(out, "mts", "squared_error", mts)
    return out


# --------------------------------------------------------------------------
# Simulation 5: CSP with shrunk class covariances

SIM5_PHI = (0.0, 5.0, 10.0, 90.0)


@dataclass(frozen=True)
class Sim5Model:
    cov_a: np.ndarray
    cov_b: np.ndarray
    aux_a: Tuple[np.ndarray, ...]
    aux_b: Tuple[np.ndarray, ...]
    n: int = 200
    n_test: int = 20
    n_test_trials: int = 50
    m_per_class: int = 3
    spike_index: Optional[int] = None

    @property
    def p(self) -> int:
        return self.cov_a.shape[0]

    def sample(self, rng):
        def draw(C, m, label):
            return Dataset(_gaussian(rng, C, m), label)

        XA = draw(self.cov_a, self.n, "A")
        XB = draw(self.cov_b, self.n, "B")
        auxA = [draw(C, self.n, f"A{k + 1}") for k, C in enumerate(self.aux_a)]
        auxB = [draw(C, self.n, f"B{k + 1}") for k, C in enumerate(self.aux_b)]
        La = np.linalg.cholesky(self.cov_a)
        Lb = np.linalg.cholesky(self.cov_b)
        shape = (self.n_test_trials, self.p, self.n_test)
        test_a = La @ rng.standard_normal(shape)
        test_b = Lb @ rng.standard_normal(shape)
        return XA, XB, auxA, auxB, test_a, test_b


def sim5_model(
    w: float,
    phi_list: Sequence[float],
    spike: bool,
    rng,
    p: int = 50,
    n: int = 200,
    n_test: int = 20,
    n_test_trials: int = 50,
    m_per_class: int = 3,
    P: int = 10,
) -> Sim5Model:
    if not 0.0 <= w <= 1.0:
        raise ValueError(f"w must lie in [0, 1], got {w}")
    gamma = log_spaced_eigenvalues(p)
    exclude: Tuple[int, ...] = ()
    spike_index = None
    if spike:
        spike_index = int(np.argmax(gamma))
        gamma[spike_index] *= 100.0
        exclude = (spike_index,)

    def diag_cov():
        return np.diag(rescale_random_eigenvalues(gamma, rng, P, exclude))

    cov_a, cov_b = diag_cov(), diag_cov()
    aux_a, aux_b = [], []
    for phi in phi_list:
        for base, sink in ((cov_a, aux_a), (cov_b, aux_b)):
            R = constrained_rotation(p, phi, rng, exclude)
            diff = R @ diag_cov() @ R.T
            sink.append((1 - w) * diff + w * base)
    return Sim5Model(cov_a, cov_b, tuple(aux_a), tuple(aux_b), n, n_test, n_test_trials, m_per_class, spike_index)


def gen_sim5(w: float, phi_list: Sequence[float], spike: bool, rng, **kw):
    model = sim5_model(w, phi_list, spike, rng, **kw)
    return model, model.sample(rng)


SIM5_ESTIMATORS = ("sample", "pooled", "sts_joint", "mts", "wmts")


def _csp_accuracy(Sa, Sb, train_a, train_b, test_a, test_b, m_per_class) -> float:
    filt = csp_filters(Sa, Sb, m_per_class)
    fa = np.array([csp_features(t, filt) for t in train_a])
    fb = np.array([csp_features(t, filt) for t in train_b])
    cov = (np.cov(fa.T, bias=True) + np.cov(fb.T, bias=True)) / 2
    lda = lda_train(fa.mean(axis=0), fb.mean(axis=0), np.atleast_2d(cov))
    ga = np.array([csp_features(t, filt) for t in test_a])
    gb = np.array([csp_features(t, filt) for t in test_b])
    correct = np.sum(lda.decision(ga.T) > 0) + np.sum(lda.decision(gb.T) <= 0)
    return float(correct / (len(ga) + len(gb)))


def evaluate_sim5(model: Sim5Model, rng) -> List[Outcome]:
    XA, XB, auxA, auxB, test_a, test_b = model.sample(rng)
    L = model.n_test

    def trials(X):
        m = X.n // L
        return [X.data[:, i * L:(i + 1) * L] for i in range(m)]

    train_a, train_b = trials(XA), trials(XB)

    def acc(Sa, Sb):
        return _csp_accuracy(Sa, Sb, train_a, train_b, test_a, test_b, model.m_per_class)

    out: List[Outcome] = []
    Sa, Sb = second_moment(XA), second_moment(XB)
    _attempt(out, "sample", "accuracy", lambda: (acc(Sa, Sb), None))

    def pooled():
        pa = (sum(second_moment(Y) for Y in auxA) + Sa) / (len(auxA) + 1)
        pb = (sum(second_moment(Y) for Y in auxB) + Sb) / (len(auxB) + 1)
        return acc(pa, pb), None

    _attempt(out, "pooled", "accuracy", pooled)

    def joint_ds(aux, label):
        return Dataset(np.hstack([Y.data for Y in aux]), label)

    def shrink(opts, joint_target=False):
        ta = [TargetSpec.aux(joint_ds(auxA, "A_joint"))] if joint_target else [TargetSpec.aux(Y) for Y in auxA]
        tb = [TargetSpec.aux(joint_ds(auxB, "B_joint"))] if joint_target else [TargetSpec.aux(Y) for Y in auxB]
        ra = mts_cov(XA, ta, opts)
        rb = mts_cov(XB, tb, opts)
        return acc(ra.estimate, rb.estimate), np.concatenate([ra.lam, rb.lam])

    zm = CovMtsOptions(assume_zero_mean=True)
    _attempt(out, "sts_joint", "accuracy", lambda: shrink(zm, joint_target=True))
    _attempt(out, "mts", "accuracy", lambda: shrink(zm))
    _attempt(
        out,
        "wmts",
        "accuracy",
        lambda: shrink(CovMtsOptions(whiten=WhitenMode.full(), assume_zero_mean=True)),
    )
    return out


# --------------------------------------------------------------------------
# Registry used by the Monte Carlo runner

@dataclass(frozen=True)
class Scenario:
    name: str
    estimators: Tuple[str, ...]
    defaults: Dict[str, object]
    make_model: Callable
    evaluate: Callable
    validate: Callable = field(default=lambda point: None)


def _check_p(point, minimum=2):
    p = point["p"]
    if int(p) != p or p < minimum:
        raise ValueError(f"p must be an integer >= {minimum}, got {p}")


def _check_sim4(point):
    _check_p(point, 4)
    if point["p"] % 2:
        raise ValueError("sim4 needs an even p")
    if not 0 <= point["phi"] <= 90:
        raise ValueError(f"phi must lie in [0, 90], got {point['phi']}")


def _check_sim5(point):
    if not 0 <= point["w"] <= 1:
        raise ValueError(f"w must lie in [0, 1], got {point['w']}")
    for phi in point["phi_list"]:
        if not 0 <= phi <= 90:
            raise ValueError(f"rotation angles must lie in [0, 90], got {phi}")


SCENARIOS: Dict[str, Scenario] = {
    "sim1_mean_ldl": Scenario(
        "sim1_mean_ldl", SIM1_ESTIMATORS, {"p": 100},
        lambda pt, rng: sim1_model(int(pt["p"]), "ldl", rng), evaluate_sim1, _check_p,
    ),
    "sim1_mean_foldl": Scenario(
        "sim1_mean_foldl", SIM1_ESTIMATORS, {"p": 100},
        lambda pt, rng: sim1_model(int(pt["p"]), "foldl", rng), evaluate_sim1, _check_p,
    ),
    "sim2_lda": Scenario(
        "sim2_lda", SIM2_ESTIMATORS, {"kappa": 0.0, "spike": False},
        lambda pt, rng: sim2_model(float(pt["kappa"]), bool(pt["spike"]), rng), evaluate_sim2,
    ),
    "sim3_cov_ldl": Scenario(
        "sim3_cov_ldl", SIM3_ESTIMATORS, {"p": 100},
        lambda pt, rng: sim3_model(int(pt["p"]), "ldl", rng), evaluate_sim3,
        lambda pt: _check_p(pt, 4),
    ),
    "sim3_cov_foldl": Scenario(
        "sim3_cov_foldl", SIM3_ESTIMATORS, {"p": 100},
        lambda pt, rng: sim3_model(int(pt["p"]), "foldl", rng), evaluate_sim3,
        lambda pt: _check_p(pt, 4),
    ),
    "sim4_cov_targets": Scenario(
        "sim4_cov_targets", SIM4_ESTIMATORS, {"p": 100, "phi": 0.0},
        lambda pt, rng: sim4_model(int(pt["p"]), float(pt["phi"]), rng), evaluate_sim4, _check_sim4,
    ),
    "sim5_csp": Scenario(
        "sim5_csp", SIM5_ESTIMATORS,
        {"w": 0.5, "spike": False, "phi_list": list(SIM5_PHI), "n_test_trials": 50, "m_per_class": 3},
        lambda pt, rng: sim5_model(
            float(pt["w"]), [float(v) for v in pt["phi_list"]], bool(pt["spike"]), rng,
            n_test_trials=int(pt["n_test_trials"]), m_per_class=int(pt["m_per_class"]),
        ),
        evaluate_sim5, _check_sim5,
    ),
}

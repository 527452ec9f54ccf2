"""Shrinking a sample covariance towards several targets at once.

The true covariance has a decaying spectrum. Three structured targets
(scaled identity, diagonal, constant correlation) and one auxiliary
dataset drawn from a slightly perturbed covariance compete for weight.
"""

import numpy as np

from mtshrink import CovMtsOptions, TargetSpec, WhitenMode, mts_cov

rng = np.random.default_rng(1)
p, n = 40, 30
Q, _ = np.linalg.qr(rng.standard_normal((p, p)))
C = Q @ np.diag(np.logspace(1, -1, p)) @ Q.T
C_aux = C + 0.05 * np.diag(rng.uniform(0, 1, p))

L, L_aux = np.linalg.cholesky(C), np.linalg.cholesky(C_aux)
X = L @ rng.standard_normal((p, n))
Y = L_aux @ rng.standard_normal((p, 200))

targets = [TargetSpec.identity(), TargetSpec.diagonal(), TargetSpec.const_corr(), TargetSpec.aux(Y)]


def err(M):
    return np.sum((M - C) ** 2)


res = mts_cov(X, targets)
print("targets    ", [t.name for t in targets])
print("intensities", np.round(res.lam, 3))
print(f"sample covariance error {err(res.unbiased):8.2f}")
print(f"combined error          {err(res.estimate):8.2f}")

# Intensities estimated after whitening with the sample covariance
res_w = mts_cov(X, targets, CovMtsOptions(whiten=WhitenMode.partial(5)))
print("partially whitened intensities", np.round(res_w.lam, 3))
print(f"partially whitened error         {err(res_w.estimate):8.2f}")

"""Common spatial patterns from covariances estimated with multi-target shrinkage.

Two classes of multichannel trials differ in the variance of a few
sources. Each class covariance is shrunk towards the pooled covariance of
other subjects' data, with and without whitening, and the resulting CSP
log-variance features are compared by how well a simple LDA separates them.
"""

import numpy as np

from mtshrink import CovMtsOptions, TargetSpec, WhitenMode, mts_cov
from mtshrink.evaluation.classifiers import csp_features, csp_filters, lda_train

rng = np.random.default_rng(4)
p, T = 20, 50
Q, _ = np.linalg.qr(rng.standard_normal((p, p)))
base = np.logspace(1.5, -1, p)
base[0] *= 10.0  # a strong source shared by both classes
gain_a, gain_b = np.ones(p), np.ones(p)
gain_a[3], gain_b[4] = 4.0, 4.0
C_a, C_b = Q @ np.diag(base * gain_a) @ Q.T, Q @ np.diag(base * gain_b) @ Q.T


def trials(C, count):
    L = np.linalg.cholesky(C)
    return [L @ rng.standard_normal((p, T)) for _ in range(count)]


def concat(ts):
    return np.hstack(ts)


train_a, train_b = trials(C_a, 5), trials(C_b, 5)
test_a, test_b = trials(C_a, 200), trials(C_b, 200)
others = concat(trials(C_a, 40) + trials(C_b, 40))


def accuracy(S_a, S_b):
    filt = csp_filters(S_a, S_b, m_per_class=2)
    fa = np.array([csp_features(t, filt) for t in train_a])
    fb = np.array([csp_features(t, filt) for t in train_b])
    Z = np.vstack([fa - fa.mean(0), fb - fb.mean(0)])
    model = lda_train(fa.mean(0), fb.mean(0), Z.T @ Z / len(Z))
    ta = np.array([csp_features(t, filt) for t in test_a]).T
    tb = np.array([csp_features(t, filt) for t in test_b]).T
    hits = np.sum(model.predict(ta) == "A") + np.sum(model.predict(tb) == "B")
    return hits / (ta.shape[1] + tb.shape[1])


for label, whiten in [("sample", None), ("MTS", False), ("whitened MTS", True)]:
    covs = []
    for tr in (train_a, train_b):
        X = concat(tr)
        if whiten is None:
            covs.append(np.cov(X, bias=True))
            continue
        opts = CovMtsOptions(whiten=WhitenMode.full() if whiten else None)
        res = mts_cov(X, [TargetSpec.identity(), TargetSpec.aux(others)], opts)
        covs.append(res.estimate)
    print(f"{label:<13} test accuracy {accuracy(*covs):.3f}")

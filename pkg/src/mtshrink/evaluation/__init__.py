"""Monte Carlo evaluation: generators, metrics, LDA/CSP and the seeded runner."""

from .classifiers import CspFilters, LdaModel, csp_features, csp_filters, gaussian_accuracy, lda_train
from .metrics import accuracy_gain, prial, prial_difference, prial_se
from .runner import RunRecord, SimConfig, compare, records_to_csv, run_monte_carlo, summarize
from .scenarios import (
    SCENARIOS,
    constrained_rotation,
    gen_sim1,
    gen_sim2,
    gen_sim3,
    gen_sim4,
    gen_sim5,
)

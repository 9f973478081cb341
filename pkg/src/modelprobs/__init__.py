"""Estimators of Bayesian posterior model probabilities, compared against
exact closed-form answers on four tractable model-choice problems."""

__version__ = "0.1.0"

from .estimators import (
    EstimateResult,
    congdon_coupled_ex2,
    congdon_estimate,
    dirac_plugin,
    gibbs_corrected,
    mc_stderr,
    scott_estimate,
)
from .models import (
    ExampleConfig,
    ModelComponent,
    ModelSet,
    build_example,
    ex3_bayes_factor_closed_form,
    exact_bayes_factor,
    exact_posterior_probs,
)
from .samplers import (
    RandomStream,
    SampleMatrix,
    coupled_posterior_pair_ex2,
    sample_beta,
    sample_ex1_m1_posterior,
    sample_gamma,
    sample_normal,
    sample_within_model_posteriors,
)
from .specfun import exp_integral_e1, log_beta, log_factorial, log_gamma

__all__ = [
    "EstimateResult", "ExampleConfig", "ModelComponent", "ModelSet",
    "RandomStream", "SampleMatrix",
    "build_example", "congdon_coupled_ex2", "congdon_estimate",
    "coupled_posterior_pair_ex2", "dirac_plugin", "ex3_bayes_factor_closed_form",
    "exact_bayes_factor", "exact_posterior_probs", "exp_integral_e1",
    "gibbs_corrected", "log_beta", "log_factorial", "log_gamma", "mc_stderr",
    "sample_beta", "sample_ex1_m1_posterior", "sample_gamma", "sample_normal",
    "sample_within_model_posteriors", "scott_estimate",
]

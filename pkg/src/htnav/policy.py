"""Stochastic control policies over the mean-function approximator.

Two families share one parametrization: a heavy-tailed Cauchy policy
(location = approximator output, fixed scale sigma) and a light-tailed
Gaussian policy (mean = approximator output, fixed standard deviation
sigma).  Action dimensions are sampled independently with the shared
scalar sigma.  Sampling, log-density, and the analytic score function
all operate on the raw (pre-projection) action; the infinity-norm
projection only constrains what gets executed.
"""

from dataclasses import dataclass, replace

import numpy as np

from .net import ApproximatorSpec, backward_batch, forward, forward_batch, init_weights

FAMILIES = ("cauchy", "gaussian")

LOG_2PI = float(np.log(2.0 * np.pi))


@dataclass
class PolicyParameters:
    """Flat weight vector plus the fixed distribution parameters.

    ``sigma`` is the Cauchy scale / Gaussian standard deviation and is
    never touched by training.
    """

    spec: ApproximatorSpec
    weights: np.ndarray
    sigma: float
    family: str

    def __post_init__(self):
        self.weights = np.asarray(self.weights, dtype=float)
        if self.weights.shape != (self.spec.num_weights,):
            raise ValueError(
                f"weights shape {self.weights.shape} does not match spec "
                f"({self.spec.num_weights} parameters)"
            )
        if not self.sigma > 0:
            raise ValueError(f"sigma must be positive, got {self.sigma}")
        if self.family not in FAMILIES:
            raise ValueError(f"family must be one of {FAMILIES}, got {self.family!r}")

    def with_weights(self, weights: np.ndarray) -> "PolicyParameters":
        return replace(self, weights=np.asarray(weights, dtype=float))


@dataclass(frozen=True)
class ActionSample:
    """One draw from the policy: raw sample, its projection, and log f(raw)."""

    raw: np.ndarray
    projected: np.ndarray
    log_density: float


def init_policy(
    spec: ApproximatorSpec,
    sigma: float,
    family: str,
    rng: np.random.Generator,
) -> PolicyParameters:
    return PolicyParameters(spec=spec, weights=init_weights(spec, rng), sigma=sigma, family=family)


def forward_mean(params: PolicyParameters, obs: np.ndarray) -> np.ndarray:
    """Location parameter mu(s) per action dimension; deterministic."""
    return forward(params.spec, params.weights, obs)


def project_action(raw: np.ndarray, delta: float) -> np.ndarray:
    """Project onto the infinity-norm ball: component-wise clamp to [-delta, delta]."""
    if not delta > 0:
        raise ValueError(f"delta must be positive, got {delta}")
    return np.clip(np.asarray(raw, dtype=float), -delta, delta)


def sample_action(
    params: PolicyParameters,
    obs: np.ndarray,
    rng: np.random.Generator,
    delta: float = 1.0,
) -> ActionSample:
    """Draw one action, project it, and report the raw sample's log-density.

    Cauchy sampling uses the inverse CDF (tangent transform) so the draw
    is an exact deterministic function of the uniform stream.
    """
    mu = forward_mean(params, obs)
    if params.family == "cauchy":
        u = rng.random(mu.shape[0])
        raw = mu + params.sigma * np.tan(np.pi * (u - 0.5))
    else:
        raw = mu + params.sigma * rng.standard_normal(mu.shape[0])
    projected = project_action(raw, delta)
    logp = _log_density_at(params, mu, raw)
    return ActionSample(raw=raw, projected=projected, log_density=float(logp))


def log_density(params: PolicyParameters, obs: np.ndarray, action: np.ndarray) -> float:
    """Log-density of a raw action under the policy, summed over dimensions."""
    mu = forward_mean(params, obs)
    return float(_log_density_at(params, mu, np.asarray(action, dtype=float)))


def _log_density_at(params: PolicyParameters, mu: np.ndarray, action: np.ndarray) -> float:
    z = (action - mu) / params.sigma
    if params.family == "cauchy":
        per_dim = -np.log(np.pi * params.sigma) - np.log1p(z**2)
    else:
        per_dim = -0.5 * (LOG_2PI + 2.0 * np.log(params.sigma)) - 0.5 * z**2
    return per_dim.sum()


def dlogp_dmean(params: PolicyParameters, mu: np.ndarray, action: np.ndarray) -> np.ndarray:
    """d log pi / d mu, per action dimension (the density-side chain factor)."""
    diff = np.asarray(action, dtype=float) - mu
    if params.family == "cauchy":
        return 2.0 * diff / (params.sigma**2 + diff**2)
    return diff / params.sigma**2


def score(params: PolicyParameters, obs: np.ndarray, action: np.ndarray) -> np.ndarray:
    """Gradient of log pi(action | obs) with respect to the flat weights."""
    obs = np.asarray(obs, dtype=float)
    mu, acts = forward_batch(params.spec, params.weights, obs[None, :])
    dmu = dlogp_dmean(params, mu[0], action)
    return backward_batch(params.spec, params.weights, acts, dmu[None, :])


def weighted_score_sum(
    params: PolicyParameters,
    features: np.ndarray,
    actions: np.ndarray,
    coeffs: np.ndarray,
) -> np.ndarray:
    """sum_t coeffs[t] * score(params, features[t], actions[t]) in one batched pass.

    Exact by linearity of backpropagation; this is the workhorse of the
    trajectory gradient estimator.
    """
    features = np.asarray(features, dtype=float)
    actions = np.asarray(actions, dtype=float)
    coeffs = np.asarray(coeffs, dtype=float)
    mu, acts = forward_batch(params.spec, params.weights, features)
    dmu = dlogp_dmean(params, mu, actions) * coeffs[:, None]
    return backward_batch(params.spec, params.weights, acts, dmu)

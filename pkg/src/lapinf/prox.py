"""Sampling approximations of prox, Moreau envelope, projection and inf-convolution argmin."""

from dataclasses import dataclass

import numpy as np

from .core import ConfigError, DomainBox, as_generator
from .laplace import (
    DegenerateWeightsError,
    SampleBatch,
    importance_log_weights,
    self_normalized_mean,
)
from .samplers import GaussianProposal

__all__ = [
    "ProxConfig",
    "SetIndicator",
    "prox_laplace",
    "moreau_envelope_estimate",
    "project_laplace",
    "infconv_argmin",
]


@dataclass(frozen=True)
class ProxConfig:
    """Moreau level ``lam``, Laplace temperature ``delta``, sample count, stream.

    ``rng`` may be an :class:`~lapinf.core.RngStream` (replayed from its
    start on every call) or a numpy ``Generator`` (continues its state).
    """

    lam: float
    delta: float
    n_samples: int
    rng: object = 0

    def __post_init__(self):
        if not self.lam > 0:
            raise ConfigError(f"lam must be positive, got {self.lam!r}")
        if not self.delta > 0:
            raise ConfigError(f"delta must be positive, got {self.delta!r}")
        if int(self.n_samples) < 1:
            raise ConfigError(f"n_samples must be >= 1, got {self.n_samples!r}")


@dataclass(frozen=True)
class SetIndicator:
    """A set K given by a vectorized membership test over rows of points."""

    contains: object
    bounding_box: DomainBox = None

    def indicator(self, y):
        """I_K: 0 on K, +inf off K."""
        return np.where(self.contains(np.asarray(y, dtype=float)), 0.0, np.inf)

    @classmethod
    def ball(cls, center, radius=1.0):
        c = np.atleast_1d(np.asarray(center, dtype=float))
        box = DomainBox(c - radius, c + radius)
        return cls(lambda y: np.sum((y - c) ** 2, axis=-1) <= radius**2, box)

    @classmethod
    def orthant(cls, dim):
        return cls(lambda y: np.all(y >= 0, axis=-1))

    @classmethod
    def halfline(cls, lo=0.0):
        return cls(lambda y: y[..., 0] >= lo)


def _energy_logw(values, delta):
    values = np.asarray(values, dtype=float)
    if np.isnan(values).any():
        raise ValueError("objective returned NaN at a sample")
    with np.errstate(invalid="ignore"):
        return np.where(np.isposinf(values), -np.inf, -values / delta)


def prox_laplace(f, x, cfg):
    """Laplace approximation of ``prox_{lam f}(x)``.

    Draws ``Y_i ~ N(x, delta*lam*I)`` and returns their average weighted by
    ``softmax(-f(Y_i)/delta)``.
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    ys = GaussianProposal(x, cfg.delta * cfg.lam).sample(int(cfg.n_samples), as_generator(cfg.rng))
    logw = _energy_logw(f(ys), cfg.delta)
    if not np.isfinite(logw).any():
        raise DegenerateWeightsError("degenerate weights: every sample has f = +inf")
    return self_normalized_mean(SampleBatch(ys, logw))


def moreau_envelope_estimate(f, x, cfg):
    """Plug-in Moreau envelope ``f(y) + ||x - y||^2 / (2 lam)`` at ``y = prox_laplace``."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    y = prox_laplace(f, x, cfg).point
    return float(f(y)) + float(np.sum((x - y) ** 2)) / (2.0 * cfg.lam)


def project_laplace(K, x, delta, n_samples, rng):
    """Smoothed projection: mean of ``Y ~ N(x, delta*I)`` conditioned on ``Y in K``.

    Samples outside K are rejected (weight zero), samples inside get equal
    weight.  ``n_nonzero`` on the result is the retained count.  For convex K
    the result always lies in K.
    """
    if not delta > 0:
        raise ConfigError(f"delta must be positive, got {delta!r}")
    x = np.atleast_1d(np.asarray(x, dtype=float))
    ys = GaussianProposal(x, delta).sample(int(n_samples), as_generator(rng))
    inside = np.asarray(K.contains(ys), dtype=bool)
    n_kept = int(inside.sum())
    if n_kept == 0:
        raise DegenerateWeightsError(
            f"degenerate weights: 0 of {n_samples} samples landed in K", n_kept=0
        )
    logw = np.where(inside, 0.0, -np.inf)
    return self_normalized_mean(SampleBatch(ys, logw))


def infconv_argmin(f, g, x, delta, proposal, n_samples, rng):
    """Importance-sampled Laplace estimate of ``argmin_y f(y) + g(x - y)``.

    When the argmin is not unique the result is the weighted barycenter of
    the near-optimal samples; only the envelope value ``f(y) + g(x - y)`` at
    that point is meaningful then.
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    ys = proposal.sample(int(n_samples), as_generator(rng))
    logw = importance_log_weights(f, g, x, delta, ys, proposal.logpdf)
    return self_normalized_mean(SampleBatch(ys, logw))

"""Self-normalized Laplace / importance-sampling estimator.

Every exponentially weighted average in the package goes through
:func:`stable_softmax` or :func:`self_normalized_mean`, which shift the
log-weights by their maximum before exponentiating.
"""

from dataclasses import dataclass

import numpy as np

from . import _kernels

__all__ = [
    "DegenerateWeightsError",
    "ProposalSupportError",
    "SampleBatch",
    "LaplaceEstimate",
    "stable_softmax",
    "self_normalized_mean",
    "importance_log_weights",
]


class DegenerateWeightsError(ArithmeticError):
    """Every sample received weight zero (all log-weights are -inf)."""

    def __init__(self, message="degenerate weights", n_kept=0, coordinate=None):
        super().__init__(message)
        self.n_kept = n_kept
        self.coordinate = coordinate


class ProposalSupportError(ValueError):
    """A sample fell where the proposal log-density is not finite."""


def _check_logw(v):
    v = np.asarray(v, dtype=float)
    if v.ndim != 1 or v.size == 0:
        raise ValueError("log-weights must be a non-empty 1-d array")
    if np.isnan(v).any() or np.isposinf(v).any():
        raise ValueError("log-weights must be finite or -inf")
    if not np.isfinite(v).any():
        raise DegenerateWeightsError()
    return v


def stable_softmax(v):
    """Softmax of ``v`` computed as ``exp(v - max v) / sum(exp(v - max v))``.

    Entries equal to ``-inf`` get weight exactly zero.  Raises
    :class:`DegenerateWeightsError` when no entry is finite.
    """
    v = _check_logw(v)
    w = np.exp(v - v.max())
    return w / w.sum()


@dataclass(frozen=True)
class SampleBatch:
    """Sample points (N, d) together with their unnormalized log-weights."""

    points: np.ndarray
    logw: np.ndarray

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim == 1:
            pts = pts[:, None]
        logw = _check_logw(self.logw)
        if pts.shape[0] != logw.size:
            raise ValueError(f"{pts.shape[0]} points but {logw.size} log-weights")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "logw", logw)

    def __len__(self):
        return self.logw.size


@dataclass(frozen=True)
class LaplaceEstimate:
    """Weighted-average point plus weight diagnostics.

    ``ess`` is ``1 / sum(w_i^2)`` for the normalized weights, ``n_nonzero``
    counts samples with positive weight, and ``stderr`` is the delta-method
    standard error of the ratio estimate, per coordinate.
    """

    point: np.ndarray
    ess: float
    max_logw: float
    n_nonzero: int
    stderr: np.ndarray

    @property
    def starved(self):
        return self.ess < 2.0


def self_normalized_mean(batch, h=None):
    """Weighted mean ``sum_i w_i h(Y_i)`` with ``w = stable_softmax(logw)``.

    ``h`` maps an (N, d) array of points to an (N, k) or (N,) array; the
    default is the identity, giving the estimate of the argmin itself.
    """
    values = batch.points if h is None else np.asarray(h(batch.points), dtype=float)
    if values.ndim == 1:
        values = values[:, None]
    values = np.ascontiguousarray(values, dtype=float)
    mean, stderr, sum_w2, a, nonzero = _kernels.softmax_mean(values, batch.logw)
    return LaplaceEstimate(
        point=np.asarray(mean),
        ess=1.0 / sum_w2,
        max_logw=float(a),
        n_nonzero=int(nonzero),
        stderr=np.asarray(stderr),
    )


def importance_log_weights(f, g, x, delta, points, proposal_logpdf):
    """Log-weights ``(-f(Y) - g(x - Y)) / delta - log q(Y)``.

    The normalizing constant of the tilted target is dropped; it cancels in
    the self-normalized ratio.  ``g=None`` means ``g = 0``.  Samples where
    ``f`` or ``g`` is ``+inf`` get log-weight ``-inf``.
    """
    if not delta > 0:
        raise ValueError(f"delta must be positive, got {delta!r}")
    points = np.asarray(points, dtype=float)
    if points.ndim == 1:
        points = points[:, None]
    logq = np.asarray(proposal_logpdf(points), dtype=float)
    bad = ~np.isfinite(logq)
    if bad.any():
        i = int(np.flatnonzero(bad)[0])
        raise ProposalSupportError(
            f"proposal support violation: log q = {logq[i]} at sample {i}"
        )
    energy = np.asarray(f(points), dtype=float)
    if g is not None:
        energy = energy + np.asarray(g(np.asarray(x, dtype=float) - points), dtype=float)
    if np.isnan(energy).any():
        raise ValueError("objective returned NaN inside the sampled region")
    with np.errstate(invalid="ignore"):
        logw = np.where(np.isposinf(energy), -np.inf, -energy / delta - logq)
    return logw

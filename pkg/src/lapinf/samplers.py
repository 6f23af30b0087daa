"""Proposal distributions: draws and exact log-densities."""

from dataclasses import dataclass

import numpy as np

from .core import ConfigError, DomainBox, as_generator

__all__ = [
    "GaussianProposal",
    "ProductLaplaceProposal",
    "UniformBoxProposal",
    "ExponentialProposal",
    "sample",
    "logpdf",
]

_LOG_2PI = np.log(2.0 * np.pi)


def _vec(a, name):
    a = np.atleast_1d(np.asarray(a, dtype=float))
    if a.ndim != 1:
        raise ConfigError(f"{name} must be a vector")
    return a


@dataclass(frozen=True)
class GaussianProposal:
    """Isotropic normal ``N(mean, var * I)``; ``var`` is delta * lambda for prox."""

    mean: np.ndarray
    var: float

    def __post_init__(self):
        object.__setattr__(self, "mean", _vec(self.mean, "mean"))
        if not self.var > 0:
            raise ConfigError(f"variance must be positive, got {self.var!r}")

    @property
    def dim(self):
        return self.mean.size

    def sample(self, n, rng):
        z = as_generator(rng).standard_normal((n, self.dim))
        return self.mean + np.sqrt(self.var) * z

    def logpdf(self, y):
        r = np.asarray(y, dtype=float) - self.mean
        return -0.5 * np.sum(r * r, axis=-1) / self.var - 0.5 * self.dim * (_LOG_2PI + np.log(self.var))


@dataclass(frozen=True)
class ProductLaplaceProposal:
    """Product of Laplace densities ``exp(-|y_i - c_i| / scale) / (2 scale)``.

    This is the tilted density for ``g = ||.||_1`` with ``scale = delta``.
    """

    center: np.ndarray
    scale: float

    def __post_init__(self):
        object.__setattr__(self, "center", _vec(self.center, "center"))
        if not self.scale > 0:
            raise ConfigError(f"scale must be positive, got {self.scale!r}")

    @property
    def dim(self):
        return self.center.size

    def sample(self, n, rng):
        return as_generator(rng).laplace(self.center, self.scale, size=(n, self.dim))

    def logpdf(self, y):
        r = np.abs(np.asarray(y, dtype=float) - self.center)
        return -np.sum(r, axis=-1) / self.scale - self.dim * np.log(2.0 * self.scale)


@dataclass(frozen=True)
class UniformBoxProposal:
    box: DomainBox

    @property
    def dim(self):
        return self.box.dim

    def sample(self, n, rng):
        u = as_generator(rng).random((n, self.dim))
        return self.box.lo + (self.box.hi - self.box.lo) * u

    def logpdf(self, y):
        inside = self.box.contains(y)
        return np.where(inside, -np.log(self.box.volume), -np.inf)


@dataclass(frozen=True)
class ExponentialProposal:
    """Product exponential on the positive orthant, optionally truncated.

    With ``upper`` set, each coordinate is restricted to ``[0, upper]`` and
    renormalized.
    """

    rate: np.ndarray
    upper: float = None

    def __post_init__(self):
        rate = _vec(self.rate, "rate")
        if not np.all(rate > 0):
            raise ConfigError(f"rates must be positive, got {rate}")
        if self.upper is not None and not self.upper > 0:
            raise ConfigError(f"upper must be positive, got {self.upper!r}")
        object.__setattr__(self, "rate", rate)

    @property
    def dim(self):
        return self.rate.size

    def _log_mass(self):
        if self.upper is None:
            return np.zeros_like(self.rate)
        return np.log(-np.expm1(-self.rate * self.upper))

    def sample(self, n, rng):
        u = as_generator(rng).random((n, self.dim))
        mass = np.exp(self._log_mass())
        # inverse CDF of the (truncated) exponential
        return -np.log1p(-u * mass) / self.rate

    def logpdf(self, y):
        y = np.asarray(y, dtype=float)
        inside = np.all(y >= 0, axis=-1)
        if self.upper is not None:
            inside &= np.all(y <= self.upper, axis=-1)
        val = np.sum(np.log(self.rate) - self._log_mass() - self.rate * y, axis=-1)
        return np.where(inside, val, -np.inf)


def sample(spec, n, rng):
    """Draw ``n`` i.i.d. points (shape ``(n, d)``) from ``spec``."""
    if int(n) < 1:
        raise ConfigError(f"need at least one sample, got n={n!r}")
    return spec.sample(int(n), rng)


def logpdf(spec, y):
    """Exact log-density of ``spec`` at ``y`` (``-inf`` outside the support)."""
    return spec.logpdf(y)

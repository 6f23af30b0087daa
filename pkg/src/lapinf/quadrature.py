"""Deterministic tensor-grid quadrature of self-normalized Laplace ratios (d <= 2).

This is the ground truth the Monte Carlo estimators are checked against.
"""

from dataclasses import dataclass

import numpy as np

from .core import ConfigError, DomainBox

__all__ = ["QuadConfig", "QuadratureError", "quad_self_normalized", "quad_infconv_argmin"]


class QuadratureError(RuntimeError):
    """Grid refinement hit its limit before successive ratios agreed."""

    def __init__(self, message, last, previous):
        super().__init__(message)
        self.last = last
        self.previous = previous


@dataclass(frozen=True)
class QuadConfig:
    """Grid settings for :func:`quad_self_normalized`.

    ``points_per_dim`` counts intervals per axis (nodes = intervals + 1), so
    it must be even for Simpson.  Refinement doubles it until two successive
    ratios agree to ``tol`` and the peak covers at least
    ``min_effective_nodes`` grid nodes; set that to 0 when the peak is known
    to be narrower than any affordable grid.  ``refine=False`` evaluates the
    starting grid only.
    """

    domain: DomainBox
    points_per_dim: int = 64
    rule: str = "simpson"
    tol: float = 1e-9
    max_points_per_dim: int = 2**20
    min_effective_nodes: float = 4.0
    refine: bool = True

    def __post_init__(self):
        if self.domain.dim > 2:
            raise ConfigError("quadrature oracle supports d <= 2 only")
        if self.points_per_dim < 64:
            raise ConfigError(f"points_per_dim must be >= 64, got {self.points_per_dim}")
        if self.rule not in ("trapezoid", "simpson"):
            raise ConfigError(f"unknown rule {self.rule!r}")
        if self.rule == "simpson" and self.points_per_dim % 2:
            raise ConfigError("simpson needs an even number of intervals")


def _rule_weights(n, a, b, rule):
    h = (b - a) / n
    if rule == "trapezoid":
        w = np.full(n + 1, h)
        w[0] = w[-1] = h / 2
    else:
        w = np.empty(n + 1)
        w[1:-1:2] = 4.0
        w[2:-1:2] = 2.0
        w[0] = w[-1] = 1.0
        w *= h / 3
    return np.linspace(a, b, n + 1), w


def _grid(cfg, n):
    dom = cfg.domain
    axes = [_rule_weights(n, dom.lo[k], dom.hi[k], cfg.rule) for k in range(dom.dim)]
    if dom.dim == 1:
        nodes, w = axes[0]
        return nodes[:, None], w
    (x0, w0), (x1, w1) = axes
    g0, g1 = np.meshgrid(x0, x1, indexing="ij")
    return np.column_stack([g0.ravel(), g1.ravel()]), np.outer(w0, w1).ravel()


def _ratio(phi, h, delta, nodes, qw):
    vals = np.asarray(phi(nodes), dtype=float)
    if np.isnan(vals).any():
        raise ValueError("phi returned NaN on the quadrature grid")
    finite = np.isfinite(vals)
    if not finite.any():
        raise ValueError("phi is infinite on the whole grid")
    phi_min = vals[finite].min()
    with np.errstate(invalid="ignore"):
        e = np.where(finite, np.exp(-(vals - phi_min) / delta), 0.0)
    mass = qw * e
    hv = nodes if h is None else np.asarray(h(nodes), dtype=float)
    if hv.ndim == 1:
        hv = hv[:, None]
    z = mass.sum()
    if not z > 0:
        raise ValueError("all quadrature weights vanished")
    ratio = (mass[:, None] * hv).sum(axis=0) / z
    eff = z * z / np.dot(mass, mass)
    return ratio, eff


def quad_self_normalized(phi, h, delta, cfg):
    """Ratio of grid quadratures of ``h * exp(-phi/delta)`` and ``exp(-phi/delta)``.

    ``phi`` and ``h`` act on arrays of grid points with shape (M, d); pass
    ``h=None`` for the identity.  ``phi`` is shifted by its grid minimum
    before exponentiating, and ``+inf`` values contribute nothing.
    """
    if not delta > 0:
        raise ValueError(f"delta must be positive, got {delta!r}")
    n = cfg.points_per_dim
    nodes, qw = _grid(cfg, n)
    prev, _ = _ratio(phi, h, delta, nodes, qw)
    if not cfg.refine:
        return prev
    before = None
    while True:
        n *= 2
        if n > cfg.max_points_per_dim:
            raise QuadratureError(
                f"no convergence up to {n // 2} points per dimension", prev, before
            )
        nodes, qw = _grid(cfg, n)
        cur, eff = _ratio(phi, h, delta, nodes, qw)
        if np.max(np.abs(cur - prev)) < cfg.tol and eff >= cfg.min_effective_nodes:
            return cur
        before, prev = prev, cur


def quad_infconv_argmin(f, g, x, delta, cfg):
    """Quadrature value of the Laplace argmin of ``y -> f(y) + g(x - y)``."""
    x = np.atleast_1d(np.asarray(x, dtype=float))

    def phi(y):
        return np.asarray(f(y), dtype=float) + np.asarray(g(x - y), dtype=float)

    return quad_self_normalized(phi, None, delta, cfg)

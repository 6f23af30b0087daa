"""Benchmark criteria with global minimum 0 at the origin, plus analytic gradients.

Raw (unrotated, untransformed) BBOB-style definitions; rosenbrock and
weierstrass are shifted so the minimizer is the origin.
"""

from dataclasses import dataclass

import numpy as np

from .core import ConfigError

__all__ = ["NAMES", "BenchmarkFn", "benchmark", "gradient"]

NAMES = ("sphere", "ellipsoidal", "discus", "rosenbrock", "sharp_ridge", "weierstrass")

_WEIER_K = np.arange(12)
_WEIER_A = 0.5**_WEIER_K
_WEIER_B = 3.0**_WEIER_K
_WEIER_OFFSET = _WEIER_A.sum()  # cos(pi * 3^k) = -1 at the origin


def _ellipsoid_scales(d):
    if d == 1:
        return np.ones(1)
    return 10.0 ** (6.0 * np.arange(d) / (d - 1))


def _sphere(x):
    return np.sum(x * x, axis=-1)


def _sphere_grad(x):
    return 2.0 * x


def _ellipsoidal(x):
    return np.sum(_ellipsoid_scales(x.shape[-1]) * x * x, axis=-1)


def _ellipsoidal_grad(x):
    return 2.0 * _ellipsoid_scales(x.shape[-1]) * x


def _discus(x):
    return 1e6 * x[..., 0] ** 2 + np.sum(x[..., 1:] ** 2, axis=-1)


def _discus_grad(x):
    g = 2.0 * x
    g[..., 0] *= 1e6
    return g


def _rosenbrock(x):
    z = x + 1.0
    r = z[..., :-1] ** 2 - z[..., 1:]
    return np.sum(100.0 * r * r + x[..., :-1] ** 2, axis=-1)


def _rosenbrock_grad(x):
    z = x + 1.0
    r = z[..., :-1] ** 2 - z[..., 1:]
    g = np.zeros_like(x)
    g[..., :-1] += 400.0 * r * z[..., :-1] + 2.0 * x[..., :-1]
    g[..., 1:] -= 200.0 * r
    return g


def _sharp_ridge(x):
    return x[..., 0] ** 2 + 100.0 * np.sqrt(np.sum(x[..., 1:] ** 2, axis=-1))


def _sharp_ridge_grad(x):
    g = np.zeros_like(x)
    g[..., 0] = 2.0 * x[..., 0]
    norm = np.sqrt(np.sum(x[..., 1:] ** 2, axis=-1, keepdims=True))
    # subgradient 0 for the ridge term on the ridge itself
    safe = np.where(norm > 0, norm, 1.0)
    g[..., 1:] = np.where(norm > 0, 100.0 * x[..., 1:] / safe, 0.0)
    return g


def _weierstrass(x):
    arg = 2.0 * np.pi * np.multiply.outer(x + 0.5, _WEIER_B)
    per_coord = np.cos(arg) @ _WEIER_A
    return np.mean(per_coord, axis=-1) + _WEIER_OFFSET


def _weierstrass_grad(x):
    arg = 2.0 * np.pi * np.multiply.outer(x + 0.5, _WEIER_B)
    dcoord = -np.sin(arg) @ (2.0 * np.pi * _WEIER_A * _WEIER_B)
    return dcoord / x.shape[-1]


_TABLE = {
    "sphere": (_sphere, _sphere_grad),
    "ellipsoidal": (_ellipsoidal, _ellipsoidal_grad),
    "discus": (_discus, _discus_grad),
    "rosenbrock": (_rosenbrock, _rosenbrock_grad),
    "sharp_ridge": (_sharp_ridge, _sharp_ridge_grad),
    "weierstrass": (_weierstrass, _weierstrass_grad),
}


@dataclass(frozen=True)
class BenchmarkFn:
    name: str
    dim: int = 10

    def __call__(self, x):
        return _TABLE[self.name][0](np.asarray(x, dtype=float))

    def grad(self, x):
        return _TABLE[self.name][1](np.array(x, dtype=float))


def benchmark(name, dim=10):
    """Return the named benchmark criterion in ``dim`` dimensions."""
    if name not in _TABLE:
        raise ConfigError(f"unknown benchmark {name!r}; choose from {', '.join(NAMES)}")
    if name == "rosenbrock" and dim < 2:
        raise ConfigError("rosenbrock needs dim >= 2")
    return BenchmarkFn(name, int(dim))


def gradient(name, x):
    """Analytic gradient (subgradient on the sharp-ridge crease)."""
    if name not in _TABLE:
        raise ConfigError(f"unknown benchmark {name!r}")
    return _TABLE[name][1](np.array(x, dtype=float))

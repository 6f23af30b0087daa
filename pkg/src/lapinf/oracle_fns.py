"""One-dimensional test functions for the quadrature convergence checks.

Each entry of :data:`FUNCTIONS` pairs a vectorized ``phi`` (acting on rows
of shape (M, 1)) with the interval it is studied on.
"""

import numpy as np

__all__ = ["wavy", "abs_sqrt", "weierstrass_series", "FUNCTIONS", "grid_argmin", "GridMemo"]


def wavy(y):
    """``9/40 + (x-1)^4/20 + sin(10 pi x) / (40 x)``; defined for x > 0."""
    x = np.asarray(y, dtype=float)[..., 0]
    return 9 / 40 + (x - 1.0) ** 4 / 20 + np.sin(10 * np.pi * x) / (40 * x)


def abs_sqrt(y):
    return np.sqrt(np.abs(np.asarray(y, dtype=float)[..., 0]))


_WS_A = 0.3 ** np.arange(101)
_WS_B = 23.0 ** np.arange(101)


def weierstrass_series(y):
    """``sum_{k<=100} 0.3^k cos(23^k pi x)``.

    The argument is reduced mod 2 before the cosine.  Once ``23^k x`` is
    past 2^53 the float product is an even integer and the term is just
    ``0.3^k``, which is what exact arithmetic cannot give us anyway.
    """
    x = np.asarray(y, dtype=float)[..., 0]
    out = np.zeros_like(x)
    for a, b in zip(_WS_A, _WS_B):
        out += a * np.cos(np.pi * np.mod(b * x, 2.0))
    return out


FUNCTIONS = {
    "wavy": (wavy, (0.2, 2.5)),
    "abs_sqrt": (abs_sqrt, (-1.0, 1.0)),
    "weierstrass_series": (weierstrass_series, (-0.5, 0.5)),
}


def grid_argmin(phi, lo, hi, n_intervals=10**6):
    """Brute-force minimizer of ``phi`` over ``n_intervals + 1`` equispaced nodes.

    Returns ``(argmin, spacing)``.  Ties go to the leftmost node.
    """
    nodes = np.linspace(lo, hi, int(n_intervals) + 1)
    vals = np.asarray(phi(nodes[:, None]), dtype=float)
    return float(nodes[np.argmin(vals)]), (hi - lo) / int(n_intervals)


class GridMemo:
    """Remember ``phi`` on the last grid it saw.

    Lets a sweep over several deltas on one fixed grid evaluate an
    expensive ``phi`` once.
    """

    def __init__(self, phi):
        self.phi = phi
        self._key = None
        self._vals = None

    def __call__(self, nodes):
        nodes = np.asarray(nodes, dtype=float)
        key = (nodes.shape, hash(nodes.tobytes()))
        if key != self._key:
            self._key, self._vals = key, np.asarray(self.phi(nodes), dtype=float)
        return self._vals

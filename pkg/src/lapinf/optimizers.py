"""Zeroth-order loops: Laplace proximal point (LPP), RGF, and noisy gradient descent.

All loops record an :class:`OptTrace`.  Evaluation accounting: an LPP step
costs N evaluations, an RGF step N + 1, a GD step one gradient call.
"""

import itertools
import time
from dataclasses import dataclass, field, replace

import numpy as np

from .core import ConfigError, ObjectiveFn, RngStream, as_generator
from .laplace import DegenerateWeightsError
from .prox import ProxConfig, prox_laplace

__all__ = [
    "OptConfig",
    "OptTrace",
    "lpp_step",
    "rgf_step",
    "rgf_direction",
    "gd_run",
    "run",
    "run_repeated",
    "tune_grid",
    "tune_repeated",
    "ALGORITHMS",
]

ALGORITHMS = ("lpp", "rgf", "gd")
DIVERGENCE_NORM = 1e8


@dataclass(frozen=True)
class OptConfig:
    x0: np.ndarray
    max_iters: int = 100
    lam: float = 1.0
    delta: float = 1e-2
    n_samples: int = 100
    eta: float = 1e-2
    noise_sd: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "x0", np.atleast_1d(np.asarray(self.x0, dtype=float)))
        if self.max_iters < 0:
            raise ConfigError("max_iters must be >= 0")
        for name in ("lam", "delta"):
            if not getattr(self, name) > 0:
                raise ConfigError(f"{name} must be positive, got {getattr(self, name)!r}")
        if self.eta < 0 or self.noise_sd < 0:
            raise ConfigError("eta and noise_sd must be nonnegative")
        if int(self.n_samples) < 1:
            raise ConfigError("n_samples must be >= 1")


@dataclass
class OptTrace:
    """Iterates, criterion values, cumulative evaluations and wall time per iteration.

    Entry 0 is the starting point.  ``status`` is ``"ok"``, ``"diverged"``
    (norm guard tripped) or ``"degenerate"`` (all Laplace weights vanished);
    in the latter two cases the trace stops at the last good iterate.
    """

    iterates: list = field(default_factory=list)
    values: list = field(default_factory=list)
    evals: list = field(default_factory=list)
    wall_time: list = field(default_factory=list)
    seed: object = None
    config: object = None
    status: str = "ok"

    def record(self, x, value, evals, t):
        self.iterates.append(np.array(x, dtype=float))
        self.values.append(float(value))
        self.evals.append(int(evals))
        self.wall_time.append(float(t))

    @property
    def final_value(self):
        if self.status != "ok" or not self.values:
            return np.inf
        return self.values[-1]

    def __len__(self):
        return len(self.values)


def _counted(f, dim):
    return f if isinstance(f, ObjectiveFn) else ObjectiveFn(f, dim)


def lpp_step(f, x_prev, cfg, rng):
    """One Laplace proximal point update ``x <- laplace-prox_{lam f}(x)``."""
    pc = ProxConfig(cfg.lam, cfg.delta, cfg.n_samples, rng)
    return prox_laplace(f, x_prev, pc).point


def rgf_direction(f, x_prev, delta, n_samples, rng, return_terms=False):
    """Gaussian-smoothing gradient estimate with ``Y_i ~ N(x, delta I)``.

    Averages ``(f(Y_i) - f(x)) / delta * (Y_i - x)``; the direction vector
    ``Y_i - x`` is what makes this an estimate of the smoothed gradient.
    """
    x_prev = np.asarray(x_prev, dtype=float)
    gen = as_generator(rng)
    u = np.sqrt(delta) * gen.standard_normal((int(n_samples), x_prev.size))
    fx = float(f(x_prev))
    terms = ((np.asarray(f(x_prev + u), dtype=float) - fx) / delta)[:, None] * u
    g = terms.mean(axis=0)
    return (g, terms) if return_terms else g


def rgf_step(f, x_prev, cfg, rng):
    """One random gradient-free oracle step ``x <- x - eta * g_hat``."""
    return np.asarray(x_prev, dtype=float) - cfg.eta * rgf_direction(
        f, x_prev, cfg.delta, cfg.n_samples, rng
    )


def gd_run(f, grad_f, cfg, rng):
    """Gradient descent with optional Gaussian gradient noise of sd ``noise_sd``."""
    gen = as_generator(rng)
    f = _counted(f, cfg.x0.size)
    trace = OptTrace(seed=rng if isinstance(rng, RngStream) else None, config=cfg)
    x = cfg.x0.copy()
    t0 = time.perf_counter()
    trace.record(x, f.peek(x), 0, 0.0)
    for k in range(1, cfg.max_iters + 1):
        g = np.asarray(grad_f(x), dtype=float)
        if cfg.noise_sd > 0:
            g = g + cfg.noise_sd * gen.standard_normal(x.size)
        x = x - cfg.eta * g
        if not np.all(np.isfinite(x)) or np.linalg.norm(x) > DIVERGENCE_NORM:
            trace.status = "diverged"
            break
        trace.record(x, f.peek(x), k, time.perf_counter() - t0)
    return trace


def run(algorithm, f, cfg, rng, grad_f=None):
    """Run ``algorithm`` ("lpp", "rgf" or "gd") for ``cfg.max_iters`` iterations."""
    if algorithm == "gd":
        if grad_f is None:
            grad_f = getattr(f, "grad", None)
        if grad_f is None:
            raise ConfigError("gd needs a gradient")
        return gd_run(f, grad_f, cfg, rng)
    if algorithm not in ALGORITHMS:
        raise ConfigError(f"unknown algorithm {algorithm!r}")
    step = lpp_step if algorithm == "lpp" else rgf_step
    gen = as_generator(rng)
    f = _counted(f, cfg.x0.size)
    start = f.eval_count
    trace = OptTrace(seed=rng if isinstance(rng, RngStream) else None, config=cfg)
    x = cfg.x0.copy()
    t0 = time.perf_counter()
    trace.record(x, f.peek(x), 0, 0.0)
    for _ in range(cfg.max_iters):
        try:
            x = step(f, x, cfg, gen)
        except DegenerateWeightsError:
            trace.status = "degenerate"
            break
        if not np.all(np.isfinite(x)) or np.linalg.norm(x) > DIVERGENCE_NORM:
            trace.status = "diverged"
            break
        trace.record(x, f.peek(x), f.eval_count - start, time.perf_counter() - t0)
    return trace


def run_repeated(algorithm, f, cfg, rng, reps=3, grad_f=None):
    """Run ``reps`` independent repetitions (streams ``rng.child(r)``).

    Returns the list of traces and the per-iteration mean criterion value
    (``inf`` past the end of any trace that stopped early).
    """
    if not isinstance(rng, RngStream):
        raise ConfigError("run_repeated needs an RngStream to derive repetition streams")
    traces = [run(algorithm, f, cfg, rng.child(r), grad_f=grad_f) for r in range(reps)]
    length = cfg.max_iters + 1
    vals = np.full((reps, length), np.inf)
    for r, tr in enumerate(traces):
        vals[r, : len(tr.values)] = tr.values
    return traces, vals.mean(axis=0)


def tune_grid(algorithm, f, grids, budget_iters, rng, base_cfg, grad_f=None):
    """Run every combination in ``grids`` and return the best trace.

    ``grids`` maps OptConfig field names to value lists, combined in
    Cartesian-product order.  Every combination replays the same stream.
    The best trace has the smallest final value; ties go to the earliest
    combination.  Returns ``(best_trace, best_params, all_results)``.
    """
    if not grids or any(len(v) == 0 for v in grids.values()):
        raise ConfigError("tuning grid must be non-empty")
    names = list(grids)
    best, best_params, results = None, None, []
    for combo in itertools.product(*(grids[n] for n in names)):
        params = dict(zip(names, combo))
        cfg = replace(base_cfg, max_iters=budget_iters, **params)
        trace = run(algorithm, f, cfg, rng, grad_f=grad_f)
        results.append((params, trace))
        if best is None or trace.final_value < best.final_value:
            best, best_params = trace, params
    return best, best_params, results


def tune_repeated(algorithm, f, base_cfg, grids, rng, reps=3, grad_f=None):
    """Grid tuning on the mean final value over ``reps`` repetitions.

    Every combination runs :func:`run_repeated` on the same ``rng``; the
    winner has the smallest mean final value, ties going to the earliest
    combination.  Returns ``(best_params, traces, mean_values)``.
    """
    if not grids or any(len(v) == 0 for v in grids.values()):
        raise ConfigError("tuning grid must be non-empty")
    names = list(grids)
    best = None
    for combo in itertools.product(*(grids[n] for n in names)):
        params = dict(zip(names, combo))
        cfg = replace(base_cfg, **params)
        traces, mean = run_repeated(algorithm, f, cfg, rng, reps=reps, grad_f=grad_f)
        if best is None or mean[-1] < best[2][-1]:
            best = (params, traces, mean)
    return best

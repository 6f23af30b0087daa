"""Hamilton-Jacobi solutions through the Laplace-approximated Hopf-Lax formula.

For ``H = ||.||_p^p / p`` the Hopf-Lax solution is the inf-convolution of
the initial data ``f`` with ``g_t(v) = t H*(v / t)``, ``H* = ||.||_q^q / q``.
The solution estimate plugs the importance-sampled argmin back in:
``u(x, t) = f(y) + g_t(y - x)``.  Residuals use central finite differences
on a fixed sample set, so every stencil point sees the same random numbers.
"""

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .core import ConfigError, DomainBox, RngStream, as_generator
from .laplace import DegenerateWeightsError
from .samplers import UniformBoxProposal

__all__ = [
    "HJConfig",
    "dual_exponent",
    "conjugate_g",
    "hamiltonian",
    "LaplaceHJSolution",
    "hj_solution",
    "finite_difference_residual",
    "hj_residual",
    "hj_sweep",
    "SWEEP_COLUMNS",
]

UNSTABLE_P = 1.1


def dual_exponent(p):
    if not p > 1:
        raise ConfigError(f"q undefined, require p > 1 (got p={p!r})")
    return p / (p - 1.0)


def conjugate_g(p, t, v):
    """``t * ||v / t||_q^q / q`` with ``1/p + 1/q = 1`` (rowwise over ``v``)."""
    q = dual_exponent(p)
    v = np.asarray(v, dtype=float)
    t = np.asarray(t, dtype=float)
    if np.any(t <= 0):
        raise ValueError("t must be positive")
    scaled = np.abs(v) / t[..., None] if t.ndim else np.abs(v) / t
    return t * np.sum(scaled**q, axis=-1) / q


def hamiltonian(p, w):
    return np.sum(np.abs(np.asarray(w, dtype=float)) ** p, axis=-1) / p


@dataclass(frozen=True)
class HJConfig:
    p: float = 2.0
    dim: int = 2
    delta: float = 1e-2
    n_samples: int = 10_000
    proposal_box: DomainBox = None
    n_eval_points: int = 1000
    t_range: tuple = (0.1, 1.0)
    fd_step: float = 1e-3

    def __post_init__(self):
        dual_exponent(self.p)
        if self.dim < 1:
            raise ConfigError("dim must be >= 1")
        if not self.delta > 0 or not self.fd_step > 0:
            raise ConfigError("delta and fd_step must be positive")
        if int(self.n_samples) < 1 or int(self.n_eval_points) < 1:
            raise ConfigError("n_samples and n_eval_points must be >= 1")
        lo, hi = self.t_range
        if not 0 < lo < hi:
            raise ConfigError(f"t_range must satisfy 0 < lo < hi, got {self.t_range}")
        if lo - self.fd_step <= 0:
            raise ConfigError("fd_step must be smaller than the lower end of t_range")
        if self.proposal_box is None:
            object.__setattr__(self, "proposal_box", DomainBox.cube(-10.0, 10.0, self.dim))
        elif self.proposal_box.dim != self.dim:
            raise ConfigError("proposal_box dimension does not match dim")

    @property
    def unstable(self):
        return self.p <= UNSTABLE_P


class LaplaceHJSolution:
    """``u(x, t)`` estimated from one fixed batch of uniform proposal samples.

    Call with ``X`` of shape (M, d) and ``T`` of shape (M,).  Because the
    sample batch is frozen at construction, the map is a deterministic
    smooth function of ``(x, t)``.
    """

    def __init__(self, f, cfg, rng, samples=None):
        self.f = f
        self.cfg = cfg
        self.q = dual_exponent(cfg.p)
        proposal = UniformBoxProposal(cfg.proposal_box)
        if samples is None:
            samples = proposal.sample(int(cfg.n_samples), as_generator(rng))
        self.samples = np.ascontiguousarray(samples, dtype=float)
        fy = np.asarray(f(self.samples), dtype=float)
        with np.errstate(invalid="ignore"):
            self.base_logw = np.where(
                np.isposinf(fy), -np.inf, -fy / cfg.delta - proposal.logpdf(self.samples)
            )
        if not np.isfinite(self.base_logw).any():
            raise DegenerateWeightsError("degenerate weights: f is +inf at every sample")

    def argmin(self, X, T):
        X = np.ascontiguousarray(np.atleast_2d(X), dtype=float)
        T = np.ascontiguousarray(np.broadcast_to(np.asarray(T, dtype=float), X.shape[:1]))
        return _kernels.conjugate_infconv_means(
            self.samples, self.base_logw, X, T, float(self.q), float(self.cfg.delta)
        )

    def __call__(self, X, T):
        X = np.atleast_2d(np.asarray(X, dtype=float))
        T = np.broadcast_to(np.asarray(T, dtype=float), X.shape[:1])
        Y = self.argmin(X, T)
        return np.asarray(self.f(Y), dtype=float) + conjugate_g(self.cfg.p, T, Y - X)


def hj_solution(f, x, t, cfg, rng):
    """Approximate Hopf-Lax value ``u(x, t)`` at a single point."""
    return float(LaplaceHJSolution(f, cfg, rng)(np.atleast_2d(x), np.atleast_1d(t))[0])


def finite_difference_residual(u, X, T, p, h):
    """``|du/dt + H(grad_x u)|`` by central differences of a vectorized ``u(X, T)``.

    All ``2d + 2`` stencil points for all M queries go through ``u`` in a
    single call.
    """
    X = np.atleast_2d(np.asarray(X, dtype=float))
    T = np.broadcast_to(np.asarray(T, dtype=float), X.shape[:1]).astype(float)
    m, d = X.shape
    eye = np.eye(d) * h
    xs = np.concatenate([X[:, None, :] + eye, X[:, None, :] - eye, X[:, None, :], X[:, None, :]], axis=1)
    ts = np.concatenate(
        [np.repeat(T[:, None], 2 * d, axis=1), (T + h)[:, None], (T - h)[:, None]], axis=1
    )
    vals = np.asarray(u(xs.reshape(-1, d), ts.ravel()), dtype=float).reshape(m, 2 * d + 2)
    grad = (vals[:, :d] - vals[:, d : 2 * d]) / (2 * h)
    dt = (vals[:, 2 * d] - vals[:, 2 * d + 1]) / (2 * h)
    return np.abs(dt + hamiltonian(p, grad))


def hj_residual(f, x, t, cfg, rng, solution=None):
    """HJ residual of the Laplace solution (or of ``solution`` if given) at (x, t).

    ``x`` may be one point or an (M, d) array with ``t`` of shape (M,).
    """
    u = solution if solution is not None else LaplaceHJSolution(f, cfg, rng)
    x = np.asarray(x, dtype=float)
    single = x.ndim == 1
    r = finite_difference_residual(u, np.atleast_2d(x), t, cfg.p, cfg.fd_step)
    return float(r[0]) if single else r


SWEEP_COLUMNS = (
    "p", "d", "delta", "N", "rep", "percentile20", "median", "percentile80",
    "mean", "missing_count", "unstable",
)


def _eval_points(cfg, gen):
    h = cfg.fd_step
    box = cfg.proposal_box.shrink(h)
    X = box.lo + (box.hi - box.lo) * gen.random((int(cfg.n_eval_points), cfg.dim))
    lo, hi = cfg.t_range
    T = (lo + h) + (hi - lo - 2 * h) * gen.random(int(cfg.n_eval_points))
    return X, T


def _summary(r):
    good = r[np.isfinite(r)]
    if good.size == 0:
        return dict(percentile20=np.nan, median=np.nan, percentile80=np.nan, mean=np.nan)
    p20, p50, p80 = np.percentile(good, [20, 50, 80])
    return dict(percentile20=p20, median=p50, percentile80=p80, mean=float(good.mean()))


def hj_sweep(f, cfg, delta_grid, n_grid, reps, rng, pooled=True):
    """Residual percentiles over a (delta, N) grid.

    Repetition ``r`` draws its evaluation points from ``rng.child(r).child(0)``
    and its proposal samples from ``rng.child(r).child(1)``; smaller N use a
    prefix of the largest batch, and all deltas share the same batch, so
    cells within a repetition are directly comparable.  Returns a list of
    row dicts keyed by :data:`SWEEP_COLUMNS`; with ``pooled`` an extra row
    per cell (``rep = "all"``) aggregates every repetition.
    """
    if not len(delta_grid) or not len(n_grid) or reps < 1:
        raise ConfigError("delta_grid and n_grid must be non-empty, reps >= 1")
    if not isinstance(rng, RngStream):
        raise ConfigError("hj_sweep needs an RngStream")
    n_max = int(max(n_grid))
    proposal = UniformBoxProposal(cfg.proposal_box)
    per_cell = {}
    rows = []
    for r in range(reps):
        X, T = _eval_points(cfg, rng.child(r).child(0).generator())
        batch = proposal.sample(n_max, rng.child(r).child(1).generator())
        for delta in delta_grid:
            for n in n_grid:
                ccfg = HJConfig(
                    p=cfg.p, dim=cfg.dim, delta=float(delta), n_samples=int(n),
                    proposal_box=cfg.proposal_box, n_eval_points=cfg.n_eval_points,
                    t_range=cfg.t_range, fd_step=cfg.fd_step,
                )
                try:
                    sol = LaplaceHJSolution(f, ccfg, None, samples=batch[: int(n)])
                    res = finite_difference_residual(sol, X, T, cfg.p, cfg.fd_step)
                except ArithmeticError:
                    res = np.full(X.shape[0], np.nan)
                per_cell.setdefault((float(delta), int(n)), []).append(res)
                rows.append(dict(
                    p=cfg.p, d=cfg.dim, delta=float(delta), N=int(n), rep=r,
                    missing_count=int(np.count_nonzero(~np.isfinite(res))),
                    unstable=int(cfg.unstable), **_summary(res),
                ))
    if pooled:
        for (delta, n), chunks in per_cell.items():
            res = np.concatenate(chunks)
            rows.append(dict(
                p=cfg.p, d=cfg.dim, delta=delta, N=n, rep="all",
                missing_count=int(np.count_nonzero(~np.isfinite(res))),
                unstable=int(cfg.unstable), **_summary(res),
            ))
    return rows

"""Shared types: counted objective functions, seeded random streams, boxes."""

import threading
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "ObjectiveFn",
    "with_counter",
    "RngStream",
    "as_generator",
    "DomainBox",
    "ConfigError",
]


class ConfigError(ValueError):
    """Invalid parameters passed to an estimator, sampler or experiment."""


class ObjectiveFn:
    """Real-valued function on R^d with an evaluation counter.

    ``func`` must be vectorized over leading axes: it receives an array of
    shape ``(..., dim)`` and returns the values with shape ``(...)``.  Each
    point evaluated adds one to ``eval_count``, so a single-point call counts
    1 and a batch of N rows counts N.  Characteristic functions return
    ``+inf`` outside their set.
    """

    def __init__(self, func, dim, name=None):
        if int(dim) < 1:
            raise ConfigError(f"dim must be positive, got {dim!r}")
        self.func = func
        self.dim = int(dim)
        self.name = name or getattr(func, "__name__", "f")
        self.eval_count = 0
        self._lock = threading.Lock()

    def __call__(self, y):
        y = np.asarray(y, dtype=float)
        values = self.func(y)
        n = int(np.prod(y.shape[:-1])) if y.ndim > 1 else 1
        with self._lock:
            self.eval_count += n
        return values

    def peek(self, y):
        """Evaluate without touching the counter (for logging traces)."""
        inner = self.func
        while isinstance(inner, ObjectiveFn):
            inner = inner.func
        return inner(np.asarray(y, dtype=float))

    def reset_count(self):
        with self._lock:
            self.eval_count = 0

    def __repr__(self):
        return f"ObjectiveFn({self.name}, dim={self.dim}, evals={self.eval_count})"


def with_counter(f, dim=None):
    """Wrap ``f`` (a plain callable or an ``ObjectiveFn``) in a fresh counter.

    Wrapping an ``ObjectiveFn`` keeps the inner counter live: one call on
    the wrapper increments both.
    """
    if isinstance(f, ObjectiveFn):
        return ObjectiveFn(f, f.dim if dim is None else dim, name=f.name)
    if dim is None:
        raise ConfigError("dim is required when wrapping a plain callable")
    return ObjectiveFn(f, dim)


@dataclass(frozen=True)
class RngStream:
    """Reproducible random stream keyed by ``(seed, stream_id)``.

    Uses the counter-based Philox bit generator, so draws are identical
    across platforms and independent of thread count.  ``generator()``
    always starts the stream from the beginning; ``child(k)`` derives an
    independent sub-stream (for chunks, repetitions, grid cells).
    """

    seed: int
    stream_id: int = 0
    path: tuple = field(default=(), compare=True)

    def seed_sequence(self):
        return np.random.SeedSequence(
            entropy=int(self.seed) % 2**64, spawn_key=(int(self.stream_id) % 2**64, *self.path)
        )

    def generator(self):
        return np.random.Generator(np.random.Philox(self.seed_sequence()))

    def child(self, k):
        return RngStream(self.seed, self.stream_id, (*self.path, int(k)))


def as_generator(rng):
    """Accept an ``RngStream``, a numpy ``Generator`` or an int seed."""
    if isinstance(rng, np.random.Generator):
        return rng
    if isinstance(rng, RngStream):
        return rng.generator()
    if isinstance(rng, (int, np.integer)):
        return RngStream(int(rng)).generator()
    raise TypeError(f"expected RngStream, Generator or int seed, got {type(rng).__name__}")


@dataclass(frozen=True)
class DomainBox:
    """Axis-aligned box ``[lo_1, hi_1] x ... x [lo_d, hi_d]``."""

    lo: np.ndarray
    hi: np.ndarray

    def __post_init__(self):
        lo = np.atleast_1d(np.asarray(self.lo, dtype=float))
        hi = np.atleast_1d(np.asarray(self.hi, dtype=float))
        if lo.shape != hi.shape or lo.ndim != 1:
            raise ConfigError("box bounds must be 1-d arrays of equal length")
        if not np.all(lo < hi):
            raise ConfigError(f"box requires lo < hi componentwise, got {lo} and {hi}")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @classmethod
    def cube(cls, lo, hi, dim):
        return cls(np.full(dim, float(lo)), np.full(dim, float(hi)))

    @property
    def dim(self):
        return self.lo.size

    @property
    def volume(self):
        return float(np.prod(self.hi - self.lo))

    def contains(self, y):
        y = np.asarray(y, dtype=float)
        return np.all((y >= self.lo) & (y <= self.hi), axis=-1)

    def shrink(self, margin):
        return DomainBox(self.lo + margin, self.hi - margin)

"""Hot inner loops, each with a numba and a numpy implementation.

The public names at the bottom are bound to one or the other according to
``lapinf._backend.USE_NUMBA``.  Both variants reduce samples in a fixed order
so results are reproducible for a given backend; they agree with each other
to rounding error, not bitwise.
"""

import numpy as np

from ._backend import USE_NUMBA, njit, prange

__all__ = ["softmax_mean", "conjugate_infconv_means", "numba_kernels", "numpy_kernels"]


# -- exponentially weighted mean of a sample batch ----------------------------

def _softmax_mean_np(points, logw):
    a = np.max(logw)
    w = np.exp(logw - a)
    s = w.sum()
    w /= s
    mean = (w[:, None] * points).sum(axis=0)
    sum_w2 = float(np.dot(w, w))
    var = (w[:, None] ** 2 * (points - mean) ** 2).sum(axis=0)
    nonzero = int(np.count_nonzero(w))
    return mean, np.sqrt(var), sum_w2, float(a), nonzero


@njit(cache=True)
def _softmax_mean_nb(points, logw):
    n, d = points.shape
    a = -np.inf
    for i in range(n):
        if logw[i] > a:
            a = logw[i]
    w = np.empty(n)
    s = 0.0
    for i in range(n):
        wi = np.exp(logw[i] - a)
        w[i] = wi
        s += wi
    mean = np.zeros(d)
    sum_w2 = 0.0
    nonzero = 0
    for i in range(n):
        wi = w[i] / s
        w[i] = wi
        if wi > 0.0:
            nonzero += 1
        sum_w2 += wi * wi
        for j in range(d):
            mean[j] += wi * points[i, j]
    var = np.zeros(d)
    for i in range(n):
        wi = w[i]
        if wi > 0.0:
            for j in range(d):
                r = points[i, j] - mean[j]
                var[j] += wi * wi * r * r
    return mean, np.sqrt(var), sum_w2, a, nonzero


# -- inf-convolution argmins with g = t * ||v / t||_q^q / q -------------------
#
# base_logw[i] carries the x-independent part of the log-weight
# (-f(Y_i)/delta - log q(Y_i)); for every query (X[m], T[m]) the kernel adds
# -g_t(X[m] - Y_i)/delta and returns the self-normalized mean of the samples.

def _conj_means_np(Y, base_logw, X, T, q, delta):
    m_total, d = X.shape
    out = np.empty((m_total, d))
    for m in range(m_total):
        t = T[m]
        v = np.abs(X[m] - Y) / t
        if q == 2.0:
            g = t * np.sum(v * v, axis=1) / 2.0
        else:
            g = t * np.sum(v**q, axis=1) / q
        lw = base_logw - g / delta
        a = np.max(lw)
        w = np.exp(lw - a)
        out[m] = (w[:, None] * Y).sum(axis=0) / w.sum()
    return out


@njit(cache=True, parallel=True)
def _conj_means_nb(Y, base_logw, X, T, q, delta):
    n, d = Y.shape
    m_total = X.shape[0]
    out = np.empty((m_total, d))
    for m in prange(m_total):
        t = T[m]
        lw = np.empty(n)
        a = -np.inf
        for i in range(n):
            g = 0.0
            for j in range(d):
                v = abs(X[m, j] - Y[i, j]) / t
                if q == 2.0:
                    g += v * v
                else:
                    g += v**q
            li = base_logw[i] - t * g / (q * delta)
            lw[i] = li
            if li > a:
                a = li
        s = 0.0
        acc = np.zeros(d)
        for i in range(n):
            wi = np.exp(lw[i] - a)
            s += wi
            for j in range(d):
                acc[j] += wi * Y[i, j]
        for j in range(d):
            out[m, j] = acc[j] / s
    return out


numpy_kernels = {"softmax_mean": _softmax_mean_np, "conjugate_infconv_means": _conj_means_np}
numba_kernels = {"softmax_mean": _softmax_mean_nb, "conjugate_infconv_means": _conj_means_nb}

_active = numba_kernels if USE_NUMBA else numpy_kernels
softmax_mean = _active["softmax_mean"]
conjugate_infconv_means = _active["conjugate_infconv_means"]

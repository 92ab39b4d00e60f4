"""Deterministic Gauss-Legendre quadrature building blocks.

All evaluators in the package use fixed node sets derived from the precision
budget, so repeated runs are bit-identical.  Integrands are numpy-vectorised
callables returning complex values.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np
from numpy.polynomial.legendre import leggauss


@lru_cache(maxsize=16)
def gl_nodes(n: int):
    x, w = leggauss(n)
    return x, w


def integrate_segment(f, a, b, nodes: int = 64):
    """Integral of f over the straight segment from a to b (complex endpoints)."""
    x, w = gl_nodes(nodes)
    mid = 0.5 * (a + b)
    half = 0.5 * (b - a)
    return half * np.sum(w * f(mid + half * x))


def geometric_panels(decay_rate: float, tail_eps: float = 1e-18):
    """Panel edges [0 .. T] with T chosen so exp(-decay*T) < tail_eps."""
    if decay_rate <= 0:
        raise ValueError("decay rate must be positive")
    t_max = max(2.0, -np.log(tail_eps) / decay_rate)
    edges = [0.0, 0.25, 0.5, 1.0]
    top = 1.0
    while top < t_max:
        top = min(2 * top, t_max) if 2 * top < t_max else t_max
        edges.append(top)
    return edges


def integrate_zero_to_inf(f, decay_rate: float, nodes: int = 64, tail_eps: float = 1e-18):
    """Integral of f over (0, inf) for integrands with exp(-decay_rate*x) tails.

    The integrand must be finite at x -> 0+ (no node is placed at 0).
    """
    edges = geometric_panels(decay_rate, tail_eps)
    total = 0.0 + 0.0j
    for a, b in zip(edges[:-1], edges[1:]):
        total += integrate_segment(f, a, b, nodes)
    return total


def richardson_limit(values, xs, powers=(1, 2, 3)):
    """Fit values(x) ~ L + sum_k c_k x^{-p_k} and return L.

    Used for product-truncation tails where the error is a short power series
    in the inverse cutoff.
    """
    values = np.asarray(values, dtype=complex)
    xs = np.asarray(xs, dtype=float)
    cols = [np.ones_like(xs, dtype=complex)]
    for p in powers[: len(xs) - 1]:
        cols.append(xs ** (-float(p)))
    m = np.vstack(cols).T
    coef, *_ = np.linalg.lstsq(m, values, rcond=None)
    return coef[0]


def wynn_epsilon(partial_sums):
    """Wynn epsilon acceleration; returns the deepest even-column estimate.

    Robust for alternating / oscillating tails; degenerate table entries
    short-circuit to the already-converged value.
    """
    s = [complex(v) for v in partial_sums]
    if len(s) < 3:
        return s[-1]
    prev = [0.0 + 0.0j] * (len(s) + 1)  # eps_{-1}
    curr = s[:]                          # eps_0
    best = s[-1]
    order = 0
    while len(curr) > 1:
        nxt = []
        for j in range(len(curr) - 1):
            diff = curr[j + 1] - curr[j]
            if diff == 0:
                return curr[j + 1]
            nxt.append(prev[j + 1] + 1.0 / diff)
        prev, curr = curr, nxt
        order += 1
        if order % 2 == 0:
            best = curr[-1]
    return best

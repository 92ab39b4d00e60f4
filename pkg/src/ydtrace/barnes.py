"""Barnes-type regularized products: the generic lattice product, the three
pair-correlation functions G, G-tilde, G-bar, the zeta prefactors and the
overall trace constant.

Each G function has two independent evaluation routes:

* ``integral`` -- an exponential-integral representation derived from the
  defining double product via the Frullani identity.  (The representations
  printed in the source material do not reproduce the products; these do,
  and they satisfy all the stated functional relations.)
* ``product`` -- the double product itself, with the inner geometric
  direction resummed into a gamma-function ratio and the outer direction
  truncated with Richardson tail extrapolation.

The two routes are kept independent on purpose: they cross-check each other
in the verification suites.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product as iter_product

import numpy as np

from .errors import ConditionError, ConstraintError, DomainError, LatticeZeroError
from .quadrature import integrate_zero_to_inf, richardson_limit
from .special import (
    DEFAULT_PRECISION,
    DeformParams,
    PrecisionConfig,
    gamma_ratio,
    loggamma_c,
)


@dataclass(frozen=True)
class BarnesSpec:
    """Offsets and periods of a regularized lattice product."""

    numerator_offsets: tuple
    denominator_offsets: tuple
    periods: tuple

    def __post_init__(self):
        if any(w <= 0 for w in self.periods):
            raise ValueError("periods must be positive reals")

    def check_constraints(self, abs_tol: float = 1e-12):
        """Moment sums must match for q = 0..n, else the product diverges."""
        a = np.asarray(self.numerator_offsets, dtype=complex)
        b = np.asarray(self.denominator_offsets, dtype=complex)
        for q in range(len(self.periods) + 1):
            lhs = np.sum(a**q)
            rhs = np.sum(b**q)
            if abs(lhs - rhs) > abs_tol * max(1.0, abs(lhs)):
                raise ConstraintError(q, lhs, rhs)


def barnes_product(spec: BarnesSpec, precision: PrecisionConfig = DEFAULT_PRECISION) -> complex:
    """Regularized product over the lattice k*omega of (prod_m (a_m + k.w)) /
    (prod_p (b_p + k.w)), truncated with a Richardson tail."""
    spec.check_constraints(precision.abs_tol)
    a = np.asarray(spec.numerator_offsets, dtype=complex)
    b = np.asarray(spec.denominator_offsets, dtype=complex)
    omega = np.asarray(spec.periods, dtype=float)
    n = len(omega)
    box = max(8, min(precision.product_truncation, int(round(2e6 ** (1.0 / n)))))

    def log_partial(nbox):
        grids = np.meshgrid(*(np.arange(nbox) for _ in range(n)), indexing="ij")
        lattice = sum(g * w for g, w in zip(grids, omega)).ravel()
        # accumulate per lattice point so the terms stay O(1/L) before the sum
        per_point = np.zeros_like(lattice, dtype=complex)
        for offset, sign in [(x, +1) for x in a] + [(x, -1) for x in b]:
            vals = offset + lattice
            small = np.abs(vals) < 1e-12
            if small.any():
                raise LatticeZeroError(complex(lattice[small][0] + offset))
            per_point += sign * np.log(vals)
        return np.sum(per_point)

    partials = [log_partial(box // 4), log_partial(box // 2), log_partial(box)]
    log_val = richardson_limit(partials, [box // 4, box // 2, box], powers=(1, 2, 3))
    return np.exp(log_val)


# ---------------------------------------------------------------------------
# the three pair-correlation functions
# ---------------------------------------------------------------------------

def _integral_log(kind: str, z: complex, params: DeformParams, precision: PrecisionConfig):
    """Exponential-integral route.  Returns (log value, decay margin)."""
    hb = params.hbar
    g = params.gamma_c
    z = complex(z)
    if kind == "G":
        pref, sgn = (g + hb) / 2.0, -1.0
        s1, s2 = (z + hb) / 2.0, (z - hb) / 2.0
        margin = g.real + hb - max(abs(z.real), hb)
    elif kind == "Gt":
        pref, sgn = (g - hb) / 2.0, -1.0
        s1, s2 = (z + hb) / 2.0, (z - hb) / 2.0
        margin = g.real - max(abs(z.real), hb)
    elif kind == "Gb":
        pref, sgn = g / 2.0, +1.0
        s1, s2 = (z + hb) / 2.0, z / 2.0
        margin = min(g.real - z.real, g.real + hb + z.real)
    else:  # pragma: no cover
        raise ValueError(kind)

    if margin <= 0.05 * hb:
        return None, margin

    def f(x):
        return (sgn / x) * np.exp(-pref * x) * np.sinh(s1 * x) * np.sinh(s2 * x) / (
            np.sinh(g * x / 2.0) * np.cosh(hb * x / 2.0)
        )

    return integrate_zero_to_inf(f, decay_rate=margin), margin


_PRODUCT_SHIFTS = {
    # per-m factor as gamma ratios of (m*gamma + shift)/(2 hbar); c = z/(2 hbar)
    # entries: (numerator shifts, denominator shifts) in units of 2*hbar, as
    # functions of c
    "G": lambda c: (
        [0.0, 1.0, 1.0 - c, 1.0 + c],
        [0.5, 1.5, 0.5 - c, 0.5 + c],
    ),
    "Gt": lambda c: (
        [0.5, -0.5, 0.5 - c, 0.5 + c],
        [0.0, 1.0, -c, +c],
    ),
    "Gb": lambda c: (
        [1.0, -c, 0.5 + c],
        [0.0, 0.5 - c, 1.0 + c],
    ),
}


def _product_log(kind: str, z: complex, params: DeformParams, precision: PrecisionConfig):
    hb = params.hbar
    g = params.gamma_c
    c = complex(z) / (2 * hb)
    num, den = _PRODUCT_SHIFTS[kind](c)
    m_max = max(64, precision.product_truncation)
    m = np.arange(1, m_max + 1)
    s = m * g / (2 * hb)
    term = np.zeros_like(s, dtype=complex)
    for sh in num:
        vals = s + sh
        if np.any(np.abs(vals) < 1e-12):
            raise LatticeZeroError(complex(z), f"{kind} numerator zero at lattice point")
        term += loggamma_c(vals + 1) - np.log(vals)  # loggamma(vals) without pole risk
    for sh in den:
        vals = s + sh
        if np.any(np.abs(vals) < 1e-12):
            raise LatticeZeroError(complex(z), f"{kind} denominator hits gamma pole")
        term -= loggamma_c(vals + 1) - np.log(vals)
    partial = np.cumsum(term)
    idx = [m_max // 4, m_max // 2, m_max]
    vals = [partial[i - 1] for i in idx]
    return richardson_limit(vals, idx, powers=(1, 2, 3))


def _g_eval(kind, z, params, precision, method):
    if method not in ("auto", "integral", "product"):
        raise ValueError(f"unknown method {method}")
    if method in ("auto", "integral"):
        log_val, margin = _integral_log(kind, z, params, precision)
        if log_val is not None:
            return np.exp(log_val)
        if method == "integral":
            raise DomainError(
                f"{kind}: argument {z} outside the integral-representation strip "
                f"(decay margin {margin:.3g})"
            )
    return np.exp(_product_log(kind, z, params, precision))


def g_fn(alpha, params: DeformParams, precision: PrecisionConfig = DEFAULT_PRECISION,
         method: str = "auto") -> complex:
    """Even pair-correlation function with G(hbar) = 1 (type I pairs)."""
    return _g_eval("G", alpha, params, precision, method)


def g_tilde_fn(beta, params: DeformParams, precision: PrecisionConfig = DEFAULT_PRECISION,
               method: str = "auto") -> complex:
    """Even pair-correlation function with G~(hbar) = 1 (type II pairs)."""
    return _g_eval("Gt", beta, params, precision, method)


def g_bar_fn(z, params: DeformParams, precision: PrecisionConfig = DEFAULT_PRECISION,
             method: str = "auto") -> complex:
    """Mixed-pair correlation function with Gbar(0) = 1."""
    return _g_eval("Gb", z, params, precision, method)


# ---------------------------------------------------------------------------
# zeta prefactors and the trace constant
# ---------------------------------------------------------------------------

def zeta_fn(z, params: DeformParams, precision: PrecisionConfig = DEFAULT_PRECISION) -> complex:
    """Type I pair prefactor: Gamma(1+z/2h)/Gamma(1/2+z/2h) * G(z)/G(0)^(1/2)."""
    hb = params.hbar
    ratio = gamma_ratio(1 + z / (2 * hb), 0.5 + z / (2 * hb))
    if ratio == 0:
        return 0.0 + 0.0j
    g0 = g_fn(0.0, params, precision)
    return ratio * g_fn(z, params, precision) / np.sqrt(g0)


def zeta_tilde_fn(z, params: DeformParams, precision: PrecisionConfig = DEFAULT_PRECISION) -> complex:
    """Type II pair prefactor: Gamma(1/2+z/2h)/Gamma(z/2h) * G~(z)/G~(0)^(1/2)."""
    hb = params.hbar
    ratio = gamma_ratio(0.5 + z / (2 * hb), z / (2 * hb))
    if ratio == 0:
        return 0.0 + 0.0j
    g0 = g_tilde_fn(0.0, params, precision)
    return ratio * g_tilde_fn(z, params, precision) / np.sqrt(g0)


def zeta_bar_fn(z, params: DeformParams, precision: PrecisionConfig = DEFAULT_PRECISION) -> complex:
    """Mixed pair prefactor: Gamma(1/2+z/2h)/Gamma(1+z/2h) * Gbar(z)."""
    hb = params.hbar
    ratio = gamma_ratio(0.5 + z / (2 * hb), 1 + z / (2 * hb))
    if ratio == 0:
        return 0.0 + 0.0j
    return ratio * g_bar_fn(z, params, precision)


def trace_constant(N: int, M: int, n: int, m: int, params: DeformParams,
                   precision: PrecisionConfig = DEFAULT_PRECISION) -> complex:
    """Overall constant of the general trace formula.

    Requires the charge-balance condition (N - M)/2 = n - m; all fractional
    powers are taken on the principal branch (real positive roots for real
    positive bases).
    """
    if min(N, M, n, m) < 0:
        raise ConditionError(f"counts must be non-negative, got {(N, M, n, m)}")
    if N - M != 2 * (n - m):
        raise ConditionError(f"(N-M)/2 = n-m violated for {(N, M, n, m)}")
    if N == M == n == m == 0:
        return 1.0 + 0.0j
    hb = params.hbar
    g = params.gamma_c
    log_g0 = np.log(g_fn(0.0, params, precision)) if M else 0.0
    log_gt0 = np.log(g_tilde_fn(0.0, params, precision)) if N else 0.0
    sign = -1.0 if (N * n + M * m + n + m) % 2 else 1.0
    log_mag = (
        (n - m) ** 2 * (np.log(2 * hb / np.sqrt(np.pi)) - np.log(g))
        + (n * m + 0.5 * n + 0.5 * m) * np.log(np.pi)
        + (n + m) * np.log(hb)
        + 0.25 * N * log_gt0
        + 0.25 * M * log_g0
        - 0.25 * (N + M) * np.log(2 * hb)
        - (2 * n + 2 * m) * np.log(g)
        - 0.25 * (N**2 + 4 * n) * loggamma_c(1 - hb / g)
        - 0.25 * (M**2 + 4 * m) * loggamma_c(1 + hb / g)
    )
    return sign * np.exp(log_mag)

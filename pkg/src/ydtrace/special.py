"""Complex gamma machinery and elementary helpers.

Everything downstream works with log-gamma sums that are exponentiated once,
so the central object is a vectorised principal-branch ``log_gamma``.  It is
computed by shifting the argument into the half-plane ``Re z >= 9`` with the
recurrence and applying a fixed-order Stirling series there; the recurrence
identity holds for the principal branch on the whole cut plane, so no
separate reflection branch is needed for correctness.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import PoleError, ZeroError

_EPS = np.finfo(float).eps

# Stirling series coefficients B_{2k} / (2k (2k-1)), k = 1..10
_STIRLING_COEFFS = (
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
    43867.0 / 244188.0,
    -174611.0 / 125400.0,
)
_SHIFT_EDGE = 9.0
_LOG_SQRT_TWO_PI = 0.9189385332046727


@dataclass(frozen=True)
class DeformParams:
    """Deformation step ``hbar`` and trace shift ``gamma``.

    ``gamma`` may be complex; the trace ratio only converges for
    ``Re(gamma / hbar) > 0``.
    """

    hbar: float
    gamma: complex

    def __post_init__(self):
        if not self.hbar > 0:
            raise ValueError(f"hbar must be positive, got {self.hbar}")
        if not (complex(self.gamma) / self.hbar).real > 0:
            raise ValueError(f"Re(gamma/hbar) must be positive, got {self.gamma}")

    @property
    def gamma_c(self) -> complex:
        return complex(self.gamma)


@dataclass(frozen=True)
class PrecisionConfig:
    """Shared tolerances and budgets for every evaluator."""

    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    max_quad_nodes: int = 200_000
    max_ladder_terms: int = 400
    product_truncation: int = 400

    def __post_init__(self):
        if min(self.rel_tol, self.abs_tol) <= 0:
            raise ValueError("tolerances must be positive")
        if self.rel_tol < 100 * _EPS:
            raise ValueError(f"rel_tol below 100*machine eps: {self.rel_tol}")
        if min(self.max_quad_nodes, self.max_ladder_terms, self.product_truncation) <= 0:
            raise ValueError("budgets must be positive")


DEFAULT_PRECISION = PrecisionConfig()


def _stirling(z):
    """Stirling series; accurate for Re z >= 9."""
    out = (z - 0.5) * np.log(z) - z + _LOG_SQRT_TWO_PI
    zi2 = 1.0 / (z * z)
    term = 1.0 / z
    for c in _STIRLING_COEFFS:
        out = out + c * term
        term = term * zi2
    return out


def loggamma_c(z):
    """Principal-branch log-gamma on complex arrays, no pole checking.

    Internal fast path: callers are responsible for keeping arguments off the
    non-positive integers.
    """
    z = np.asarray(z, dtype=complex)
    scalar = z.ndim == 0
    z = np.atleast_1d(z)
    # shift until Re(z+n) >= target, where target keeps |z+n| >= 9 (Stirling
    # is already accurate for large |Im z| without any shift)
    target = np.where(
        np.abs(z.imag) >= _SHIFT_EDGE,
        1.0,
        np.sqrt(np.maximum(_SHIFT_EDGE**2 - z.imag**2, 1.0)),
    )
    shift = np.ceil(target - z.real).astype(int)
    np.clip(shift, 0, None, out=shift)
    nmax = int(shift.max()) if shift.size else 0
    acc = np.zeros_like(z)
    # summing principal logs keeps the result on the principal branch;
    # batching factors into products would silently drop 2*pi*i windings
    for k in range(nmax):
        mask = k < shift
        if not mask.any():
            break
        acc = np.where(mask, acc + np.log(z + k), acc)
    out = _stirling(z + shift) - acc
    return out[0] if scalar else out


def _near_nonpositive_integer(z, tol=1e-12):
    z = np.asarray(z, dtype=complex)
    n = np.round(z.real)
    return (n <= 0) & (np.abs(z.real - n) < tol) & (np.abs(z.imag) < tol)


def log_gamma(z: complex) -> complex:
    """Principal branch of log Gamma, continuous on the plane cut along
    the negative real axis.

    Raises:
        PoleError: at the non-positive integers.
    """
    bad = _near_nonpositive_integer(z)
    if np.any(bad):
        loc = np.atleast_1d(np.asarray(z))[np.atleast_1d(bad)][0]
        raise PoleError(complex(loc))
    return loggamma_c(z)


def gamma_fn(z: complex) -> complex:
    """Gamma function via exp(log_gamma)."""
    return np.exp(log_gamma(z))


def gamma_ratio(a: complex, b: complex, on_zero: str = "return") -> complex:
    """Gamma(a)/Gamma(b) through a log-gamma difference.

    When ``b`` sits on a pole the ratio is exactly zero; by default that zero
    is returned, with ``on_zero='raise'`` a :class:`ZeroError` is raised
    instead.  ``a`` on a pole raises :class:`PoleError` (unless ``b`` is on a
    pole too, which is an indeterminate case the caller must cancel
    symbolically first).
    """
    a_pole = bool(np.any(_near_nonpositive_integer(a)))
    b_pole = bool(np.any(_near_nonpositive_integer(b)))
    if a_pole and b_pole:
        raise PoleError(a, "0/0 gamma ratio; cancel the poles symbolically first")
    if a_pole:
        raise PoleError(a)
    if b_pole:
        if on_zero == "raise":
            raise ZeroError(b)
        return 0.0 + 0.0j
    return np.exp(loggamma_c(a) - loggamma_c(b))


def _split_integer(z):
    z = np.asarray(z, dtype=complex)
    n = np.round(z.real)
    return n, z - n


def sin_pi(z):
    """sin(pi z), accurate near the integers via argument reduction."""
    n, f = _split_integer(z)
    sign = np.where(n % 2 == 0, 1.0, -1.0)
    out = sign * np.sin(np.pi * f)
    return complex(out) if out.ndim == 0 else out


def cos_pi(z):
    """cos(pi z) with the same argument reduction as :func:`sin_pi`."""
    n, f = _split_integer(z)
    sign = np.where(n % 2 == 0, 1.0, -1.0)
    out = sign * np.cos(np.pi * f)
    return complex(out) if out.ndim == 0 else out


def cot_pi(z):
    """cot(pi z); raises :class:`PoleError` at the integers."""
    _, f = _split_integer(z)
    if np.any((np.abs(f.real) < 1e-13) & (np.abs(f.imag) < 1e-13)):
        raise PoleError(z, f"cot(pi z) pole at integer z={z}")
    return cos_pi(z) / sin_pi(z)

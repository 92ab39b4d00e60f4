"""Rational R-matrix on C^2 x C^2, its scalar factors, and the unitarity,
crossing and Yang-Baxter residual checks.

Basis ordering throughout: (v+v+, v+v-, v-v+, v-v-).
"""

from __future__ import annotations

import numpy as np

from .errors import PoleError
from .special import DeformParams, cot_pi, loggamma_c

#: charge conjugation, squares to -1
CHARGE_CONJUGATION = np.array([[0.0, -1.0], [1.0, 0.0]])

_POLE_GUARD = 1e-8


def _near_pole(x) -> bool:
    """x within the guard distance of a non-positive integer."""
    n = np.round(np.real(x))
    return n <= 0 and abs(complex(x) - n) < _POLE_GUARD


def r_scalar(z, params: DeformParams) -> complex:
    """Scalar normalization factor, a four-gamma ratio with r(0) = 1."""
    w = complex(z) / (2 * params.hbar)
    num = (0.5 - w, 1.0 + w)
    den = (0.5 + w, 1.0 - w)
    for arg in num:
        if _near_pole(arg):
            raise PoleError(z, f"r-scalar numerator gamma pole at argument {arg}")
    for arg in den:
        if _near_pole(arg):
            return 0.0 + 0.0j
    return np.exp(sum(loggamma_c(a) for a in num) - sum(loggamma_c(a) for a in den))


def tau_scalar(z, params: DeformParams) -> complex:
    """Type I / type II commutation factor, equal to -cot(pi z / 2 hbar)."""
    w = complex(z) / (2 * params.hbar)
    if _near_pole(w) or _near_pole(-w) or _near_pole(1 + w) or _near_pole(1 - w):
        raise PoleError(z, "tau pole: z/(2 hbar) is an integer")
    return -cot_pi(w)


def tau_scalar_gamma_form(z, params: DeformParams) -> complex:
    """Same factor through its gamma-ratio representation (cross-check path)."""
    w = complex(z) / (2 * params.hbar)
    if _near_pole(-w) or _near_pole(1 + w):
        raise PoleError(z, "tau pole")
    return np.exp(
        loggamma_c(1 + w) + loggamma_c(-w) - loggamma_c(0.5 + w) - loggamma_c(0.5 - w)
    )


def rbar_matrix(z, params: DeformParams) -> np.ndarray:
    """Bare rational R-matrix with b(z) = z/(z+hbar), c(z) = hbar/(z+hbar)."""
    z = complex(z)
    hb = params.hbar
    if abs(z + hb) < _POLE_GUARD:
        raise PoleError(z, "rbar pole at z = -hbar")
    b = z / (z + hb)
    c = hb / (z + hb)
    out = np.zeros((4, 4), dtype=complex)
    out[0, 0] = out[3, 3] = 1.0
    out[1, 1] = out[2, 2] = b
    out[1, 2] = out[2, 1] = c
    return out


def r_full(z, params: DeformParams) -> np.ndarray:
    """Normalized R-matrix r(z) * Rbar(z)."""
    return r_scalar(z, params) * rbar_matrix(z, params)


def check_unitarity(z, params: DeformParams) -> float:
    """Max-norm residual of R(z) R(-z) = 1."""
    prod = r_full(z, params) @ r_full(-z, params)
    return float(np.max(np.abs(prod - np.eye(4))))


def _partial_transpose_first(m: np.ndarray) -> np.ndarray:
    t = m.reshape(2, 2, 2, 2)  # indices (a, b; c, d) for entry (ab),(cd)
    return np.transpose(t, (2, 1, 0, 3)).reshape(4, 4)


def check_crossing(z, params: DeformParams) -> float:
    """Max-norm residual of (C x id) R(z) (C x id) = R^{t1}(-z - hbar)."""
    ci = np.kron(CHARGE_CONJUGATION, np.eye(2))
    lhs = ci @ r_full(z, params) @ ci
    rhs = _partial_transpose_first(r_full(-complex(z) - params.hbar, params))
    return float(np.max(np.abs(lhs - rhs)))


def yang_baxter_residual(z1, z2, params: DeformParams) -> float:
    """Max-norm residual of the Yang-Baxter equation for Rbar on C^2^x3."""

    def embed(m, slot):
        t = m.reshape(2, 2, 2, 2)
        big = np.zeros((2, 2, 2, 2, 2, 2), dtype=complex)
        idx = np.eye(2)
        if slot == (0, 1):
            big = np.einsum("abcd,ef->abecdf", t, idx)
        elif slot == (0, 2):
            big = np.einsum("abcd,ef->aebcfd", t, idx)
        elif slot == (1, 2):
            big = np.einsum("abcd,ef->eabfcd", t, idx)
        return big.reshape(8, 8)

    r12 = embed(rbar_matrix(complex(z1) - complex(z2), params), (0, 1))
    r13 = embed(rbar_matrix(z1, params), (0, 2))
    r23 = embed(rbar_matrix(z2, params), (1, 2))
    lhs = r12 @ r13 @ r23
    rhs = r23 @ r13 @ r12
    return float(np.max(np.abs(lhs - rhs)))

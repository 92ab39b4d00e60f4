"""Free-field trace engine.

Computes the regularized trace ratio tr(e^{gamma d} O) / tr(e^{gamma d}) for
products O of the elementary fields phi-, phi+, mu-, eta+ over the level-one
Fock space.  After reduction only phi- and eta+ factors remain; the value
depends on the multiset of (separation, exponent) pairs

    delta = z_k - w_j,   e = k_j * p_k,

one pair per (phi-, eta+) combination.  Two independent routes are provided:

* ``trace_ratio_product``   -- the double product over the shift lattice
  {m gamma + 2 k hbar}, truncated at a block plus analytic moment tails
  (Hurwitz-zeta resummation of the asymptotic orders).
* ``trace_ratio_integral``  -- the exponential-integral representation; the
  pair sum is performed inside the integrand, where neutrality cancels the
  1/x^2 singularity analytically.

``pairwise_kernel`` assigns a finite value to a single (non-neutral) pair by
subtracting the neutrality-cancelling part under the integral sign; products
of kernels over the pairs of a neutral configuration reproduce the trace
ratio exactly, because the subtraction is linear in (e, e*delta).
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum
from math import comb

import numpy as np

from .errors import DomainError, LatticeZeroError, NeutralityError, UnreducedError
from .quadrature import integrate_zero_to_inf
from .special import DEFAULT_PRECISION, DeformParams, PrecisionConfig


class FieldKind(Enum):
    PHI_MINUS = "phi-"
    PHI_PLUS = "phi+"
    MU_MINUS = "mu-"
    ETA_PLUS = "eta+"


@dataclass(frozen=True)
class FieldFactor:
    kind: FieldKind
    argument: complex
    power: int

    def __post_init__(self):
        if self.power == 0:
            raise ValueError("field factor power must be non-zero")


@dataclass(frozen=True)
class OperatorProduct:
    factors: tuple
    scalar_prefactor: complex = 1.0 + 0.0j
    sign_exponent: int = 0

    @staticmethod
    def of(*factors, scalar_prefactor=1.0, sign_exponent=0) -> "OperatorProduct":
        return OperatorProduct(tuple(factors), complex(scalar_prefactor), sign_exponent)

    @property
    def is_reduced(self) -> bool:
        return all(
            f.kind in (FieldKind.PHI_MINUS, FieldKind.ETA_PLUS) for f in self.factors
        )


def reduce_product(product: OperatorProduct, params: DeformParams) -> OperatorProduct:
    """Rewrite mu- and phi+ factors in the {phi-, eta+} basis.

    mu-(u)^p  -> phi-(u+hbar)^p phi-(u)^p
    phi+(z)^p -> eta+(z)^p eta+(z-hbar)^p, sign exponent += p

    The sign exponent tracks (-1)^p insertions; on the charge-zero sector it
    evaluates to +1, so the engine records it without using it.
    """
    hb = params.hbar
    out = []
    sign = product.sign_exponent
    for f in product.factors:
        if f.kind is FieldKind.MU_MINUS:
            out.append(FieldFactor(FieldKind.PHI_MINUS, f.argument + hb, f.power))
            out.append(FieldFactor(FieldKind.PHI_MINUS, f.argument, f.power))
        elif f.kind is FieldKind.PHI_PLUS:
            out.append(FieldFactor(FieldKind.ETA_PLUS, f.argument, f.power))
            out.append(FieldFactor(FieldKind.ETA_PLUS, f.argument - hb, f.power))
            sign += f.power
        else:
            out.append(f)
    return replace(product, factors=tuple(out), sign_exponent=sign)


def check_neutrality(product: OperatorProduct) -> bool:
    """True iff the phi- powers and the eta+ powers separately sum to zero."""
    if not product.is_reduced:
        raise UnreducedError("reduce the product before checking neutrality")
    k_total = sum(f.power for f in product.factors if f.kind is FieldKind.PHI_MINUS)
    p_total = sum(f.power for f in product.factors if f.kind is FieldKind.ETA_PLUS)
    return k_total == 0 and p_total == 0


def _pairs(product: OperatorProduct):
    """(delta, exponent) for every (phi-, eta+) factor pair."""
    phis = [f for f in product.factors if f.kind is FieldKind.PHI_MINUS]
    etas = [f for f in product.factors if f.kind is FieldKind.ETA_PLUS]
    pairs = [
        (complex(e.argument) - complex(w.argument), w.power * e.power)
        for w in phis
        for e in etas
    ]
    # canonical order: the value depends only on the multiset of pairs, and a
    # sorted reduction keeps it bit-identical under factor reordering
    pairs.sort(key=lambda de: (de[0].real, de[0].imag, de[1]))
    return pairs


def _check_lattice(deltas, params: DeformParams, tol=1e-10):
    """No separation may sit on the zero lattice {m g + 2k h, h + m g + 2k h}."""
    hb = params.hbar
    g = params.gamma_c
    if not deltas:
        return
    rad = max(abs(d) for d in deltas) + hb + 1.0
    m_max = max(1, int(rad / max(g.real, 1e-9)) + 2)
    k_max = int(rad / (2 * hb)) + 2
    m = np.arange(1, m_max + 1)[:, None]
    k = np.arange(0, k_max + 1)[None, :]
    lattice = (m * g + 2 * k * hb).ravel()
    for d in deltas:
        if np.any(np.abs(d - lattice) < tol) or np.any(np.abs(d - hb - lattice) < tol):
            raise LatticeZeroError(d)


def _require_neutral(product: OperatorProduct, params: DeformParams):
    if not product.is_reduced:
        product = reduce_product(product, params)
    if not check_neutrality(product):
        raise NeutralityError("trace ratio requires a neutral product")
    return product


# ---------------------------------------------------------------------------
# lattice-product route
# ---------------------------------------------------------------------------

def _hurwitz_zeta(r: int, q, terms: int = 24):
    """Hurwitz zeta for integer r >= 2 and complex q with Re q > 0.

    Direct sum plus Euler-Maclaurin tail; accurate to ~1e-15 for the
    arguments used here.
    """
    q = np.asarray(q, dtype=complex)
    j = np.arange(terms)
    direct = np.sum((q[..., None] + j) ** (-float(r)), axis=-1)
    qj = q + terms
    tail = qj ** (1.0 - r) / (r - 1) + 0.5 * qj ** (-float(r))
    for b2k, fact2k, two_k in ((1.0 / 6.0, 2, 2), (-1.0 / 30.0, 24, 4), (1.0 / 42.0, 720, 6)):
        poch = 1.0
        for t in range(two_k - 1):
            poch *= r + t
        tail = tail + (b2k / fact2k) * poch * qj ** (-(r + two_k - 1.0))
    return direct + tail


def _tail_coefficients(delta, hbar, orders):
    """c_r with log(1 + h/(L-d)) - h/L - (h d - h^2/2)/L^2 = sum_{r>=3} c_r / L^r."""
    out = {}
    for r in orders:
        c = 0.0 + 0.0j
        for s in range(1, r + 1):
            c += (-1.0) ** (s + 1) * hbar**s / s * comb(r - 1, s - 1) * delta ** (r - s)
        out[r] = c
    return out


def _lattice_sums(params: DeformParams, block: int, orders):
    """Direct block lattice, plus S_r = sum over the *complement* of L^-r."""
    hb = params.hbar
    g = params.gamma_c
    m = np.arange(1, block + 1)[:, None]
    k = np.arange(0, block)[None, :]
    lattice = (m * g + 2 * k * hb).ravel()
    s_comp = {}
    k_direct = 4 * block
    kk = np.arange(0, k_direct)
    for r in orders:
        q = 1.0 + 2 * kk * hb / g
        per_k = g ** (-float(r)) * _hurwitz_zeta(r, q)
        full = np.sum(per_k)
        # Euler-Maclaurin tail of the k-sum
        qk = 1.0 + 2 * k_direct * hb / g
        g_k = g ** (-float(r)) * _hurwitz_zeta(r, qk)
        gp_k = g ** (-float(r)) * (2 * hb / g) * (-r) * _hurwitz_zeta(r + 1, qk)
        integral = g ** (-float(r)) * (g / (2 * hb)) * _hurwitz_zeta(r - 1, qk) / (r - 1)
        full = full + integral + 0.5 * g_k - gp_k / 12.0
        s_comp[r] = full - np.sum(lattice ** (-float(r)))
    return lattice, s_comp


def _log_kernel_lattice(delta, params: DeformParams, lattice, s_comp, orders):
    hb = params.hbar
    t = np.log1p(hb / (lattice - delta)) - hb / lattice - (hb * delta - hb**2 / 2) / lattice**2
    total = np.sum(t)
    coeffs = _tail_coefficients(delta, hb, orders)
    for r in orders:
        total += coeffs[r] * s_comp[r]
    return total


def trace_ratio_product(product: OperatorProduct, params: DeformParams,
                        precision: PrecisionConfig = DEFAULT_PRECISION) -> complex:
    """Trace ratio through the double-product representation."""
    product = _require_neutral(product, params)
    pairs = _pairs(product)
    _check_lattice([d for d, _ in pairs], params)
    if not pairs:
        return product.scalar_prefactor
    orders = tuple(range(3, 11))
    block = min(96, max(24, precision.product_truncation // 4))
    lattice, s_comp = _lattice_sums(params, block, orders)
    total = 0.0 + 0.0j
    for delta, e in pairs:
        if e == 0:
            continue
        total += e * _log_kernel_lattice(delta, params, lattice, s_comp, orders)
    return product.scalar_prefactor * np.exp(total)


# ---------------------------------------------------------------------------
# integral route
# ---------------------------------------------------------------------------

def _integral_decay(pairs, params: DeformParams):
    g = params.gamma_c
    hb = params.hbar
    return min((g.real - d.real) / hb for d, _ in pairs)


def trace_ratio_integral(product: OperatorProduct, params: DeformParams,
                         precision: PrecisionConfig = DEFAULT_PRECISION) -> complex:
    """Trace ratio through the exponential-integral representation."""
    product = _require_neutral(product, params)
    pairs = _pairs(product)
    _check_lattice([d for d, _ in pairs], params)
    if not pairs:
        return product.scalar_prefactor
    hb = params.hbar
    g = params.gamma_c
    decay = _integral_decay(pairs, params)
    if decay <= 0.05:
        raise DomainError(
            f"integral representation diverges: max Re(delta) too close to Re gamma "
            f"(decay margin {decay:.3g})"
        )

    deltas = np.array([d for d, _ in pairs])
    exps = np.array([e for _, e in pairs], dtype=float)

    def integrand(x):
        xc = x[:, None]
        pair_sum = np.sum(exps[None, :] * np.exp(deltas[None, :] * xc / hb), axis=1)
        envelope = np.exp((hb - g) * x / (2 * hb)) / (
            4.0 * x * np.sinh(g * x / (2 * hb)) * np.cosh(x / 2.0)
        )
        return envelope * pair_sum

    log_val = integrate_zero_to_inf(integrand, decay_rate=decay)
    return product.scalar_prefactor * np.exp(log_val)


def pairwise_kernel(delta, kexp: int, pexp: int, params: DeformParams,
                    precision: PrecisionConfig = DEFAULT_PRECISION) -> complex:
    """Regularized contribution of a single (phi-, eta+) pair.

    The neutrality-cancelling part (the 1/x^2 and 1/x channels of the
    integrand, damped by e^-x) is subtracted under the integral; the
    subtraction is linear in the exponent and in exponent*delta, so kernel
    products over neutral configurations equal the full trace ratio.
    """
    e = kexp * pexp
    if e == 0:
        return 1.0 + 0.0j
    delta = complex(delta)
    _check_lattice([delta], params)
    hb = params.hbar
    g = params.gamma_c
    if (g.real - delta.real) / hb <= 0.05:
        raise DomainError("kernel integral diverges: Re(delta) too close to Re gamma")
    a = 2 * hb / g
    b = (hb - g + 2 * delta) / g

    def integrand(x):
        f = np.exp((hb - g) * x / (2 * hb) + delta * x / hb) / (
            np.sinh(g * x / (2 * hb)) * np.cosh(x / 2.0)
        )
        sub = (a / x**2 + (a + b) / x) * np.exp(-x)
        return 0.25 * (f / x - sub)

    decay = min((g.real - delta.real) / hb, 1.0)
    log_k = integrate_zero_to_inf(integrand, decay_rate=decay)
    return np.exp(e * log_k)

"""Numerical contour integration: oriented vertical lines, snake paths around
interleaved pole ladders, residue-ladder summation with acceleration,
semicircle-at-infinity asymptotics, and the four-gamma Mellin-Barnes
reference integral.

Conventions
-----------
All contour values are normalized as integral of f(v) dv / (2 pi i).  An
"up" vertical line runs from x0 - i*inf to x0 + i*inf; "down" is its
negative.  For the semicircles at infinity the tail f = c0 + c1/v + O(1/v^2)
is sampled along the imaginary directions (where every contour here crosses
the infinity point) and the side convention is fixed so that
``semicircle_infinity(1/v, side="right") == -1/2``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DecayError,
    ContourConstructionError,
    NonconvergenceError,
    NotSimpleTailError,
    SeparationError,
    SlowDecayError,
)
from .quadrature import gl_nodes, integrate_segment, wynn_epsilon
from .special import DEFAULT_PRECISION, PrecisionConfig, loggamma_c


@dataclass(frozen=True)
class Ladder:
    """Pole generator base + r*step, r = 0..count-1 (count None = infinite)."""

    base: complex
    step: complex
    count: int | None = None

    def points(self, r_max: int):
        n = r_max if self.count is None else min(self.count, r_max)
        return self.base + self.step * np.arange(n)


@dataclass(frozen=True)
class PoleBook:
    """Declared inside/outside pole ladders for one contour."""

    inside: tuple = ()
    outside: tuple = ()

    def __post_init__(self):
        pts_in = np.concatenate([l.points(12) for l in self.inside]) if self.inside else np.array([])
        pts_out = np.concatenate([l.points(12) for l in self.outside]) if self.outside else np.array([])
        for p in pts_in:
            if pts_out.size and np.min(np.abs(pts_out - p)) < 1e-8:
                raise SeparationError(p, f"inside and outside pole sets collide at {p}")


@dataclass(frozen=True)
class VerticalLine:
    real_part: float
    orientation: str = "up"

    def __post_init__(self):
        if self.orientation not in ("up", "down"):
            raise ValueError("orientation must be 'up' or 'down'")

    def separates(self, book: PoleBook, inside_side: str = "east"):
        """Every inside pole strictly on inside_side, every outside pole on the
        other; raises SeparationError naming the first offender."""
        sign = 1.0 if inside_side == "east" else -1.0
        for ladder in book.inside:
            pts = ladder.points(64)
            bad = sign * (np.real(pts) - self.real_part) <= 0
            if bad.any():
                raise SeparationError(pts[bad][0], f"inside pole {pts[bad][0]} on wrong side of line {self.real_part}")
        for ladder in book.outside:
            pts = ladder.points(64)
            bad = sign * (np.real(pts) - self.real_part) >= 0
            if bad.any():
                raise SeparationError(pts[bad][0], f"outside pole {pts[bad][0]} on wrong side of line {self.real_part}")


@dataclass(frozen=True)
class ResidueLadder:
    base: complex
    step: complex
    max_terms: int = 400

    def __post_init__(self):
        if abs(np.real(self.step)) == 0:
            raise ValueError("residue ladder step must have non-zero real part")


@dataclass(frozen=True)
class SnakePath:
    """Piecewise-linear path; vertical tails are attached below the first and
    above the last waypoint."""

    waypoints: tuple

    def __post_init__(self):
        if len(self.waypoints) < 2:
            raise ValueError("snake path needs at least two waypoints")


@dataclass(frozen=True)
class InfinitySemicircle:
    side: str

    def __post_init__(self):
        if self.side not in ("left", "right"):
            raise ValueError("side must be 'left' or 'right'")


# ---------------------------------------------------------------------------
# vertical lines
# ---------------------------------------------------------------------------

def _find_truncation(f, x0, precision, t_start=8.0, t_cap=2048.0):
    """Smallest dyadic T with |f| at the endpoints below tolerance."""
    x, _ = gl_nodes(16)
    interior = np.max(np.abs(f(x0 + 4j * x)))
    scale = max(interior, 1e-300)
    t = t_start
    while t <= t_cap:
        edge = max(abs(f(np.array([x0 + 1j * t]))[0]), abs(f(np.array([x0 - 1j * t]))[0]))
        if edge < 1e-15 * scale:
            return t, edge, scale
        t *= 2
    return None, edge, scale


def _line_quadrature(f, x0, t_max, nodes, panel_width=2.0):
    n_panels = max(4, int(np.ceil(2 * t_max / panel_width)))
    edges = np.linspace(-t_max, t_max, n_panels + 1)
    total = 0.0 + 0.0j
    for a, b in zip(edges[:-1], edges[1:]):
        x, w = gl_nodes(nodes)
        mid, half = 0.5 * (a + b), 0.5 * (b - a)
        total += half * np.sum(w * f(x0 + 1j * (mid + half * x)))
    return total / (2 * np.pi)  # i dt / (2 pi i)


def integrate_vertical(f, path: VerticalLine, book: PoleBook | None = None,
                       precision: PrecisionConfig = DEFAULT_PRECISION,
                       inside_side: str = "east") -> complex:
    """Oriented line integral of f dv/(2 pi i); raises DecayError when the
    integrand does not fall off along the line."""
    if book is not None:
        path.separates(book, inside_side)
    t_max, edge, scale = _find_truncation(f, path.real_part, precision)
    if t_max is None:
        raise DecayError(
            f"integrand at |Im v| = 2048 still {edge:.2e} vs interior {scale:.2e}; "
            "use principal_value_vertical"
        )
    nodes = 64
    if 64 * 2 * t_max / 2.0 > precision.max_quad_nodes:
        nodes = 32
    val = _line_quadrature(f, path.real_part, t_max, nodes)
    return val if path.orientation == "up" else -val


def principal_value_vertical(f, path: VerticalLine,
                             precision: PrecisionConfig = DEFAULT_PRECISION,
                             t_base: float = 24.0) -> complex:
    """Symmetric-truncation value of a non-decaying line integral.

    The truncated integral behaves like a1*T + a0 + a-1/T + ...; the constant
    term a0 is extracted from four dyadic radii and validated on a fifth.
    """
    radii = t_base * np.array([1.0, 2.0, 4.0, 8.0, 16.0])
    vals = np.array([_line_quadrature(f, path.real_part, t, 64) for t in radii])
    basis = np.vstack(
        [radii, np.ones_like(radii), 1.0 / radii, 1.0 / radii**2, 1.0 / radii**3]
    ).T
    coef = np.linalg.solve(basis, vals)
    t_check = 32 * t_base
    check = _line_quadrature(f, path.real_part, t_check, 64)
    pred = coef[0] * t_check + coef[1] + coef[2] / t_check + coef[3] / t_check**2
    scale = max(np.max(np.abs(vals)), abs(coef[1]), 1.0)
    if abs(check - pred) > 1e-7 * scale:
        raise NonconvergenceError(
            f"principal-value extrapolation unstable (check error {abs(check - pred):.2e})",
            diagnostics={"radii": radii.tolist(), "values": [complex(v) for v in vals]},
        )
    a0 = coef[1]
    return a0 if path.orientation == "up" else -a0


# ---------------------------------------------------------------------------
# residues
# ---------------------------------------------------------------------------

def residue_at(f, pole, radius=1e-3, nodes=32) -> complex:
    """Residue of a simple pole by midpoint-rule circle quadrature."""
    th = 2 * np.pi * (np.arange(nodes) + 0.5) / nodes
    z = pole + radius * np.exp(1j * th)
    return complex(np.mean(f(z) * (z - pole)))


def residue_sum(f, ladder: ResidueLadder,
                precision: PrecisionConfig = DEFAULT_PRECISION) -> complex:
    """Accelerated sum of residues along a ladder (2-pi-i normalized)."""
    n_max = min(ladder.max_terms, precision.max_ladder_terms)
    if n_max == 0:
        return 0.0 + 0.0j
    radius = min(0.25 * abs(ladder.step), 0.1)
    partial = []
    total = 0.0 + 0.0j
    window = []
    for r in range(n_max):
        term = residue_at(f, ladder.base + r * ladder.step, radius)
        total += term
        partial.append(total)
        window.append(abs(term))
        if len(window) >= 4 and max(window[-4:]) < precision.rel_tol * max(abs(total), 1e-30):
            return total
    accel = wynn_epsilon(partial[-min(len(partial), 24):])
    tail = [wynn_epsilon(partial[-k:]) for k in (12, 16, 20) if len(partial) >= k]
    if tail and max(abs(t - accel) for t in tail) < 1e3 * precision.rel_tol * max(abs(accel), 1e-30):
        return accel
    raise SlowDecayError(
        f"ladder residues not summable within {n_max} terms (last |term| {window[-1]:.2e})"
    )


# ---------------------------------------------------------------------------
# snake paths
# ---------------------------------------------------------------------------

def integrate_snake(f, path: SnakePath,
                    precision: PrecisionConfig = DEFAULT_PRECISION) -> complex:
    """Integral over the piecewise-linear path plus vertical tails, dv/2 pi i.

    The path is oriented from the lower tail through the waypoints to the
    upper tail.
    """
    w0, w_last = path.waypoints[0], path.waypoints[-1]
    total = 0.0 + 0.0j
    # lower tail: from w0 - i*inf up to w0
    t_max, edge, scale = _find_truncation(f, np.real(w0), precision)
    if t_max is None:
        raise DecayError("snake-path tails require a decaying integrand")
    t_lo = np.imag(w0)
    edges = np.linspace(-t_max, t_lo, max(4, int(np.ceil((t_lo + t_max) / 2.0))) + 1)
    for a, b in zip(edges[:-1], edges[1:]):
        total += integrate_segment(f, np.real(w0) + 1j * a, np.real(w0) + 1j * b, 64)
    # the body
    for a, b in zip(path.waypoints[:-1], path.waypoints[1:]):
        seg_len = abs(b - a)
        n_seg = max(1, int(np.ceil(seg_len / 2.0)))
        for k in range(n_seg):
            total += integrate_segment(f, a + (b - a) * k / n_seg, a + (b - a) * (k + 1) / n_seg, 64)
    # upper tail
    t_max2, edge, scale = _find_truncation(f, np.real(w_last), precision)
    if t_max2 is None:
        raise DecayError("snake-path tails require a decaying integrand")
    t_hi = np.imag(w_last)
    edges = np.linspace(t_hi, t_max2, max(4, int(np.ceil((t_max2 - t_hi) / 2.0))) + 1)
    for a, b in zip(edges[:-1], edges[1:]):
        total += integrate_segment(f, np.real(w_last) + 1j * a, np.real(w_last) + 1j * b, 64)
    return total / (2j * np.pi)


def snake_around_poles(x0: float, detour_poles, east_clearance: float,
                       all_poles=(), margin: float = 0.25) -> SnakePath:
    """Midpoint-rule snake: an up-line at x0 with a rectangular eastward detour
    around each pole in detour_poles (sorted by height), keeping every other
    pole at least `margin` away from the path."""
    detour = sorted((complex(p) for p in detour_poles), key=lambda p: p.imag)
    pts = [x0 - 64j]
    others = np.asarray([complex(p) for p in all_poles]) if len(all_poles) else np.array([])
    for p in detour:
        x1 = p.real + east_clearance
        lo = p.imag - margin
        hi = p.imag + margin
        rect = [complex(x0, lo), complex(x1, lo), complex(x1, hi), complex(x0, hi)]
        for a, b in zip(rect[:-1], rect[1:]):
            if others.size:
                t = np.linspace(0, 1, 33)[:, None]
                seg = a + (b - a) * t
                if np.min(np.abs(seg - others[None, :])) < 0.8 * margin:
                    raise ContourConstructionError(
                        f"snake detour around {p} passes too close to another pole"
                    )
        pts.extend(rect)
    pts.append(x0 + 64j)
    return SnakePath(tuple(pts))


# ---------------------------------------------------------------------------
# infinity semicircles
# ---------------------------------------------------------------------------

def semicircle_infinity(f, side: str, radius: float = 100.0,
                        precision: PrecisionConfig = DEFAULT_PRECISION) -> complex:
    """Half-residue contribution of a simple tail at the infinity point.

    The tail coefficients of f = c0 + c1/v + O(1/v^2) are extracted by
    sampling at radii (R, 2R, 4R) along both imaginary directions with a
    Richardson solve; the divergent c0 part cancels between the two
    semicircles of a closed contour and is ignored here.  Sign convention:
    right semicircle -> -c1/2, left -> +c1/2.
    """
    if side not in ("left", "right"):
        raise ValueError("side must be 'left' or 'right'")
    c1_estimates = []
    for direction in (1j, -1j):
        r = radius * np.array([1.0, 2.0, 4.0, 8.0])
        v = direction * r
        vals = np.array([complex(f(np.array([vv]))[0]) for vv in v])
        if abs(vals[-1]) > 4.0 * abs(vals[0]) + 1e-30:
            raise NotSimpleTailError(f"tail grows with |v| along {direction}: {vals}")
        basis = np.vstack([np.ones(4), 1.0 / v, 1.0 / v**2, 1.0 / v**3]).T
        c = np.linalg.solve(basis, vals)
        v5 = direction * 16 * radius
        pred = c[0] + c[1] / v5 + c[2] / v5**2 + c[3] / v5**3
        actual = complex(f(np.array([v5]))[0])
        scale = max(np.max(np.abs(vals)), 1e-30)
        if abs(pred - actual) > 1e-4 * scale:
            raise NotSimpleTailError(
                f"tail not a short power series in 1/v (prediction error "
                f"{abs(pred - actual):.2e} vs scale {scale:.2e})"
            )
        c1_estimates.append(c[1])
        sample_scale = max(np.max(np.abs(vals)), 1e-300)
    spread = abs(c1_estimates[0] - c1_estimates[1])
    floor = 1e-9 * sample_scale * radius
    if spread > 1e-5 * max(abs(c1_estimates[0]), abs(c1_estimates[1]), floor):
        raise NotSimpleTailError(f"inconsistent c1 between directions: {c1_estimates}")
    c1 = 0.5 * (c1_estimates[0] + c1_estimates[1])
    return -0.5 * c1 if side == "right" else 0.5 * c1


# ---------------------------------------------------------------------------
# Mellin-Barnes reference integral
# ---------------------------------------------------------------------------

def mellin_barnes_4gamma(a, b, c, d, precision: PrecisionConfig = DEFAULT_PRECISION):
    """Numeric vertical-line integral of G(a+s)G(b+s)G(c-s)G(d-s) ds/(2 pi i),
    plus the two closed-form candidates (standard Barnes lemma denominator
    Gamma(a+b+c+d) and the printed variant Gamma(1+a+b+c+d))."""
    a, b, c, d = map(complex, (a, b, c, d))
    lo = max(-a.real, -b.real)
    hi = min(c.real, d.real)
    if lo >= hi:
        raise SeparationError(
            complex(lo), f"no vertical line separates the ladders: window ({lo}, {hi})"
        )
    x0 = 0.5 * (lo + hi)

    def f(s):
        return np.exp(loggamma_c(a + s) + loggamma_c(b + s) + loggamma_c(c - s) + loggamma_c(d - s))

    numeric = integrate_vertical(f, VerticalLine(x0, "up"), precision=precision)
    base = loggamma_c(a + c) + loggamma_c(a + d) + loggamma_c(b + c) + loggamma_c(b + d)
    closed_standard = np.exp(base - loggamma_c(a + b + c + d))
    closed_paper = np.exp(base - loggamma_c(1 + a + b + c + d))
    return numeric, closed_standard, closed_paper

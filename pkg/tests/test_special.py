import numpy as np
import pytest
import scipy.special as sps
from hypothesis import given, settings, strategies as st

from ydtrace.errors import PoleError, ZeroError
from ydtrace.special import (
    DeformParams,
    PrecisionConfig,
    cos_pi,
    cot_pi,
    gamma_fn,
    gamma_ratio,
    log_gamma,
    loggamma_c,
    sin_pi,
)


class TestGamma:
    def test_known_values(self):
        assert abs(gamma_fn(1.0) - 1.0) < 1e-14
        assert abs(gamma_fn(0.5) - np.sqrt(np.pi)) < 1e-13
        assert abs(gamma_fn(5.0) - 24.0) < 1e-12

    def test_log_gamma_values(self):
        assert abs(log_gamma(1.0)) < 1e-14
        assert abs(log_gamma(2.0)) < 1e-14
        assert abs(log_gamma(10.0) - np.log(362880.0)) < 1e-12

    def test_poles_raise(self):
        for z in (0.0, -1.0, -7.0):
            with pytest.raises(PoleError):
                gamma_fn(z)

    def test_matches_scipy_both_half_planes(self):
        xs = np.linspace(-8.3, 12.0, 41)
        ys = np.linspace(-6.0, 6.0, 25)
        ys = ys[np.abs(ys) > 1e-3]  # keep off the real-axis cut
        zs = (xs[:, None] + 1j * ys[None, :]).ravel()
        mine = loggamma_c(zs)
        ref = sps.loggamma(zs)
        assert np.max(np.abs(mine - ref)) < 1e-11

    def test_exp_consistency(self):
        z = 3.7 - 2.2j
        assert abs(np.exp(log_gamma(z)) - gamma_fn(z)) < 1e-12 * abs(gamma_fn(z))

    def test_right_half_plane_continuity(self):
        # walk a path; the log must vary smoothly, no 2*pi*i jumps
        t = np.linspace(0, 1, 400)
        path = 0.3 + 2.5 * np.exp(1j * np.pi * (t - 0.5)) + 3.0
        vals = loggamma_c(path)
        steps = np.abs(np.diff(vals))
        assert steps.max() < 0.2

    @given(
        x=st.floats(-20, 20),
        y=st.floats(-20, 20),
    )
    @settings(max_examples=200, deadline=None)
    def test_reflection(self, x, y):
        z = complex(x, y)
        if abs(z - round(z.real)) < 0.05 or abs(z.imag) < 1e-3:
            return
        lhs = gamma_fn(z) * gamma_fn(1 - z) * sin_pi(z) / np.pi
        assert abs(lhs - 1) < 1e-10

    @given(
        x=st.floats(-30, 30),
        y=st.floats(-10, 10),
    )
    @settings(max_examples=200, deadline=None)
    def test_recurrence(self, x, y):
        z = complex(x, y)
        if abs(z.imag) < 1e-3 and abs(z.real - round(z.real)) < 0.05:
            return
        lhs = gamma_fn(z + 1)
        rhs = z * gamma_fn(z)
        assert abs(lhs - rhs) <= 1e-10 * max(abs(lhs), 1.0)


class TestGammaRatio:
    def test_half_shift(self):
        assert abs(gamma_ratio(1.5, 0.5) - 0.5) < 1e-13

    def test_equal_args(self):
        assert abs(gamma_ratio(2.3 + 1j, 2.3 + 1j) - 1.0) < 1e-14

    def test_one_three(self):
        assert abs(gamma_ratio(1.0, 3.0) - 0.5) < 1e-13

    def test_denominator_pole_gives_zero(self):
        assert gamma_ratio(0.7, -2.0) == 0.0

    def test_denominator_pole_raise_mode(self):
        with pytest.raises(ZeroError):
            gamma_ratio(0.7, -2.0, on_zero="raise")

    def test_numerator_pole_raises(self):
        with pytest.raises(PoleError):
            gamma_ratio(-1.0, 0.5)

    def test_large_arguments_stable(self):
        # direct gammas would overflow far earlier
        v = gamma_ratio(5000.5, 5000.0)
        assert abs(v - np.exp(sps.loggamma(5000.5) - sps.loggamma(5000.0))) < 1e-9 * abs(v)


class TestTrig:
    def test_sin_half(self):
        assert abs(sin_pi(0.5) - 1.0) < 1e-15

    def test_cot_half(self):
        assert abs(cot_pi(0.5)) < 1e-15

    def test_large_argument_reduction(self):
        assert abs(sin_pi(1e6 + 0.25) - np.sin(np.pi / 4)) < 1e-12

    def test_cos_values(self):
        assert abs(cos_pi(1.0) + 1.0) < 1e-15
        assert abs(cos_pi(0.5)) < 1e-15

    def test_cot_pole(self):
        with pytest.raises(PoleError):
            cot_pi(3.0)


class TestConfigs:
    def test_deform_params_validation(self):
        DeformParams(hbar=1.0, gamma=2.0)
        with pytest.raises(ValueError):
            DeformParams(hbar=-1.0, gamma=2.0)
        with pytest.raises(ValueError):
            DeformParams(hbar=1.0, gamma=-0.5 + 1j)

    def test_precision_validation(self):
        PrecisionConfig()
        with pytest.raises(ValueError):
            PrecisionConfig(rel_tol=1e-16)
        with pytest.raises(ValueError):
            PrecisionConfig(max_quad_nodes=0)

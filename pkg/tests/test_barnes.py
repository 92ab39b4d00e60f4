import numpy as np
import pytest

from ydtrace.barnes import (
    BarnesSpec,
    barnes_product,
    g_bar_fn,
    g_fn,
    g_tilde_fn,
    trace_constant,
    zeta_bar_fn,
    zeta_fn,
    zeta_tilde_fn,
)
from ydtrace.errors import ConditionError, ConstraintError
from ydtrace.special import DeformParams, gamma_fn

P1 = DeformParams(hbar=1.0, gamma=2.0)
P2 = DeformParams(hbar=1.0, gamma=3.0)
P3 = DeformParams(hbar=1.0, gamma=1.5)


class TestBarnesProduct:
    def test_constraint_violation(self):
        spec = BarnesSpec((0.3, 0.7), (0.2, 0.9), (1.0,))
        with pytest.raises(ConstraintError):
            barnes_product(spec)

    def test_n1_gamma_ratio(self):
        spec = BarnesSpec((0.3, 0.7), (0.2, 0.8), (1.0,))
        expected = gamma_fn(0.2) * gamma_fn(0.8) / (gamma_fn(0.3) * gamma_fn(0.7))
        assert abs(barnes_product(spec) - expected) < 1e-8 * abs(expected)

    def test_equal_offsets_give_one(self):
        spec = BarnesSpec((0.4, 1.1), (0.4, 1.1), (1.0, 2.0))
        assert abs(barnes_product(spec) - 1.0) < 1e-10

    def test_sqrt_two(self):
        spec = BarnesSpec((0.5, 0.5), (0.25, 0.75), (1.0,))
        assert abs(barnes_product(spec) - np.sqrt(2.0)) < 1e-8

    def test_n2_matches_g_fn(self):
        # the type-I pair function is itself a two-period lattice product
        hb, g = 1.0, 2.0
        z = 0.4
        spec = BarnesSpec(
            (g + hb, g + 3 * hb, g + hb - z, g + hb + z),
            (g, g + 2 * hb, g + 2 * hb - z, g + 2 * hb + z),
            (g, 2 * hb),
        )
        ref = g_fn(z, P1)
        assert abs(barnes_product(spec) - ref) < 2e-6 * abs(ref)


class TestGFunctions:
    @pytest.mark.parametrize("params", [P1, P2, P3])
    def test_unit_values(self, params):
        assert abs(g_fn(params.hbar, params) - 1.0) < 1e-10
        assert abs(g_tilde_fn(params.hbar, params) - 1.0) < 1e-10
        assert abs(g_bar_fn(0.0, params) - 1.0) < 1e-12

    def test_g_bar_minus_hbar(self):
        assert abs(g_bar_fn(-1.0, P1) - 1.0) < 1e-10

    @pytest.mark.parametrize("params", [P1, P2])
    def test_evenness(self, params):
        rng = np.random.default_rng(3)
        for _ in range(12):
            z = complex(rng.uniform(-0.9, 0.9), rng.uniform(-0.5, 0.5))
            assert abs(g_fn(z, params) - g_fn(-z, params)) < 1e-9
            assert abs(g_tilde_fn(z, params) - g_tilde_fn(-z, params)) < 1e-9

    @pytest.mark.parametrize("kind", ["G", "Gt", "Gb"])
    @pytest.mark.parametrize("params", [P1, P2])
    def test_dual_representation(self, kind, params):
        fn = {"G": g_fn, "Gt": g_tilde_fn, "Gb": g_bar_fn}[kind]
        for z in (0.3, 0.55 + 0.2j, -0.4):
            a = fn(z, params, method="integral")
            b = fn(z, params, method="product")
            assert abs(a - b) < 1e-8 * abs(a)

    @pytest.mark.parametrize("params", [P1, P2, P3])
    def test_pair_identity_g_gtilde(self, params):
        # product-consistent orientation: G(z) G~(z) (z/h) sin(pi h/g) / sin(pi z/g) = 1
        hb, g = params.hbar, params.gamma_c
        rng = np.random.default_rng(5)
        for _ in range(8):
            z = complex(rng.uniform(0.05, 0.9), rng.uniform(-0.3, 0.3))
            lhs = g_fn(z, params) * g_tilde_fn(z, params)
            rhs = (hb / z) * np.sin(np.pi * z / g) / np.sin(np.pi * hb / g)
            assert abs(lhs - rhs) < 1e-8 * abs(rhs)

    @pytest.mark.parametrize("params", [P1, P2])
    def test_pair_identity_g_bar(self, params):
        hb, g = params.hbar, params.gamma_c
        for z in (0.4, 0.13 + 0.21j, -0.35):
            ref = (np.pi * z / g) / np.sin(np.pi * z / g)
            a = g_bar_fn(z, params) * g_bar_fn(-z, params)
            b = g_bar_fn(z, params) * g_bar_fn(z - hb, params)
            assert abs(a - ref) < 1e-8 * abs(ref)
            assert abs(b - ref) < 1e-8 * abs(ref)

    def test_g_zero_real_positive(self):
        for params in (P1, P2, P3):
            g0 = g_fn(0.0, params)
            gt0 = g_tilde_fn(0.0, params)
            assert abs(g0.imag) < 1e-12 and g0.real > 0
            assert abs(gt0.imag) < 1e-12 and gt0.real > 0


class TestZetaFunctions:
    def test_zeta_bar_zero(self):
        assert abs(zeta_bar_fn(0.0, P1) - np.sqrt(np.pi)) < 1e-10

    def test_zeta_at_minus_hbar_exact_zero(self):
        # Gamma(0) in the denominator ratio makes the prefactor vanish exactly
        assert zeta_fn(-1.0, P1) == 0.0

    def test_zeta_tilde_symmetric_composite(self):
        # zeta~(z) zeta~(-z) reduces via the pair identities to elementary factors
        hb, g = P2.hbar, P2.gamma_c
        z = 0.37
        lhs = zeta_tilde_fn(z, P2) * zeta_tilde_fn(-z, P2)
        gt0 = g_tilde_fn(0.0, P2)
        gr = (
            gamma_fn(0.5 + z / (2 * hb))
            * gamma_fn(0.5 - z / (2 * hb))
            / (gamma_fn(z / (2 * hb)) * gamma_fn(-z / (2 * hb)))
        )
        rhs = gr * g_tilde_fn(z, P2) ** 2 / gt0
        assert abs(lhs - rhs) < 1e-9 * abs(rhs)


class TestTraceConstant:
    def test_empty_is_one(self):
        assert trace_constant(0, 0, 0, 0, P1) == 1.0

    def test_condition_error(self):
        with pytest.raises(ConditionError):
            trace_constant(2, 0, 0, 0, P1)

    def test_type_i_pair_constant(self):
        # closed-form check of the assembled constant for (N,M,n,m)=(0,2,0,1)
        hb, g = P2.hbar, P2.gamma_c
        a = trace_constant(0, 2, 0, 1, P2)
        g0 = g_fn(0.0, P2)
        expected = -hb * np.sqrt(2 * hb) * np.sqrt(g0) / (g**3 * gamma_fn(1 + hb / g) ** 2)
        assert abs(a - expected) < 1e-10 * abs(expected)

    def test_type_ii_pair_constant(self):
        hb, g = P2.hbar, P2.gamma_c
        a = trace_constant(2, 0, 1, 0, P2)
        gt0 = g_tilde_fn(0.0, P2)
        expected = -hb * np.sqrt(2 * hb) * np.sqrt(gt0) / (g**3 * gamma_fn(1 - hb / g) ** 2)
        assert abs(a - expected) < 1e-10 * abs(expected)

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ydtrace.engine import (
    FieldFactor,
    FieldKind,
    OperatorProduct,
    check_neutrality,
    pairwise_kernel,
    reduce_product,
    trace_ratio_integral,
    trace_ratio_product,
)
from ydtrace.errors import DomainError, LatticeZeroError, NeutralityError, UnreducedError
from ydtrace.special import DeformParams

P = DeformParams(hbar=1.0, gamma=2.0)
P3 = DeformParams(hbar=1.0, gamma=3.0)


def phi(w, k=1):
    return FieldFactor(FieldKind.PHI_MINUS, w, k)


def eta(z, p=1):
    return FieldFactor(FieldKind.ETA_PLUS, z, p)


def neutral_pair(w, w2, z, z2):
    return OperatorProduct.of(phi(w), phi(w2, -1), eta(z), eta(z2, -1))


class TestReduction:
    def test_mu_minus(self):
        prod = OperatorProduct.of(FieldFactor(FieldKind.MU_MINUS, 0.2, 1))
        red = reduce_product(prod, P)
        assert [f.kind for f in red.factors] == [FieldKind.PHI_MINUS, FieldKind.PHI_MINUS]
        assert red.factors[0].argument == 0.2 + P.hbar
        assert red.factors[1].argument == 0.2
        assert red.sign_exponent == 0

    def test_phi_plus(self):
        prod = OperatorProduct.of(FieldFactor(FieldKind.PHI_PLUS, 0.5, 1))
        red = reduce_product(prod, P)
        assert [f.kind for f in red.factors] == [FieldKind.ETA_PLUS, FieldKind.ETA_PLUS]
        assert red.factors[0].argument == 0.5
        assert red.factors[1].argument == 0.5 - P.hbar
        assert red.sign_exponent == 1

    def test_irreducible_unchanged(self):
        prod = neutral_pair(0.0, 0.3, 0.2, -0.1)
        assert reduce_product(prod, P) == prod

    def test_idempotent(self):
        prod = OperatorProduct.of(
            FieldFactor(FieldKind.MU_MINUS, 0.1, 2), FieldFactor(FieldKind.PHI_PLUS, 0.4, -1)
        )
        once = reduce_product(prod, P)
        assert reduce_product(once, P) == once


class TestNeutrality:
    def test_balanced(self):
        assert check_neutrality(OperatorProduct.of(phi(0.1), phi(0.4, -1)))

    def test_single_eta(self):
        assert not check_neutrality(OperatorProduct.of(eta(0.2)))

    def test_unbalanced_powers(self):
        assert not check_neutrality(OperatorProduct.of(phi(0.1, 2), phi(0.4, -1)))

    def test_unreduced_raises(self):
        with pytest.raises(UnreducedError):
            check_neutrality(OperatorProduct.of(FieldFactor(FieldKind.MU_MINUS, 0.1, 1)))

    def test_trace_rejects_non_neutral(self):
        with pytest.raises(NeutralityError):
            trace_ratio_product(OperatorProduct.of(phi(0.1), eta(0.2)), P)

    def test_zero_power_rejected(self):
        with pytest.raises(ValueError):
            FieldFactor(FieldKind.PHI_MINUS, 0.1, 0)


class TestTraceRatio:
    def test_empty(self):
        empty = OperatorProduct.of()
        assert trace_ratio_product(empty, P) == 1.0
        assert trace_ratio_integral(empty, P) == 1.0

    def test_exact_cancellation(self):
        prod = neutral_pair(0.1, 0.1, 0.4, 0.4)
        assert abs(trace_ratio_product(prod, P) - 1.0) < 1e-12
        assert abs(trace_ratio_integral(prod, P) - 1.0) < 1e-12

    @pytest.mark.parametrize("params", [P, P3, DeformParams(1.0, 2.0 + 0.5j)])
    def test_dual_representation(self, params):
        prod = neutral_pair(0.0, 0.42, -0.3, 0.11)
        a = trace_ratio_product(prod, params)
        b = trace_ratio_integral(prod, params)
        assert abs(a - b) < 1e-10 * abs(a)

    def test_factor_order_irrelevant_exactly(self):
        a = trace_ratio_product(neutral_pair(0.0, 0.3, 0.25, -0.15), P)
        b = trace_ratio_product(
            OperatorProduct.of(eta(-0.15, -1), phi(0.3, -1), eta(0.25), phi(0.0)), P
        )
        assert a == b

    def test_union_factorizes_into_pair_kernels(self):
        # the union value is the product over ALL pairs, including the
        # cross pairs between the neutral clusters; factorization into the
        # two cluster values alone does not hold (connected correlations)
        p1 = neutral_pair(0.0, 0.3, 0.25, -0.15)
        p2 = neutral_pair(0.05, -0.2, 0.33, 0.12)
        union = OperatorProduct.of(*(p1.factors + p2.factors))
        v = trace_ratio_product(union, P)
        w = trace_ratio_integral(union, P)
        assert abs(v - w) < 1e-10 * abs(v)
        phis = [(f.argument, f.power) for f in union.factors if f.kind is FieldKind.PHI_MINUS]
        etas = [(f.argument, f.power) for f in union.factors if f.kind is FieldKind.ETA_PLUS]
        combo = np.prod(
            [pairwise_kernel(z - w_, k, p, P) for w_, k in phis for z, p in etas]
        )
        assert abs(v - combo) < 1e-10 * abs(v)

    def test_union_with_cancelling_cluster_is_invariant(self):
        # a cluster whose phi and eta factors cancel pairwise contributes
        # nothing, including through its cross pairs
        p1 = neutral_pair(0.0, 0.3, 0.25, -0.15)
        trivial = neutral_pair(0.07, 0.07, -0.22, -0.22)
        union = OperatorProduct.of(*(p1.factors + trivial.factors))
        a = trace_ratio_product(union, P)
        b = trace_ratio_product(p1, P)
        assert abs(a - b) < 1e-11 * abs(b)

    def test_lattice_zero_rejected(self):
        # z - w = gamma + 0*2hbar = 2.0 sits on the lattice for gamma=2
        with pytest.raises(LatticeZeroError):
            trace_ratio_product(neutral_pair(0.0, 0.3, 2.0, -0.15), P)

    def test_integral_domain_error(self):
        with pytest.raises(DomainError):
            trace_ratio_integral(neutral_pair(0.0, 0.4, 3.2, 0.1), P3)

    @given(
        w=st.floats(-0.5, 0.5), w2=st.floats(-0.5, 0.5),
        z=st.floats(-0.5, 0.5), z2=st.floats(-0.5, 0.5),
        gamma=st.floats(1.6, 3.4),
    )
    @settings(max_examples=25, deadline=None)
    def test_dual_representation_random(self, w, w2, z, z2, gamma):
        params = DeformParams(1.0, gamma)
        prod = neutral_pair(w, w2, z, z2)
        a = trace_ratio_product(prod, params)
        b = trace_ratio_integral(prod, params)
        assert abs(a - b) < 1e-9 * max(abs(a), 1e-3)


class TestPairwiseKernel:
    def test_zero_exponent(self):
        assert pairwise_kernel(0.5, 0, 3, P) == 1.0
        assert pairwise_kernel(0.5, 2, 0, P) == 1.0

    def test_exponent_law(self):
        k11 = pairwise_kernel(0.5, 1, 1, P)
        k23 = pairwise_kernel(0.5, 2, 3, P)
        assert abs(k23 - k11**6) < 1e-12 * abs(k23)

    def test_kernel_products_reproduce_trace(self):
        prod = neutral_pair(0.0, 0.3, 0.25, -0.15)
        pairs = [
            (0.25 - 0.0, 1), (-0.15 - 0.0, -1), (0.25 - 0.3, -1), (-0.15 - 0.3, 1),
        ]
        combo = np.prod([pairwise_kernel(d, 1, e, P) for d, e in pairs])
        ref = trace_ratio_integral(prod, P)
        assert abs(combo - ref) < 1e-11 * abs(ref)

    def test_kernel_matches_product_route_through_neutral_sums(self):
        # same check against the independent lattice route
        prod = neutral_pair(0.1, -0.2, 0.3, 0.05)
        pairs = [(0.3 - 0.1, 1), (0.05 - 0.1, -1), (0.3 + 0.2, -1), (0.05 + 0.2, 1)]
        combo = np.prod([pairwise_kernel(d, 1, e, P3) for d, e in pairs])
        ref = trace_ratio_product(prod, P3)
        assert abs(combo - ref) < 1e-10 * abs(ref)

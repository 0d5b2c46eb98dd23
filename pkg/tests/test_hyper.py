import math
import random
from fractions import Fraction as F

import mpmath
import pytest
from hypothesis import given, strategies as st

from norlund.errors import ConvergenceViolation, DegenerateParameters, PoleError
from norlund.hyper import (HyperSpec, buhring_expansion_eval, buhring_lhs, buhring_p4_residual,
                          eval_pfq, gauss_connection_residual, multiseries_sides,
                          multiseries_transform_residual, pfq, pfq_terminating, sheppard_residual_p3)
from norlund.params import ParamSet

from conftest import param_sets, rationals, rel_close


def test_elementary_series():
    assert rel_close(pfq([1], [], 0.5), 2, 1e-14)
    a, b, z = 0.3, 1.7, 0.4
    assert rel_close(pfq([a, b], [b], z), (1 - z) ** -a, 1e-14)
    assert rel_close(pfq([F(1, 2), F(1, 2)], [F(3, 2)], 1), math.pi / 2, 1e-12)


def test_pfq_at_one_matches_reference():
    up, lo = [F(1, 3), F(2, 5), F(-7, 4)], [F(6, 5), F(3, 2)]
    ref = complex(mpmath.hyp3f2(*[mpmath.mpf(x.numerator) / x.denominator for x in up + lo], 1))
    assert rel_close(pfq(up, lo, 1), ref, 1e-12)


def test_terminating_is_exact():
    v = pfq_terminating([F(1, 2)], [F(3, 2)], 3, F(1, 3))
    assert isinstance(v, F)
    assert v == sum(F(1) * mpmath_free_term(k) for k in range(4))


def mpmath_free_term(k):
    t = F(1)
    for j in range(k):
        t *= F(-3 + j) * (F(1, 2) + j) / ((F(3, 2) + j) * (j + 1)) * F(1, 3)
    return t


def test_preconditions():
    with pytest.raises(ConvergenceViolation):
        pfq([1, 2, 3], [4], 0.1)
    with pytest.raises(ConvergenceViolation):
        pfq([1, 1], [F(3, 2)], 1)
    with pytest.raises(PoleError):
        HyperSpec((F(1, 2),), (-2,))
    assert HyperSpec((-1, F(1, 2)), (-3,)).terminating_index == 1


def test_gauss_connection():
    r = gauss_connection_residual(F(1, 3), F(1, 5), F(7, 4), 0.3)
    assert r.verdict == "pass" and r.rel_residual < 1e-10
    s = gauss_connection_residual(F(1, 5), F(1, 3), F(7, 4), 0.3)
    assert abs(complex(r.lhs) - complex(s.lhs)) < 1e-15
    with pytest.raises(DegenerateParameters):
        gauss_connection_residual(F(1, 2), F(1, 2), 2, 0.3)
    # both sides stay finite as z approaches 1 when Re(beta-alpha1-alpha2) > 0
    for z in (0.9, 0.97, 0.99):
        near_one = gauss_connection_residual(F(1, 3), F(1, 5), F(7, 4), z)
        assert math.isfinite(abs(complex(near_one.lhs))) and near_one.passed


def test_expansion_two_routes():
    P = ParamSet((F(1, 10), F(3, 10), F(7, 10)), (F(-1, 5), F(1, 2), F(19, 10)))
    for s in (1, 2, 3):
        v = buhring_expansion_eval(P, s, 0.9)
        assert rel_close(v, buhring_lhs(P, s, 0.9), 1e-8)
    Q = ParamSet((F(1, 10), F(3, 7)), (F(-1, 5), F(1, 2)))
    assert rel_close(buhring_expansion_eval(Q, 1, 0.8), buhring_lhs(Q, 1, 0.8), 1e-10)


@given(st.integers(0, 5), rationals(-3, 3, 7), rationals(-3, 3, 7), rationals(-3, 3, 5), rationals(-3, 3, 5))
def test_sheppard_exact(n, a1, a2, b1, b2):
    try:
        r = sheppard_residual_p3(n, a1, a2, b1, b2)
    except PoleError:
        return
    assert r.exact_zero


def test_sheppard_n0():
    r = sheppard_residual_p3(0, F(1, 2), F(1, 3), F(1, 4), F(1, 5))
    assert r.lhs == 1 and r.rhs == 1


@given(st.integers(0, 6), st.lists(rationals(-3, 3, 11), min_size=6, max_size=6))
def test_p4_double_sum_exact(n, xs):
    try:
        r = buhring_p4_residual(n, *xs)
    except PoleError:
        return
    assert r.exact_zero


@given(param_sets(4), st.integers(0, 6))
def test_multiseries_exact(P, n):
    r = multiseries_transform_residual(P, n)
    assert r.exact_zero


def test_multiseries_n0_and_p3_reduction(rng):
    P = ParamSet((F(1, 3), F(2, 7), F(-1, 5)), (F(3, 4), F(5, 6), F(1, 9)))
    lhs, rhs = multiseries_sides(P, 0)
    assert lhs == 1 and rhs == 1
    lhs, rhs = multiseries_sides(P, 4)
    assert lhs == rhs

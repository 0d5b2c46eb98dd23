import random
from fractions import Fraction as F
from math import factorial

import pytest
from hypothesis import given, strategies as st

from norlund.coeffs import (METHODS, F_symmetric, g_bernoulli, g_closed_small_n, g_closed_small_p,
                            g_connect, g_recurrence_n, g_recurrence_p, g_table, g_young,
                            g_young_enumerated, recurrence_p_inner_agreement)
from norlund.params import CoeffTable, ParamSet
from norlund.scalar import rising_factorial

from conftest import param_sets, random_params


def p2_closed(P, k, n):
    other = P.a[2 - k]
    return rising_factorial(P.b[0] - other, n) * rising_factorial(P.b[1] - other, n) / factorial(n)


def test_g_young_examples():
    P = ParamSet((0, F(1, 2)), (1, F(3, 2)))
    assert g_young(P, 2, 1).values[1] == F(3, 2)
    assert g_young(P, 2, 0).values == (1,)


@given(param_sets(2), st.integers(1, 2))
def test_p2_closed_form_every_method(P, k):
    ref = [p2_closed(P, k, n) for n in range(11)]
    for m in METHODS:
        assert list(g_table(P, k, 10, m).values) == ref, m


def test_p1_recurrence():
    P = ParamSet((F(1, 3),), (F(5, 4),))
    assert g_recurrence_n(P, 1, 4).values == (1, 0, 0, 0, 0)


@pytest.mark.parametrize("p,N", [(3, 6), (4, 8), (5, 5)])
def test_cross_method_exact(p, N, rng):
    for _ in range(5):
        P = random_params(rng, p)
        k = rng.randint(1, p)
        ref = g_young(P, k, N).values
        assert g_recurrence_n(P, k, N).values == ref
        assert g_recurrence_p(P, k, N).values == ref
        assert g_bernoulli(P, k, N, "psi").values == ref
        assert g_bernoulli(P, k, N, "tilde").values == ref
        assert g_young_enumerated(P, k, N) == ref[N]


def test_inner_anchor_independence(rng):
    for p in (3, 4, 5):
        P = random_params(rng, p)
        assert recurrence_p_inner_agreement(P, 1, 5)


def test_connection_in_k(rng):
    P = random_params(rng, 3)
    t3 = g_young(P, 3, 6)
    t1 = g_connect(P, 1, 3, t3, 6)
    assert t1.values == g_young(P, 1, 6).values
    assert g_connect(P, 3, 1, t1, 6).values == t3.values


def test_connection_equal_anchors():
    P = ParamSet((F(1, 3), F(1, 3), F(1, 7)), (F(1, 2), F(2, 5), F(9, 4)))
    t2 = g_young(P, 2, 5)
    assert g_connect(P, 1, 2, t2, 5).values == t2.values


def test_closed_small_n(rng):
    P = random_params(rng, 5)
    assert g_closed_small_n(P, 0) == 1
    Q = random_params(rng, 2)
    assert g_closed_small_n(Q, 1) == (Q.b[1] - Q.a[0]) * (Q.b[0] - Q.a[0])
    for n in range(4):
        assert g_closed_small_n(P, n) == g_young(P, P.p, n).values[n]


def test_closed_small_p(rng):
    for _ in range(3):
        P = random_params(rng, 3)
        for s in (1, 2, 3):
            ref = g_young(P, s, 6).values
            assert [g_closed_small_p(P, s, n) for n in range(7)] == list(ref)
    Q = random_params(rng, 2)
    for s in (1, 2):
        assert g_closed_small_p(Q, s, 4) == p2_closed(Q, s, 4)
    R = random_params(rng, 4)
    perm = R.permuted(perm_b=[2, 0, 3, 1])
    assert [g_closed_small_p(R, 2, n) for n in range(4)] == [g_closed_small_p(perm, 2, n) for n in range(4)]


def test_F_symmetric(rng):
    P = random_params(rng, 4)
    assert F_symmetric(P, 0, 1) == 1
    vals = {F_symmetric(P, 3, k) for k in range(1, 5)}
    assert len(vals) == 1
    v = vals.pop()
    assert F_symmetric(P.permuted(perm_a=[3, 1, 0, 2]), 3, 1) == v
    assert F_symmetric(P.permuted(perm_b=[1, 2, 3, 0]), 3, 2) == v


def test_table_round_trip(rng):
    P = random_params(rng, 3)
    t = g_table(P, 2, 4, "bernoulli_tilde")
    back = CoeffTable.from_json(t.to_json())
    assert back.values == t.values and back.method == "bernoulli_tilde"


def test_float_mode_agrees(rng):
    P = random_params(rng, 4)
    Pf = ParamSet(tuple(complex(x) for x in P.a), tuple(complex(x) for x in P.b))
    ex = g_young(P, 2, 6).values
    fl = g_young(Pf, 2, 6).values
    assert g_young(Pf, 2, 6).mode == "float"
    for x, y in zip(ex, fl):
        assert abs(complex(x) - y) <= 1e-12 * max(1.0, abs(complex(x)))

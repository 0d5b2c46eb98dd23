import math
from fractions import Fraction as F

import mpmath
import pytest

from norlund.errors import ConvergenceViolation
from norlund.gfunction import (POLY_VARIANTS, g2ppp_closed_p2, g2ppp_eval, g2ppp_near1,
                               g2ppp_polyseries, gp0pp_closed, gp0pp_eval, gp0pp_near0, gp0pp_near1,
                               gp0pp_near1_value, mellin_check, mellin_correction_polynomial,
                               shift_parameters)
from norlund.params import ParamSet
from norlund.scalar import gamma_ratio

from conftest import rel_close

P2 = ParamSet((F(1, 10), F(2, 5)), (F(3, 4), F(6, 5)))
P3 = ParamSet((F(1, 2), F(4, 5), F(11, 10)), (F(9, 10), F(7, 10), F(13, 10)))


def meijer_p0(P, z):
    return complex(mpmath.meijerg([[], [complex(x) for x in P.b]], [[complex(x) for x in P.a], []], z))


def meijer_2p(P, k, s, z):
    rest = [complex(P.a[i]) for i in range(P.p) if i + 1 not in (k, s)]
    return complex(mpmath.meijerg([[complex(x) for x in P.b], []],
                                  [[complex(P.a[k - 1]), complex(P.a[s - 1])], rest], z))


def test_p1_expansions():
    unit = ParamSet((0,), (1,))
    ex = gp0pp_near1(unit, 1, 6)
    for z in (0.2, 0.5, 0.9):
        assert rel_close(ex.evaluate(z), 1, 1e-15)
    assert rel_close(gp0pp_eval(ParamSet((0,), (2,)), 0.5), 0.5, 1e-15)
    assert rel_close(gp0pp_closed(ParamSet((0,), (2,)), 0.5), 0.5, 1e-15)


def test_zero_outside_disk():
    assert gp0pp_eval(P3, 2) == 0
    assert gp0pp_eval(P2, 1.5) == 0
    with pytest.raises(ConvergenceViolation):
        gp0pp_eval(P3, -1)


def test_p2_closed_form_routes():
    for z in (0.3, 0.5, 0.7):
        ref = gp0pp_closed(P2, z)
        assert rel_close(gp0pp_near0(P2, z), ref, 1e-10)
        assert rel_close(gp0pp_near1_value(P2, z), ref, 1e-10)
        assert rel_close(meijer_p0(P2, z), ref, 1e-10)


def test_anchor_independence():
    v1 = gp0pp_near1_value(P3, 0.8, k=1)
    v2 = gp0pp_near1_value(P3, 0.8, k=2)
    assert rel_close(v1, v2, 1e-10)
    assert rel_close(v1, meijer_p0(P3, 0.8), 1e-10)


def test_overlap():
    for z in (0.5, 0.6):
        assert rel_close(gp0pp_near0(P3, z), gp0pp_near1_value(P3, z), 1e-10)


def test_leading_behaviour_at_zero():
    P = ParamSet((F(1, 5), F(2, 3), F(9, 7)), (F(6, 5), F(3, 2), F(2, 1)))
    a0 = P.a[0]
    lead = gamma_ratio([x - a0 for x in P.a[1:]], [x - a0 for x in P.b])
    err = [abs(gp0pp_near0(P, z) / (z ** float(a0) * lead) - 1) for z in (1e-6, 1e-9)]
    assert err[1] < 1e-3
    # the next term is smaller by z^(a_2-a_1)
    assert err[1] < err[0] * 1e-3 ** float(P.a[1] - a0) * 1.1


def test_g2ppp_p2_closed_form():
    Q = ParamSet((F(1, 3), F(1, 7)), (F(1, 5), F(1, 2)))
    for z in (0.8, 0.9):
        ref = g2ppp_closed_p2(Q, z)
        assert rel_close(g2ppp_eval(Q, 1, 2, z), ref, 1e-10)
        assert rel_close(meijer_2p(Q, 1, 2, z), ref, 1e-10)


def test_g2ppp_variant_independence():
    x = g2ppp_eval(P3, 1, 2, 0.8, variant="v535")
    y = g2ppp_eval(P3, 1, 2, 0.8, variant="v536")
    assert rel_close(x, y, 1e-10)
    assert rel_close(x, meijer_2p(P3, 1, 2, 0.8), 1e-10)
    ex = g2ppp_near1(P3, 1, 2, 40)
    assert rel_close(ex.evaluate(0.8), x, 1e-8)


def test_polyseries_variants():
    vals = {v: g2ppp_polyseries(P3, 1, 2, 0.9, v) for v in POLY_VARIANTS}
    for v in POLY_VARIANTS:
        for w in POLY_VARIANTS:
            assert rel_close(vals[v], vals[w], 1e-8)
    assert rel_close(g2ppp_polyseries(P3, 1, 2, 0.85), g2ppp_eval(P3, 1, 2, 0.85), 1e-8)


def test_near_equal_anchor_limit():
    for eps in (1e-3, 1e-6, 1e-9):
        f = math.pi * eps / math.sin(math.pi * eps)
        assert abs(f - 1) < 2 * eps
    # nearly equal anchors keep v531 finite and consistent
    Q = ParamSet((F(1, 2), F(1, 2) + F(1, 10 ** 6), F(11, 10)), P3.b)
    x = g2ppp_polyseries(Q, 1, 2, 0.9, "v531")
    y = g2ppp_polyseries(Q, 1, 2, 0.9, "v522")
    assert rel_close(x, y, 1e-6)


def test_shift():
    assert shift_parameters(P3, 0) == P3
    al = F(1, 3)
    S = shift_parameters(P3, al)
    assert S.psi_p == P3.psi_p
    z = 0.7
    assert rel_close(z ** float(al) * gp0pp_eval(P3, z), gp0pp_eval(S, z), 1e-12)


def test_mellin_examples():
    r = mellin_check(ParamSet((0,), (2,)), 1)
    assert r.passed and rel_close(r.rhs, 0.5, 1e-15)
    assert mellin_check(P2, 1.3, tol=1e-8).passed
    # psi_p = 0
    Z = ParamSet((F(1, 5), F(3, 5)), (F(1, 2), F(3, 10)))
    assert Z.psi_p == 0
    assert mellin_correction_polynomial(Z, 1, F(7, 5)) == 1
    assert mellin_check(Z, 1.5, tol=1e-8).passed


def test_correction_polynomial():
    P = ParamSet((F(1, 5), F(3, 5), F(4, 7)), (F(1, 2), F(3, 10), F(-10, 7)))
    assert P.psi_p == -2
    s0 = F(3, 2)
    vals = [mellin_correction_polynomial(P, k, s0) for k in (1, 2, 3)]
    assert vals[0] == vals[1] == vals[2]
    # degree two in s: third differences vanish
    q = [mellin_correction_polynomial(P, 1, s0 + j) for j in range(4)]
    assert q[3] - 3 * q[2] + 3 * q[1] - q[0] == 0
    assert mellin_check(P, 1.7, tol=1e-7).passed

import math
from fractions import Fraction as F
from math import factorial

import pytest

from norlund.buhring import (D_coeffs, f_coeffs, f_from_g, h_closed, h_closed_p3, h_closed_p4,
                             h_from_D, h_multisum)
from norlund.coeffs import g_young
from norlund.errors import ConvergenceViolation, NorlundError
from norlund.params import ParamSet
from norlund.scalar import gamma, gamma_ratio, rising_factorial

from conftest import rel_close


def admissible(rng, p, tries=200):
    """Rational parameters with Re(1-b_i+a_s) > 0 for every i and s, away from integer clashes."""
    for _ in range(tries):
        a = tuple(F(rng.randint(0, 150), 100) for _ in range(p))
        b = tuple(F(rng.randint(-100, 50), 100) for _ in range(p))
        P = ParamSet(a, b)
        diffs = [x - y for x in a + b for y in a + b if x is not y] + [P.psi_p]
        if all(abs(d - round(d)) > F(1, 100) for d in diffs):
            return P
    raise RuntimeError("no admissible draw")


def test_f_leading_coefficient():
    P = ParamSet((0, F(1, 4)), (F(1, 4), F(1, 2)))
    assert P.psi_p == F(1, 2)
    assert abs(f_coeffs(P, 1, 0).values[0] - math.sqrt(math.pi)) < 1e-13
    Q = ParamSet((F(1, 3), F(1, 5), F(2, 7)), (F(3, 4), F(5, 6), F(1, 9)))
    assert rel_close(f_coeffs(Q, 2, 0).values[0], gamma(1 - Q.psi_p), 1e-13)


def test_f_inverts_to_g(rng):
    P = admissible(rng, 3)
    g = g_young(P, 1, 6)
    f = f_from_g(g, P)
    lead = gamma(1 - P.psi_p)
    for n in range(7):
        back = f.values[n] * complex(rising_factorial(P.psi_p, n)) / lead
        assert rel_close(back, g.values[n], 1e-12)


@pytest.mark.parametrize("p", [3, 4])
def test_h_routes_agree(p, rng):
    for _ in range(3):
        P = admissible(rng, p)
        s = rng.randint(1, p)
        ms = h_multisum(P, s, 4).values
        cl = h_closed(P, s, 4).values
        desc = P.permuted(perm_b=sorted(range(p), key=lambda i: P.b[i], reverse=True))
        fd = h_from_D(desc, s, 4).values
        for x, y, z in zip(ms, cl, fd):
            assert rel_close(x, y, 1e-10)
            assert rel_close(x, z, 1e-9)


def test_h_p2_is_gauss_coefficient(rng):
    P = admissible(rng, 2)
    for s in (1, 2):
        a_s, a_o = P.a[s - 1], P.a[2 - s]
        al1, al2 = 1 - P.b[0] + a_s, 1 - P.b[1] + a_s
        nu = P.psi_p - 1
        lead = gamma_ratio([al1, al2, nu], [P.b[0] - a_o, P.b[1] - a_o])
        h = h_multisum(P, s, 5).values
        for n in range(6):
            ref = lead * complex(rising_factorial(al1, n) * rising_factorial(al2, n)
                                 / (rising_factorial(1 - nu, n) * factorial(n)))
            assert rel_close(h[n], ref, 1e-10)


def test_h_closed_b_permutation(rng):
    P = admissible(rng, 3)
    swapped = P.permuted(perm_b=[1, 0, 2])
    for n in range(3):
        assert rel_close(h_closed_p3(P, 2, n), h_closed_p3(swapped, 2, n), 1e-10)
    Q = admissible(rng, 4)
    for n in range(2):
        assert rel_close(h_closed_p4(Q, 1, n), h_closed_p4(Q.permuted(perm_b=[2, 3, 0, 1]), 1, n), 1e-10)


def test_D_variants_agree(rng):
    for p in (3, 4):
        P = admissible(rng, p)
        x = D_coeffs(P, 1, 2, 3, "v535").values
        y = D_coeffs(P, 1, 2, 3, "v536").values
        for u, v in zip(x, y):
            assert rel_close(u, v, 1e-10)


def test_multisum_reports_order():
    P = ParamSet((F(1, 10), F(3, 10), F(7, 10)), (F(12, 10), F(15, 10), F(19, 10)))
    with pytest.raises(ConvergenceViolation) as exc:
        h_multisum(P, 1, 2)
    assert isinstance(exc.value, NorlundError)


def test_D_gamma_pole_is_continuous():
    # 2 + a_k + a_s - b_1 - b_2 = -1 makes Gamma(e+n) infinite for n = 0, 1
    a = (F(19, 10), F(3, 2), F(33, 50))
    b1, b3 = F(18, 5), F(-24, 25)
    b2 = 3 + a[0] + a[1] - b1
    at = D_coeffs(ParamSet(a, (b1, b2, b3)), 1, 2, 3, "v535").values
    d = F(1, 10 ** 7)
    up = D_coeffs(ParamSet(a, (b1, b2 + d, b3)), 1, 2, 3, "v535").values
    down = D_coeffs(ParamSet(a, (b1, b2 - d, b3)), 1, 2, 3, "v535").values
    for x, y, z in zip(at, up, down):
        assert rel_close(x, (y + z) / 2, 1e-9)
        assert rel_close(x, y, 1e-4)

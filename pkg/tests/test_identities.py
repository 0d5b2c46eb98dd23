import cmath
import random
from fractions import Fraction as F

import pytest

from norlund import identities as ids
from norlund.identities import (gauss_route_540, run_suite, verify_3f2_circular, verify_connection_540,
                                verify_corollary_37, verify_identity1, verify_identity2, verify_ptolemy,
                                verify_three_term_D, verify_three_term_G)
from norlund.params import ParamSet

P3 = ParamSet((F(1, 2), F(4, 5), F(11, 10)), (F(-3, 20), F(1, 12), F(7, 20)))
P4 = ParamSet((F(1, 2), F(4, 5), F(11, 10), F(13, 20)), (F(-3, 20), F(1, 12), F(7, 20), F(3, 5)))


def complex_params(rng, p):
    return ParamSet(tuple(complex(rng.uniform(-2, 2), rng.uniform(-1, 1)) for _ in range(p)),
                    tuple(complex(rng.uniform(-2, 2), rng.uniform(-1, 1)) for _ in range(p)))


def test_ptolemy_examples(rng):
    r = verify_ptolemy(ParamSet((F(1, 3),), (F(9, 7),)))
    assert r.abs_residual == 0
    r = verify_ptolemy(ParamSet((0, 0.3), (0.1, 0.7)))
    assert abs(complex(r.rhs) - 1) < 1e-15 and r.rel_residual < 1e-13
    for _ in range(5):
        r = verify_ptolemy(complex_params(rng, 8))
        assert r.rel_residual < 1e-10


def test_ptolemy_degenerate_is_skipped():
    r = verify_ptolemy(ParamSet((F(1, 3), F(4, 3)), (F(1, 2), F(1, 5))))
    assert r.verdict == "skipped" and "continuous extension" in r.skipped_reason


def test_ptolemy_continuity_trend():
    # approaching an integer a-difference, the sum tends to the same right side
    res = []
    for eps in (1e-2, 1e-4, 1e-6):
        r = verify_ptolemy(ParamSet((F(1, 3), F(4, 3) + F(eps)), (F(1, 2), F(1, 5))))
        res.append(r.rel_residual)
    assert all(x < 1e-6 for x in res)


def test_identity1_examples():
    assert verify_identity1(P3, 0, 1e-9).passed
    assert verify_identity1(P3, 1, 1e-9).passed
    assert verify_identity1(P4, 0, 1e-9).passed
    circ = verify_3f2_circular(P3, 1, "first", 1e-9)
    assert circ.passed


def test_identity2_examples(rng):
    for s in (1, 2, 3):
        assert verify_identity2(P3, 2, s, 1e-9).passed
    for _ in range(5):
        P = complex_params(rng, 4)
        a, b = verify_identity2(P, 0, 1), verify_ptolemy(P)
        assert a.identity_id == b.identity_id == "ptolemy"
        assert a.lhs == b.lhs and a.rhs == b.rhs and a.rel_residual == b.rel_residual


def test_identity2_exact_params_float_residual():
    P = ParamSet((F(1, 3), F(1, 7)), (F(5, 4), F(2, 9)))
    r = verify_identity2(P, 3, 1)
    assert not r.exact_zero and r.passed


def test_3f2_circular_both_forms():
    for i in (1, 2, 3):
        for which in ("first", "second"):
            r = verify_3f2_circular(P3, i, which, 1e-9)
            assert r.passed, (i, which, r.rel_residual)
    bad = ParamSet(P3.a, (F(3), F(1, 12), F(7, 20)))
    assert verify_3f2_circular(bad, 1).verdict == "skipped"


def test_three_term_G():
    assert verify_three_term_G(P3, 1, 2, 3, 0.8).rel_residual < 1e-8
    assert verify_three_term_G(P4, 1, 2, 4, 0.9).rel_residual < 1e-8
    # a_s = a_i: that sine vanishes and the two remaining terms cancel
    Q = ParamSet((F(1, 2), F(1, 2), F(11, 10)), P3.b)
    assert verify_three_term_G(Q, 1, 2, 3, 0.75).rel_residual < 1e-8


def test_three_term_D():
    assert verify_three_term_D(P3, 1, 2, 3, 0).passed
    assert verify_three_term_D(P3, 1, 2, 3, 2).rel_residual < 1e-8
    assert verify_three_term_D(P4, 2, 3, 4, 1).rel_residual < 1e-8


def test_connection():
    Q = ParamSet((F(1, 10), F(2, 5)), (F(-1, 5), F(1, 4)))
    for s in (1, 2):
        assert verify_connection_540(Q, s, 0.75).passed
        assert gauss_route_540(Q, s, 0.75).rel_residual < 1e-10
    for s in (1, 2, 3):
        assert verify_connection_540(P3, s, 0.85).rel_residual < 1e-7


def test_three_term_h_relation():
    for n in (0, 3):
        assert verify_corollary_37(P3, n, 1e-9).passed


def test_run_suite_deterministic_and_summarised():
    a = run_suite(3, 2, suites=["ptolemy", "sheppard_p3", "gauss_connection"])
    b = run_suite(3, 2, suites=["ptolemy", "sheppard_p3", "gauss_connection"])
    assert [r.dumps() for r in a if not isinstance(r, dict)] == [r.dumps() for r in b if not isinstance(r, dict)]
    summaries = [r for r in a if isinstance(r, dict)]
    assert [s["identity_id"] for s in summaries] == ["ptolemy", "sheppard_p3", "gauss_connection"]
    assert all("skipped" in s for s in summaries)


def test_run_suite_independent_of_selection():
    alone = run_suite(5, 3, suites=["multiseries"])
    mixed = run_suite(5, 3, suites=["ptolemy", "multiseries"])
    pick = [r.dumps() for r in mixed if not isinstance(r, dict) and r.identity_id == "multiseries"]
    assert pick == [r.dumps() for r in alone if not isinstance(r, dict)]


def test_tolerance_profile():
    t = ids.resolve_tolerances()
    assert t["sheppard_p3"] == 1e-9 and t["identity1"] == 1e-8 and t["connection_540"] == 1e-7
    assert t["ptolemy"] == 1e-10
    t = ids.resolve_tolerances({"multi": 1e-6, "identity2": 1e-5})
    assert t["mellin"] == 1e-6 and t["identity2"] == 1e-5


def test_run_suite_fifty_trials_p_up_to_4():
    out = run_suite(11, 50, p_values=[1, 2, 3, 4])
    fails = [r for r in out if not isinstance(r, dict) and r.verdict == "fail"]
    assert fails == []

import random
import sys
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings, strategies as st

from norlund.params import ParamSet

settings.register_profile("default", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def rationals(lo=-2, hi=2, den=12):
    """Small-denominator rationals in [lo, hi]."""
    return st.builds(Fraction, st.integers(lo * den, hi * den), st.just(den))


def param_sets(p, lo=-2, hi=2):
    return st.builds(lambda a, b: ParamSet(tuple(a), tuple(b)),
                     st.lists(rationals(lo, hi), min_size=p, max_size=p),
                     st.lists(rationals(lo, hi), min_size=p, max_size=p))


def random_params(rng: random.Random, p: int, lo=-2.0, hi=2.0, den=100) -> ParamSet:
    def q():
        return Fraction(rng.randint(int(lo * den), int(hi * den)), den)
    return ParamSet(tuple(q() for _ in range(p)), tuple(q() for _ in range(p)))


def rel_close(x, y, rel):
    x, y = complex(x), complex(y)
    return abs(x - y) <= rel * max(1.0, abs(x), abs(y))


@pytest.fixture
def rng():
    return random.Random(20240601)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for n in sorted(results):
            terminalreporter.write_line(results[n])

"""Double-exponential (tanh-sinh) quadrature on (0, 1).

The integrand receives both x and 1 - x, each computed without cancellation,
so that endpoint factors like (1-x)^(psi-1) stay accurate right up to x = 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from .errors import QuadratureFailure

MAX_LEVELS = 10
# nodes further out than this are dropped once they stop contributing
T_MAX = 6.5


@dataclass
class QuadResult:
    value: complex
    error: float
    levels: int
    nodes: int


def _node(t: float):
    u = 0.5 * math.pi * math.sinh(t)
    if u > 354:
        return 1.0, 0.0, 0.0
    if u < -354:
        return 0.0, 1.0, 0.0
    e = math.exp(-2 * u)
    x = 1 / (1 + e)
    w1 = e / (1 + e)
    weight = 0.5 * math.pi * math.cosh(t) / (2 * math.cosh(u) ** 2)
    return x, w1, weight


def tanh_sinh(f: Callable[[float, float], complex], tol: float = 1e-10,
              min_levels: int = 3) -> QuadResult:
    """Integrate f over (0, 1); f(x, 1-x) is called with both coordinates."""
    cache: dict = {}

    def val(t: float) -> complex:
        if t not in cache:
            x, w1, weight = _node(t)
            if weight == 0.0 or x == 0.0 or w1 == 0.0:
                cache[t] = 0j
            else:
                cache[t] = weight * complex(f(x, w1))
        return cache[t]

    h = 1.0
    acc = 0j
    prev = None
    est = 0j
    for level in range(MAX_LEVELS + 1):
        # level 0 takes every integer multiple of h; later levels add the odd ones
        step, first = (1, 0) if level == 0 else (2, 1)
        k, quiet = 0, 0
        while True:
            t = (first + k * step) * h
            if t > T_MAX:
                break
            v = val(t) + (val(-t) if t != 0 else 0)
            acc += v
            k += 1
            if abs(v) < 1e-18 * max(1.0, abs(acc)):
                quiet += 1
                if quiet >= 3:
                    break
            else:
                quiet = 0
        est = acc * h
        if prev is not None:
            err = abs(est - prev)
            if level >= min_levels and err <= tol * max(1.0, abs(est)):
                return QuadResult(est, err, level, len(cache))
        prev = est
        h /= 2
    raise QuadratureFailure("tanh-sinh did not converge", levels=MAX_LEVELS,
                            estimate=[est.real, est.imag])

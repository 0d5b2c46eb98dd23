"""Generalized hypergeometric series and Bühring's expansion of pF(p-1) at z = 1."""

from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Optional, Sequence

from .buhring import DEFAULT_TOL, f_coeffs, h_from_D, h_multisum
from .errors import ConvergenceViolation, DegenerateParameters, NorlundError, PoleError
from .params import ParamSet
from .report import IdentityReport, term_scale
from .scalar import (gamma_ratio, gamma_ratio_product, is_exact, is_integer_like,
                     is_nonpositive_integer, nearest_integer, rising_factorial, to_exact_fast)
from .series import extrapolated_sum, sum_series, transient_skip

# stagnation tolerance for convergent series summed in floating point
SERIES_TOL = 1e-15


@dataclass(frozen=True)
class HyperSpec:
    """Parameters of pFq; ``terminating_index`` is n when -n is the first upper nonpositive integer."""

    upper: tuple
    lower: tuple
    terminating_index: Optional[int] = field(init=False, default=None)

    def __post_init__(self):
        object.__setattr__(self, "upper", tuple(self.upper))
        object.__setattr__(self, "lower", tuple(self.lower))
        stops = [-nearest_integer(u)[0] for u in self.upper if is_nonpositive_integer(u)]
        object.__setattr__(self, "terminating_index", min(stops) if stops else None)
        for w in self.lower:
            if is_nonpositive_integer(w):
                L = -nearest_integer(w)[0]
                if self.terminating_index is None or L < self.terminating_index:
                    raise PoleError(f"lower parameter {w} is a nonpositive integer", at=str(w))

    @property
    def excess(self):
        return sum(self.lower, 0) - sum(self.upper, 0)


def _terms(spec: HyperSpec, z, count: Optional[int] = None):
    t = 1 if not any(isinstance(x, Fraction) for x in (z, *spec.upper, *spec.lower)) else Fraction(1)
    l = 0
    while count is None or l < count:
        yield t
        num = z
        for u in spec.upper:
            num = num * (u + l)
        den = l + 1
        for w in spec.lower:
            den = den * (w + l)
        t = t * num / den
        l += 1


def pfq_terminating(upper: Sequence, lower: Sequence, n: int, z=1):
    """pFq(-n, upper; lower; z) summed over its n + 1 terms in the input arithmetic."""
    try:
        return sum(_terms(HyperSpec((-n, *upper), tuple(lower)), z, n + 1))
    except ZeroDivisionError:
        raise PoleError("lower parameter hits zero before termination") from None


def eval_pfq(spec: HyperSpec, z, tol: float = SERIES_TOL, max_terms: Optional[int] = None):
    """Sum pFq(upper; lower; z).

    Terminating series are summed over all their terms, exactly for exact
    input.  At z = 1 a convergent pF(p-1) is summed in exact arithmetic with
    power-law extrapolation; otherwise the series is summed in floating point
    until it stagnates.
    """
    p, q = len(spec.upper), len(spec.lower)
    if spec.terminating_index is not None:
        return sum(_terms(spec, z, spec.terminating_index + 1))
    zc = complex(z)
    if p > q + 1:
        raise ConvergenceViolation("non-terminating series with p > q + 1 diverges", p=p, q=q)
    if zc == 1 and p == q + 1:
        ex = spec.excess
        if complex(ex).real <= 0:
            raise ConvergenceViolation("pFq(1) needs Re(sum lower - sum upper) > 0",
                                       excess=str(ex))
        up = [to_exact_fast(u) for u in spec.upper]
        lo = [to_exact_fast(w) for w in spec.lower]
        ex_exact = sum(lo) - sum(up)
        res = extrapolated_sum(_terms(HyperSpec(up, lo), to_exact_fast(1)), [1 + ex_exact],
                               max(tol, 1e-13), max_terms, what="pFq(1)",
                               skip=transient_skip(*up, *lo))
        return complex(res.value)
    if p == q + 1 and abs(zc) >= 1:
        raise ConvergenceViolation("pF(p-1) series needs |z| < 1 or z = 1", z=[zc.real, zc.imag])
    up = [complex(u) for u in spec.upper]
    lo = [complex(w) for w in spec.lower]
    # skip the transient where large parameters still make terms grow
    warm = int(max([abs(x) for x in up + lo] + [0.0])) + 2
    return sum_series(_terms(HyperSpec(up, lo), zc), tol, max_terms, min_terms=warm,
                      what="pFq").value


def pfq(upper: Sequence, lower: Sequence, z, tol: float = SERIES_TOL):
    return eval_pfq(HyperSpec(tuple(upper), tuple(lower)), z, tol)


# ------------------------------------------------------------------- Gauss connection

def gauss_connection_residual(alpha1, alpha2, beta, z, tol: float = 1e-10) -> IdentityReport:
    """2F1(a1,a2;b;1-z) against its two-term expansion in powers of z."""
    nu = beta - alpha1 - alpha2
    if is_integer_like(nu):
        raise DegenerateParameters("beta - alpha1 - alpha2 is an integer", at="nu")
    zc = complex(z)
    lhs = pfq([alpha1, alpha2], [beta], 1 - zc)
    c1 = gamma_ratio_product([beta, nu], [beta - alpha1, beta - alpha2])
    c2 = gamma_ratio_product([beta, -nu], [alpha1, alpha2])
    t1 = c1 * pfq([alpha1, alpha2], [1 - nu], zc)
    t2 = c2 * zc ** complex(nu) * pfq([beta - alpha1, beta - alpha2], [1 + nu], zc)
    params = {"alpha": [str(alpha1), str(alpha2)], "beta": str(beta), "z": [zc.real, zc.imag]}
    return IdentityReport("gauss_connection", params, lhs, t1 + t2, tol,
                          scale=term_scale([lhs, t1, t2]))


# ------------------------------------------------------------------- Bühring expansion

def buhring_lhs(params: ParamSet, s: int, z) -> complex:
    """Gamma(1-b+a_s)/Gamma(1-a_[s]+a_s) pF(p-1)(1-b+a_s; 1-a_[s]+a_s; z)."""
    a_s = params.a[s - 1]
    up = [1 - bi + a_s for bi in params.b]
    lo = [1 - ai + a_s for ai in params.a_without(s)]
    return gamma_ratio(up, lo) * pfq(up, lo, z)


def _order_for(w: float, tol: float, cap: int = 400) -> int:
    if w == 0:
        return 0
    return min(cap, max(4, math.ceil(math.log(tol * 1e-3) / math.log(w)) + 4))


def buhring_expansion_eval(params: ParamSet, s: int, z, N: Optional[int] = None,
                           tol: float = DEFAULT_TOL, method: str = "multisum") -> complex:
    """(1-z)^(psi_p-1) sum f(n)(1-z)^n + sum h(n)(1-z)^n for |1-z| < 1.

    ``method`` picks the h route ("multisum" or "from_D"); the multiple-sum
    route falls back to the D route when its convergence condition fails.
    """
    w = 1 - complex(z)
    if abs(w) >= 1:
        raise ConvergenceViolation("Bühring expansion needs |1-z| < 1", z=str(z))
    if is_integer_like(params.psi_p):
        raise DegenerateParameters("psi_p is an integer; expansion is not unique", at="psi_p")
    if N is None:
        N = _order_for(abs(w), tol)
    f = f_coeffs(params, s, N).values
    if method == "multisum":
        try:
            h = h_multisum(params, s, N, tol).values
        except ConvergenceViolation:
            h = h_from_D(params, s, N, tol).values
    elif method == "from_D":
        h = h_from_D(params, s, N, tol).values
    else:
        raise ValueError(f"unknown h method {method!r}")
    fs = hs = 0j
    for n in range(N, -1, -1):
        fs = fs * w + complex(f[n])
        hs = hs * w + complex(h[n])
    return w ** (complex(params.psi_p) - 1) * fs + hs


# ------------------------------------------------------------------- terminating identities

def _exact_or_float(*xs):
    return all(is_exact(x) for x in xs)


def sheppard_residual_p3(n: int, alpha1, alpha2, beta1, beta2, tol: float = 1e-9) -> IdentityReport:
    """3F2(-n,a1,a2;b1,b2;1) = (b2-a2)_n/(b2)_n 3F2(-n,b1-a1,a2;b1,1-b2+a2-n;1)."""
    lhs = pfq_terminating([alpha1, alpha2], [beta1, beta2], n)
    den = rising_factorial(beta2, n)
    if den == 0:
        raise PoleError("(beta2)_n vanishes", at="beta2")
    rhs = rising_factorial(beta2 - alpha2, n) / den * pfq_terminating(
        [beta1 - alpha1, alpha2], [beta1, 1 - beta2 + alpha2 - n], n)
    params = {"n": n, "alpha": [str(alpha1), str(alpha2)], "beta": [str(beta1), str(beta2)]}
    return IdentityReport("sheppard_p3", params, lhs, rhs, tol, scale=term_scale([lhs, rhs]))


def buhring_p4_sides(n: int, alpha1, alpha2, beta1, beta2, gamma1, gamma2):
    """Both sides of the p = 4 double-sum transformation and the largest summand."""
    lhs = rhs = 0
    big = []
    try:
        for k in range(n + 1):
            w = Fraction(rising_factorial(-n, k), factorial(k))
            t = w * rising_factorial(alpha1, k) * rising_factorial(alpha2, k) / (
                rising_factorial(beta1, k) * rising_factorial(beta2, k)) * pfq_terminating(
                [gamma1, gamma2], [alpha1, alpha2], k)
            u = w * rising_factorial(alpha2, k) * rising_factorial(beta1 - alpha1, k) / (
                rising_factorial(beta1, k) * rising_factorial(1 + alpha2 - beta2 - n, k)) * pfq_terminating(
                [gamma1, gamma2], [alpha2, 1 + alpha1 - beta1 - k], k)
            lhs, rhs = lhs + t, rhs + u
            big += [t, u]
        rhs = rising_factorial(beta2 - alpha2, n) / rising_factorial(beta2, n) * rhs
    except ZeroDivisionError:
        raise PoleError("a lower parameter vanishes inside the finite sums") from None
    return lhs, rhs, term_scale(big + [lhs, rhs])


def buhring_p4_residual(n: int, alpha1, alpha2, beta1, beta2, gamma1, gamma2,
                        tol: float = 1e-9) -> IdentityReport:
    lhs, rhs, scale = buhring_p4_sides(n, alpha1, alpha2, beta1, beta2, gamma1, gamma2)
    params = {"n": n, "alpha": [str(alpha1), str(alpha2)], "beta": [str(beta1), str(beta2)],
              "gamma": [str(gamma1), str(gamma2)]}
    return IdentityReport("buhring_p4", params, lhs, rhs, tol, scale=scale)


def _chains(p: int, n: int):
    for js in itertools.combinations_with_replacement(range(n + 1), p - 2):
        yield (0,) + js + (n,)


def multiseries_sides(params: ParamSet, n: int):
    """Both nested chain sums of the multiple-series transformation (p >= 3)."""
    p = params.p
    if p < 3:
        raise ValueError("the transformation needs p >= 3")
    a, b, psi = params.a, params.b, params.psi
    one = Fraction(1) if params.exact else 1 + 0j
    lhs = rhs = 0 * one
    for j in _chains(p, n):
        walk = one
        left = one
        right = one
        for m in range(1, p):
            d = j[m] - j[m - 1]
            walk = walk * rising_factorial(psi[m] + j[m - 1], d) / factorial(d)
            right = right * rising_factorial(b[m] - a[m - 1], d)
            if m <= p - 2:
                left = left * rising_factorial(b[m - 1] - a[m], d)
        top = j[p - 2]
        lead = (-1) ** top * rising_factorial(psi[p] + a[p - 1] - b[p - 2] + top, n - top)
        lhs = lhs + lead * walk * left
        rhs = rhs + walk * right
    return lhs, rhs


def multiseries_transform_residual(params: ParamSet, n: int, tol: float = 1e-9) -> IdentityReport:
    lhs, rhs = multiseries_sides(params, n)
    return IdentityReport("multiseries", {"n": n, **params.to_json()}, lhs, rhs, tol,
                          scale=term_scale([lhs, rhs]))

"""Evaluation of G^{p,0}_{p,p} and G^{2,p}_{p,p} near z = 0 and z = 1.

Both functions are written with the "b" row on top and the "a" row at the
bottom, G(z | b; a).  Powers of z and 1 - z take the principal branch.
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Optional

from .buhring import DEFAULT_TOL, D_coeffs, D_variant_for
from .coeffs import g_young
from .errors import ConvergenceViolation, DegenerateParameters, NoConvergence
from .hyper import pfq
from .params import ParamSet, SeriesExpansion
from .quadrature import tanh_sinh
from .report import IdentityReport
from .scalar import (GaussRational, INT_TOL, gamma_ratio, gamma_ratio_product, is_integer_like,
                     is_nonpositive_integer, nearest_integer, rgamma, rising_factorial, sin_pi,
                     to_exact_fast)
from .series import extrapolated_sum, sum_series, transient_skip

# |z| at or below this uses the expansion around zero
DISPATCH_RADIUS = 0.5
# table sizes for the expansions at one are grown in these steps
_GROW = 32
_NMAX = 2048


def _exact_params(params: ParamSet) -> ParamSet:
    return ParamSet(tuple(to_exact_fast(x) for x in params.a),
                    tuple(to_exact_fast(x) for x in params.b))


def _cpow(base: complex, e) -> complex:
    ec = complex(e)
    if ec == 0:
        return 1 + 0j
    if base == 0:
        if ec.real > 0:
            return 0j
        raise ConvergenceViolation("power of zero with non-positive exponent", exponent=str(e))
    return cmath.exp(ec * cmath.log(base))


def shift_parameters(params: ParamSet, alpha) -> ParamSet:
    """z^alpha G(z | b; a) = G(z | b + alpha; a + alpha)."""
    return params.shifted(alpha)


# ------------------------------------------------------------------- G^{p,0}_{p,p} near one

def _psi_integer(params: ParamSet) -> Optional[int]:
    """l when psi_p = -l is a nonpositive integer, else None."""
    psi = params.psi_p
    if is_nonpositive_integer(psi):
        return -nearest_integer(psi)[0]
    return None


@lru_cache(maxsize=64)
def _near1_coefficients(params: ParamSet, k: int, N: int) -> tuple:
    l = _psi_integer(params)
    ex = _exact_params(params)
    if l is None:
        g = g_young(ex, k, N).values
        psi = ex.psi_p
        rg = rgamma(params.psi_p)
        out, r = [], 1
        for n in range(N + 1):
            out.append(rg * complex(g[n] / r))
            r = r * (psi + n)
        return tuple(out)
    g = g_young(ex, k, N + l + 1).values
    return tuple(complex(g[n + l + 1] / factorial(n)) for n in range(N + 1))


def gp0pp_near1(params: ParamSet, k: int, N: int) -> SeriesExpansion:
    """G^{p,0}_{p,p} = z^{a_k} (1-z)^{psi_p-1} sum_n c_n (1-z)^n, valid for |1-z| < 1.

    c_n = g(n)/((psi_p)_n Gamma(psi_p)); when psi_p = -l is a nonpositive
    integer the power of 1 - z drops out and c_n = g(n+l+1)/n!.
    """
    params._check_index(k)
    l = _psi_integer(params)
    coeffs = _near1_coefficients(params, k, N)
    wpow = params.psi_p - 1 if l is None else 0
    return SeriesExpansion(center="one", zpow=params.a[k - 1], wpow=wpow, coefficients=coeffs,
                           validity="|1-z|<1", anchor_index=k)


def _sum_table(coeff_fn, w: complex, tol: float, what: str) -> tuple:
    """Sum c_n w^n, growing the coefficient table until the terms stagnate."""
    N = _GROW
    while True:
        cs = coeff_fn(N)
        try:
            res = sum_series((c * w ** n for n, c in enumerate(cs)), tol, max_terms=N + 1,
                             min_terms=4, what=what)
        except NoConvergence:
            res = None
        if res is not None and res.terms <= N:
            return res.value, res.terms
        if N >= _NMAX:
            raise ConvergenceViolation(f"{what}: expansion at one did not settle", terms=N)
        N *= 2


def gp0pp_near1_value(params: ParamSet, z, tol: float = 1e-15, k: int = 1,
                      w: Optional[complex] = None) -> complex:
    """Value of the expansion at one; ``w`` = 1 - z may be passed to avoid cancellation."""
    zc = complex(z)
    wc = 1 - zc if w is None else complex(w)
    if abs(wc) >= 1:
        raise ConvergenceViolation("expansion at one needs |1-z| < 1", z=[zc.real, zc.imag])
    l = _psi_integer(params)
    wpow = 0 if l is not None else params.psi_p - 1
    if wc == 0:
        c0 = _near1_coefficients(params, k, 0)[0]
        return _cpow(zc, params.a[k - 1]) * _cpow(0j, wpow) * c0
    val, _ = _sum_table(lambda N: _near1_coefficients(params, k, N), wc, tol, "G^{p,0} at one")
    return _cpow(zc, params.a[k - 1]) * _cpow(wc, wpow) * val


# ------------------------------------------------------------------- G^{p,0}_{p,p} near zero

def _check_distinct_mod_1(params: ParamSet):
    p = params.p
    for i in range(p):
        for j in range(i + 1, p):
            if is_integer_like(params.a[i] - params.a[j]):
                raise DegenerateParameters(f"a_{i + 1} - a_{j + 1} is an integer", pair=[i + 1, j + 1])


def gp0pp_near0(params: ParamSet, z, tol: float = 1e-15, zpow=0) -> complex:
    """Residue sum: sum_k z^{a_k} Gamma(a_[k]-a_k)/Gamma(b-a_k) pF(p-1)(1-b+a_k; 1-a_[k]+a_k; z).

    ``zpow`` multiplies the result by z^zpow inside each power, which avoids
    overflow for tiny z.
    """
    zc = complex(z)
    if abs(zc) >= 1:
        raise ConvergenceViolation("expansion at zero needs |z| < 1", z=[zc.real, zc.imag])
    _check_distinct_mod_1(params)
    total = 0j
    for k in range(1, params.p + 1):
        ak = params.a[k - 1]
        rest = params.a_without(k)
        c = gamma_ratio([x - ak for x in rest], [bi - ak for bi in params.b])
        if c == 0:
            continue
        f = pfq([1 - bi + ak for bi in params.b], [1 - x + ak for x in rest], zc, tol)
        total += _cpow(zc, complex(ak) + complex(zpow)) * c * f
    return total


def gp0pp_eval(params: ParamSet, z, tol: float = 1e-15, w: Optional[complex] = None) -> complex:
    """G^{p,0}_{p,p}(z | b; a): zero for |z| > 1, else the expansion at zero or at one."""
    zc = complex(z)
    if zc == 0:
        raise ConvergenceViolation("z = 0 is a branch point", z=[0.0, 0.0])
    if abs(zc) > 1:
        return 0j
    wc = 1 - zc if w is None else complex(w)
    if abs(zc) == 1 and zc != 1:
        raise ConvergenceViolation("|z| = 1, z != 1 is outside every expansion", z=[zc.real, zc.imag])
    near0_ok = abs(zc) < 1
    near1_ok = abs(wc) < 1
    if near0_ok and (abs(zc) <= DISPATCH_RADIUS or not near1_ok):
        try:
            return gp0pp_near0(params, zc, tol)
        except DegenerateParameters:
            if not near1_ok:
                raise
    return gp0pp_near1_value(params, zc, tol, w=wc)


def gp0pp_closed(params: ParamSet, z) -> complex:
    """Closed forms for p = 1 and p = 2 on 0 < |1-z| < 1."""
    zc = complex(z)
    if params.p == 1:
        a, b = params.a[0], params.b[0]
        return _cpow(zc, a) * _cpow(1 - zc, b - a - 1) * rgamma(b - a)
    if params.p == 2:
        psi = params.psi_p
        if is_nonpositive_integer(psi):
            raise DegenerateParameters("closed p = 2 form needs psi_p off the nonpositive integers")
        a1, a2 = params.a
        b1, b2 = params.b
        return (_cpow(zc, a1) * _cpow(1 - zc, psi - 1) * rgamma(psi)
                * pfq([b1 - a2, b2 - a2], [psi], 1 - zc))
    raise ValueError("closed forms exist for p in {1, 2}")


# ------------------------------------------------------------------- G^{2,p}_{p,p}

def g2ppp_near1(params: ParamSet, k: int, s: int, N: int, tol: float = DEFAULT_TOL,
                variant: Optional[str] = None) -> SeriesExpansion:
    """G^{2,p}_{p,p}(z | b; a_k, a_s, a_[k,s]) = z^{a_s} sum_n D_n^[k,s] (1-z)^n."""
    variant = variant or D_variant_for(params, s)
    D = D_coeffs(params, k, s, N, variant, tol)
    return SeriesExpansion(center="one", zpow=params.a[s - 1], wpow=0, coefficients=D.values,
                           validity="|1-z|<1", anchor_index=s,
                           truncation={"variant": variant, "per_n": list(D.truncation)})


@lru_cache(maxsize=256)
def _D_cached(params: ParamSet, k: int, s: int, N: int, variant: str, tol: float) -> tuple:
    return D_coeffs(params, k, s, N, variant, tol).values


def g2ppp_eval(params: ParamSet, k: int, s: int, z, tol: float = DEFAULT_TOL,
               variant: Optional[str] = None) -> complex:
    """G^{2,p}_{p,p} at z with |1-z| < 1 from the D_n series, table grown as needed."""
    zc = complex(z)
    w = 1 - zc
    if abs(w) >= 1:
        raise ConvergenceViolation("expansion at one needs |1-z| < 1", z=[zc.real, zc.imag])
    variant = variant or D_variant_for(params, s)
    if w == 0:
        return _cpow(zc, params.a[s - 1]) * _D_cached(params, k, s, 0, variant, tol)[0]
    N = max(8, min(_NMAX, math.ceil(math.log(1e-17) / math.log(abs(w)))))
    val, _ = _sum_table(lambda M: _D_cached(params, k, s, max(M, N), variant, tol), w,
                        1e-15, "G^{2,p} at one")
    return _cpow(zc, params.a[s - 1]) * val


def g2ppp_closed_p2(params: ParamSet, z) -> complex:
    """G^{2,2}_{2,2}(z | b1,b2; a1,a2) via a 2F1 in 1 - z."""
    if params.p != 2:
        raise ValueError("closed G^{2,2}_{2,2} form needs p = 2")
    a1, a2 = params.a
    b1, b2 = params.b
    e = 2 + a1 + a2 - b1 - b2
    c = gamma_ratio_product([1 - b1 + a1, 1 - b1 + a2, 1 - b2 + a1, 1 - b2 + a2], [e])
    zc = complex(z)
    return c * _cpow(zc, a1) * pfq([1 - b1 + a1, 1 - b2 + a1], [e], 1 - zc)


def _decimal_exact(z):
    """Shortest decimal rational that rounds to the float ``z``; exact input is kept."""
    if isinstance(z, (int, Fraction)):
        return to_exact_fast(z)
    zc = complex(z)
    re = to_exact_fast(Fraction(repr(zc.real)))
    if zc.imag == 0:
        return re
    return GaussRational(re, Fraction(repr(zc.imag)))


class _PolyStream:
    """pF(-n, up; lo; x) for n = 0, 1, ... with the z-power coefficients cached."""

    def __init__(self, up, lo, x):
        self.up, self.lo, self.x = up, lo, x
        self.c = [to_exact_fast(1)]

    def __call__(self, n: int):
        while len(self.c) <= n:
            l = len(self.c) - 1
            t = self.c[-1] * self.x / (l + 1)
            for u in self.up:
                t = t * (u + l)
            for w in self.lo:
                t = t / (w + l)
            self.c.append(t)
        total = 0
        r = 1
        for l in range(n + 1):
            total = total + r * self.c[l]
            r = r * (l - n)
        return total


POLY_VARIANTS = ("v520", "v522", "v523", "v531")


def g2ppp_polyseries(params: ParamSet, k: int, s: int, z, variant: str = "v522",
                     tol: float = 1e-12, max_terms: Optional[int] = None) -> complex:
    """G^{2,p}_{p,p}(z | b; a_k, a_s, a_[k,s]) as a series of hypergeometric polynomials in z.

    Every summand is evaluated exactly (z enters through its shortest decimal
    form); the n-series decays algebraically and is extrapolated.
    """
    if k == s:
        raise ValueError("need k != s")
    zc = complex(z)
    if abs(1 - zc) >= 1:
        raise ConvergenceViolation("series needs |1-z| < 1", z=[zc.real, zc.imag])
    p = params.p
    if variant == "v520":
        need = range(2, p)
    elif variant in ("v522", "v523"):
        need = range(1, p)
    elif variant == "v531":
        need = range(p)
    else:
        raise ValueError(f"unknown variant {variant!r}")
    a_s_f = params.a[s - 1]
    bad = [i + 1 for i in need if complex(1 - params.b[i] + a_s_f).real <= 0]
    if bad:
        raise ConvergenceViolation(f"{variant} needs Re(1-b_i+a_s)>0", failing_b=bad)
    ex = _exact_params(params)
    a, b = ex.a, ex.b
    ak, a_s = a[k - 1], a[s - 1]
    rest_ks = [a[i] for i in range(p) if i not in (k - 1, s - 1)]
    rest_k = [a[i] for i in range(p) if i != k - 1]
    x = _decimal_exact(zc)
    fa = params.a
    fb = params.b
    fak, fas = fa[k - 1], fa[s - 1]
    f_ks = [fa[i] for i in range(p) if i not in (k - 1, s - 1)]
    f_k = [fa[i] for i in range(p) if i != k - 1]
    zk = _cpow(zc, fak)
    if variant == "v520":
        e = 2 + ak + a_s - b[0] - b[1]
        pre = gamma_ratio_product([1 - bi + fak for bi in fb] + [1 - fb[0] + fas, 1 - fb[1] + fas],
                                  [1 - x_ + fak for x_ in f_ks] + [2 + fak + fas - fb[0] - fb[1]])
        poly = _PolyStream([1 - bi + ak for bi in b[2:]], [1 - x_ + ak for x_ in rest_ks], x)
        u1, u2 = 1 - b[0] + ak, 1 - b[1] + ak

        def coef_ratio(n):
            return (u1 + n) * (u2 + n) / ((e + n) * (n + 1))
        c0 = to_exact_fast(1)
        tail = b[2:]
        skip_params = (u1, u2, e)
    elif variant == "v522":
        pre = gamma_ratio_product([1 - fak + fas] + [1 - bi + fak for bi in fb],
                                  [1 - x_ + fak for x_ in f_ks])
        poly = _PolyStream([1 - bi + ak for bi in b[1:]], [1] + [1 - x_ + ak for x_ in rest_ks], x)
        u1, w1 = 1 - b[0] + ak, 1 - b[0] + a_s

        def coef_ratio(n):
            return (u1 + n) / (w1 + n + 1)
        c0 = 1 / w1
        tail = b[1:]
        skip_params = (u1, w1)
    elif variant == "v523":
        pre = gamma_ratio_product([1 - fb[0] + fas] + [1 - bi + fak for bi in fb[1:]],
                                  [1 - x_ + fak for x_ in f_ks])
        poly = _PolyStream([1 - bi + ak for bi in b[1:]], [1 - x_ + ak for x_ in rest_k], x)
        u1, w1 = 1 - a_s + ak, 1 - b[0] + ak

        def coef_ratio(n):
            return (u1 + n) * (w1 + n) / ((n + 1) * (w1 + n + 1))
        c0 = 1 / w1
        tail = b[1:]
        skip_params = (u1, w1)
    else:
        d = fak - fas
        if is_integer_like(d) and complex(d) != 0:
            raise DegenerateParameters("a_k - a_s is a nonzero integer", pair=[k, s])
        lim = 1.0 if complex(d) == 0 else math.pi * complex(d) / sin_pi(d)
        pre = lim * gamma_ratio_product([1 - bi + fak for bi in fb], [1 - x_ + fak for x_ in f_k])
        poly = _PolyStream([1 - bi + ak for bi in b], [1] + [1 - x_ + ak for x_ in rest_k], x)
        u1 = 1 - a_s + ak

        def coef_ratio(n):
            return (u1 + n) / (n + 2)
        c0 = to_exact_fast(1)
        tail = b
        skip_params = (u1,)

    def terms():
        c = c0
        n = 0
        while True:
            yield c * poly(n)
            c = c * coef_ratio(n)
            n += 1

    exps = [2 + a_s - bi for bi in tail]
    skip = transient_skip(*skip_params, *tail, *rest_k)
    if not exps:
        res = sum_series(terms(), tol, max_terms, min_terms=skip, what=f"G^{{2,p}} {variant}",
                         weight=abs(pre))
    else:
        res = extrapolated_sum(terms(), exps, tol, max_terms, what=f"G^{{2,p}} {variant}",
                               weight=abs(pre), skip=skip)
    return zk * pre * complex(res.value)


# ------------------------------------------------------------------- Mellin transform

def mellin_correction_polynomial(params: ParamSet, k: int, s) -> object:
    """q(s) = sum_j g_p^k(m-j) (s+a_k-j)_j when psi_p = -m."""
    m = _psi_integer(params)
    if m is None:
        raise DegenerateParameters("psi_p is not a nonpositive integer", psi=str(params.psi_p))
    g = g_young(params, k, m).values
    ak = params.a[k - 1]
    return sum((g[m - j] * rising_factorial(s + ak - j, j) for j in range(m + 1)), 0 * g[0])


def mellin_check(params: ParamSet, s, quad_tol: float = 1e-9, tol: float = 1e-7) -> IdentityReport:
    """int_0^1 x^(s-1) G(x) dx against Gamma(a+s)/Gamma(b+s), minus q(s) when psi_p = -m."""
    sc = complex(s)
    if min(complex(ai + s).real for ai in params.a) <= 0:
        raise ConvergenceViolation("Mellin transform needs Re(s) > -min Re(a)")
    m = _psi_integer(params)
    if m is None and complex(params.psi_p).real <= 0:
        raise ConvergenceViolation("Mellin transform needs Re(psi_p) > 0 or psi_p = -m")

    def integrand(x: float, w: float) -> complex:
        if x <= DISPATCH_RADIUS:
            try:
                return gp0pp_near0(params, x, zpow=sc - 1)
            except DegenerateParameters:
                pass
        return _cpow(complex(x), sc - 1) * gp0pp_eval(params, x, w=w)

    q = tanh_sinh(integrand, quad_tol)
    rhs = gamma_ratio([ai + s for ai in params.a], [bi + s for bi in params.b])
    if m is not None:
        rhs = rhs - complex(mellin_correction_polynomial(params, 1, s))
    info = {**params.to_json(), "s": [sc.real, sc.imag], "quad_error": q.error}
    return IdentityReport("mellin", info, q.value, rhs, tol,
                          scale=max(abs(q.value), abs(rhs)))

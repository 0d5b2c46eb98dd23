"""Bühring coefficients f, h and the D_n^[k,s] coefficients of G^{2,p}_{p,p} at z = 1.

Infinite series here have slowly (algebraically) decaying terms built from
terminating hypergeometric polynomials whose float evaluation loses all
digits after a few dozen terms.  Every series is therefore summed in exact
arithmetic on the exact image of the parameters (floats convert without
rounding); only the gamma prefactors are evaluated in floating point.
"""

from __future__ import annotations

import math
from math import factorial
from typing import Optional, Sequence

from .coeffs import g_young
from .errors import ConvergenceViolation, DegenerateParameters, PoleError
from .params import CoeffTable, ParamSet
from .scalar import (INT_TOL, gamma, gamma_ratio, is_integer_like, is_nonpositive_integer,
                     nearest_integer, prod, rising_factorial, sin_pi, to_exact_fast, _Q)
from .series import extrapolated_sum, transient_skip

DEFAULT_TOL = 1e-12


def _ex(params: ParamSet):
    a = tuple(to_exact_fast(x) for x in params.a)
    b = tuple(to_exact_fast(x) for x in params.b)
    return a, b


def _re(x) -> float:
    return complex(x).real


def _require_positive(values: Sequence, what: str, params: ParamSet, suggest_from=None):
    bad = [i for i, v in enumerate(values) if _re(v) <= 0]
    if not bad:
        return
    info = {"condition": what}
    if suggest_from is not None:
        perm = suggest_from()
        if perm is not None:
            info["suggested_b_permutation"] = perm
    raise ConvergenceViolation(f"convergence condition {what} fails", **info)


def _suggest_b_order(params: ParamSet, a_s, free: int):
    """Permutation of b putting the ``free`` largest real parts first, if that helps."""
    order = sorted(range(params.p), key=lambda i: -_re(params.b[i]))
    tail = order[free:]
    if all(_re(1 - params.b[i] + a_s) > 0 for i in tail):
        return [i + 1 for i in order]
    return None


# ------------------------------------------------------------------- f

def f_from_g(gtable: CoeffTable, params: ParamSet) -> CoeffTable:
    """f(n) = Gamma(1-psi_p)/(psi_p)_n g(n)."""
    psi = params.psi_p
    if is_integer_like(psi) and complex(psi).real >= 1 - INT_TOL:
        raise PoleError(f"Gamma(1-psi_p) has a pole: psi_p={psi}", at="psi_p")
    g1 = gamma(1 - psi)
    out = []
    for n, g in enumerate(gtable.values):
        r = rising_factorial(psi, n)
        if r == 0 or abs(complex(r)) == 0.0:
            raise PoleError(f"(psi_p)_{n} vanishes", at="psi_p", n=n)
        out.append(g1 * complex(g) / complex(r))
    return CoeffTable(kind="f", p=params.p, index=gtable.index, values=tuple(out),
                      method=f"from_g:{gtable.method}", mode="float")


def f_coeffs(params: ParamSet, s: int, N: int) -> CoeffTable:
    return f_from_g(g_young(params, s, N), params)


# ------------------------------------------------------------------- h, multiple sum

class _ChainSums:
    """Incremental chain sums V_L(j) = sum over 0<=j_1<=...<=j_L=j of
    prod_m (psi_m + j_{m-1})_d (c_m)_d / d!, extended one j at a time."""

    def __init__(self, psi: Sequence, c: Sequence, levels: int):
        self._psi, self._c, self._L = psi, c, levels
        self._v = [[] for _ in range(levels + 1)]
        self._w = [None] + [[] for _ in range(levels)]

    def _extend(self):
        j = len(self._v[0])
        self._v[0].append(_Q(1) if j == 0 else _Q(0))
        for m in range(1, self._L + 1):
            w = self._w[m]
            x, cm = self._psi[m], self._c[m]
            for i in range(j):
                d = j - i
                w[i] = w[i] * (x + i + d - 1) * (cm + d - 1) / d
            w.append(self._v[m - 1][j])
            self._v[m].append(sum(w, _Q(0)))

    def __getitem__(self, j: int):
        while len(self._v[0]) <= j:
            self._extend()
        return self._v[self._L][j]


class _KernelSums:
    """K(j) = sum_l (-j)_l/l! prod(upper)_l/prod(lower)_l [/l!], extended on demand."""

    def __init__(self, upper: Sequence, lower: Sequence, extra_lower_one: bool = False):
        self._up, self._lo, self._extra = upper, lower, extra_lower_one
        self._c = [_Q(1)]
        self._k: list = []

    def __getitem__(self, j: int):
        while len(self._k) <= j:
            jj = len(self._k)
            while len(self._c) <= jj:
                l = len(self._c) - 1
                t = self._c[-1]
                for u in self._up:
                    t = t * (u + l)
                for w in self._lo:
                    t = t / (w + l)
                t = t / (l + 1)
                if self._extra:
                    t = t / (l + 1)
                self._c.append(t)
            s = _Q(0)
            f = _Q(1)  # (-jj)_l
            for l in range(jj + 1):
                s += f * self._c[l]
                f *= (l - jj)
            self._k.append(s)
        return self._k[j]


def h_multisum(params: ParamSet, s: int, N: int, tol: float = DEFAULT_TOL,
               max_terms: Optional[int] = None) -> CoeffTable:
    """h_p^s(n) from the single outer series over chain sums (s moved to position p)."""
    P = params.swap(s)
    p = P.p
    a, b = _ex(P)
    psi_ex = [_Q(0)]
    for ai, bi in zip(a, b):
        psi_ex.append(psi_ex[-1] + bi - ai)
    psi = psi_ex[p]
    ap = a[p - 1]
    _require_positive([1 - b[i] + ap for i in range(p - 2)], "Re(1-b_i+a_s)>0, i<=p-2", params,
                      lambda: _suggest_b_order(P, params.a[s - 1], 2))
    if p < 2:
        raise ValueError("h coefficients need p >= 2")
    c = [None] + [b[m - 1] - a[m] for m in range(1, p - 1)]
    inner = _ChainSums(psi_ex, c, p - 2)
    e2 = psi - b[p - 2] + ap
    psi1 = psi_ex[p - 1]
    for w in (psi1, e2):
        if is_nonpositive_integer(w):
            raise PoleError("outer series lower parameter is a nonpositive integer", at=str(w))
    # chain sums grow like j! j^alpha; each level adds one exponent family
    alphas: list = []
    for m in range(1, p - 1):
        alphas = [al + c[m] for al in alphas] + [psi_ex[m] + c[m] - 2]
    out, trunc = [], []
    for n in range(N + 1):
        r = rising_factorial(1 - psi, n + 1)
        if r == 0:
            raise PoleError(f"(1-psi_p)_{n + 1} vanishes", at="psi_p", n=n)
        exps = [psi1 + e2 + n - psi - al for al in alphas]
        pre = -gamma_ratio([psi, 1 - b[p - 1] + ap + n, 1 - b[p - 2] + ap + n],
                           [psi1, e2]) / (complex(r) * factorial(n))

        def terms(n=n):
            t = _Q(1)
            j = 0
            while True:
                yield t * inner[j]
                t = t * (psi - n - 1 + j) / ((psi1 + j) * (e2 + j))
                j += 1

        skip = transient_skip(psi - n - 1, psi1, e2, *psi_ex, *c[1:])
        res = extrapolated_sum(terms(), exps, tol, max_terms, what=f"h_multisum n={n}",
                              weight=abs(pre), skip=skip)
        out.append(pre * complex(res.value))
        trunc.append(res.meta())
    return CoeffTable(kind="h", p=p, index=(s,), values=tuple(out), method="multisum",
                      mode="float", truncation=tuple(trunc))


# ------------------------------------------------------------------- h, closed forms

def _sum_exact_terms(term_ratio, exps, tol, max_terms, what, weight=1.0, skip=8):
    def terms():
        t = _Q(1)
        j = 0
        while True:
            yield t
            t = t * term_ratio(j)
            j += 1
    return extrapolated_sum(terms(), exps, tol, max_terms, what=what, weight=weight, skip=skip)


def _h_prefactor(psi, b_hi, b_lo, a_s, n):
    r = rising_factorial(1 - psi, n + 1)
    if r == 0:
        raise PoleError(f"(1-psi_p)_{n + 1} vanishes", at="psi_p", n=n)
    return -gamma_ratio([psi, 1 - b_hi + a_s + n, 1 - b_lo + a_s + n],
                        [psi - b_hi + a_s, psi - b_lo + a_s]) / (complex(r) * factorial(n))


def h_closed_p3(params: ParamSet, s: int, n: int, tol: float = DEFAULT_TOL,
                max_terms: Optional[int] = None):
    """p = 3 closed form with a 3F2 at unit argument."""
    if params.p != 3:
        raise ValueError("h_closed_p3 needs p = 3")
    a, b = _ex(params)
    psi = sum(b) - sum(a)
    a_s = a[s - 1]
    i1, i2 = [a[i] for i in range(3) if i != s - 1]
    _require_positive([1 - b[0] + a_s + n], "Re(1-b_1+a_s+n)>0", params,
                      lambda: _suggest_b_order(params, params.a[s - 1], 2))
    c1, c2 = psi - b[1] + a_s, psi - b[2] + a_s
    up = (psi - 1 - n, b[0] - i1, b[0] - i2)
    for w in (c1, c2):
        if is_nonpositive_integer(w):
            raise PoleError("3F2 lower parameter is a nonpositive integer", at=str(w))
    pre = _h_prefactor(psi, b[1], b[2], a_s, n)
    res = _sum_exact_terms(lambda j: prod(u + j for u in up) / ((c1 + j) * (c2 + j) * (j + 1)),
                           [1 + c1 + c2 - sum(up)], tol, max_terms, "h_closed_p3", abs(pre), transient_skip(*up, c1, c2))
    return pre * complex(res.value)


def h_closed_p4(params: ParamSet, s: int, n: int, tol: float = DEFAULT_TOL,
                max_terms: Optional[int] = None):
    """p = 4 closed form: outer k-series with a terminating 3F2 kernel."""
    if params.p != 4:
        raise ValueError("h_closed_p4 needs p = 4")
    a, b = _ex(params)
    psi = sum(b) - sum(a)
    a_s = a[s - 1]
    i1, i2, i3 = [a[i] for i in range(4) if i != s - 1]
    _require_positive([1 - b[0] + a_s + n, 1 - b[1] + a_s + n], "Re(1-b_i+a_s+n)>0, i<=2", params,
                      lambda: _suggest_b_order(params, params.a[s - 1], 2))
    c1, c2 = psi - b[2] + a_s, psi - b[3] + a_s
    d1, d2 = b[0] + b[1] - i1 - i2, b[0] + b[1] - i1 - i3
    for w in (c1, c2, d1, d2):
        if is_nonpositive_integer(w):
            raise PoleError("lower parameter is a nonpositive integer", at=str(w))
    kern = _KernelSums([b[0] - i1, b[1] - i1], [d1, d2])
    pre = _h_prefactor(psi, b[2], b[3], a_s, n)

    def terms():
        t = _Q(1)
        k = 0
        while True:
            yield t * kern[k]
            t = t * (psi - 1 - n + k) * (d1 + k) * (d2 + k) / ((c1 + k) * (c2 + k) * (k + 1))
            k += 1

    skip = transient_skip(psi - 1 - n, d1, d2, c1, c2, b[0] - i1, b[1] - i1)
    outer = psi - 2 - n + d1 + d2 - c1 - c2
    exps = [bb - outer for bb in (b[0] - i1, b[1] - i1)]
    res = extrapolated_sum(terms(), exps, tol, max_terms, what="h_closed_p4", weight=abs(pre),
                           skip=skip)
    return pre * complex(res.value)


def h_closed(params: ParamSet, s: int, N: int, tol: float = DEFAULT_TOL) -> CoeffTable:
    f = {3: h_closed_p3, 4: h_closed_p4}.get(params.p)
    if f is None:
        raise ValueError("closed h forms exist for p in {3, 4}")
    return CoeffTable(kind="h", p=params.p, index=(s,), values=tuple(f(params, s, n, tol) for n in range(N + 1)),
                      method=f"closed_p{params.p}", mode="float")


# ------------------------------------------------------------------- D coefficients

def _check_distinct_a(params: ParamSet, idx: Sequence[int], ref: int):
    for i in idx:
        d = params.a[i - 1] - params.a[ref - 1]
        if is_integer_like(d):
            raise DegenerateParameters(f"a_{i} - a_{ref} is an integer", pair=[i, ref])


def D_coeffs(params: ParamSet, k: int, s: int, N: int, variant: str = "v536",
             tol: float = DEFAULT_TOL, max_terms: Optional[int] = None) -> CoeffTable:
    """D_n^[k,s], n = 0..N, from the single j-series of the chosen variant."""
    if k == s:
        raise ValueError("D coefficients need k != s")
    p = params.p
    a, b = _ex(params)
    ak, a_s = a[k - 1], a[s - 1]
    rest = [a[i] for i in range(p) if i not in (k - 1, s - 1)]
    _check_distinct_a(params, [i for i in range(1, p + 1) if i not in (k, s)], k)
    gpre_num = [1 - bi + ak for bi in b]
    gpre_den = [1 - x + ak for x in rest]
    if variant == "v535":
        _require_positive([1 - bi + a_s for bi in b[2:]], "Re(1-b_[1,2]+a_s)>0", params,
                          lambda: _suggest_b_order(params, params.a[s - 1], 2))
        kern = _KernelSums([1 - bi + ak for bi in b[2:]], [1 - x + ak for x in rest])
        e = 2 + ak + a_s - b[0] - b[1]
        u1, u2 = 1 - b[0] + ak, 1 - b[1] + ak
        base_skip = transient_skip(u1, u2, e, *gpre_num, *gpre_den)
        tail_b = list(b[2:]) if p > 2 else None
    elif variant == "v536":
        _require_positive([1 - bi + a_s for bi in b[1:]], "Re(1-b_[1]+a_s)>0", params,
                          lambda: _suggest_b_order(params, params.a[s - 1], 1))
        kern = _KernelSums([1 - bi + ak for bi in b[1:]], [1 - x + ak for x in rest],
                           extra_lower_one=True)
        u1 = 1 - b[0] + ak
        w0 = 1 - b[0] + a_s
        base_skip = transient_skip(u1, w0, *gpre_num, *gpre_den)
        tail_b = list(b[1:])
    else:
        raise ValueError(f"unknown variant {variant!r}")
    out, trunc = [], []
    for n in range(N + 1):
        # kernel asymptotics contribute one power per remaining b
        if tail_b is None:
            exps = [1 + n + a_s - ak]
        else:
            exps = [2 + n + a_s - bi for bi in tail_b]
        if variant == "v535":
            en = e + n
            # at a pole of Gamma(e+n) the sum is taken regularized: terms j <= m vanish
            m = -nearest_integer(en)[0] if is_nonpositive_integer(en) else -1
            pre = gamma_ratio(gpre_num + [1 - b[0] + a_s + n, 1 - b[1] + a_s + n],
                              gpre_den + ([en] if m < 0 else [])) / factorial(n)

            def terms(en=en, m=m):
                j = 0
                while j <= m:
                    yield 0
                    j += 1
                t = _Q(1) if m < 0 else rising_factorial(u1, m + 1) * rising_factorial(u2, m + 1) / factorial(m + 1)
                while True:
                    yield t * kern[j]
                    t = t * (u1 + j) * (u2 + j) / ((j + 1) * (en + j if m < 0 else j - m))
                    j += 1
        else:
            pre = gamma_ratio(gpre_num + [1 - ak + a_s + n], gpre_den) / factorial(n)
            wn = w0 + n
            if is_nonpositive_integer(wn):
                raise PoleError("1-b_1+a_s+n is a nonpositive integer", at=str(wn))

            def terms(wn=wn):
                t = 1 / wn
                j = 0
                while True:
                    yield t * kern[j]
                    t = t * (u1 + j) / (wn + j + 1)
                    j += 1

        res = extrapolated_sum(terms(), exps, tol, max_terms, what=f"D_{n}^[{k},{s}] {variant}",
                              weight=abs(pre), skip=base_skip)
        out.append(pre * complex(res.value))
        trunc.append(res.meta())
    return CoeffTable(kind="D", p=p, index=(k, s), values=tuple(out), method=variant,
                      mode="float", truncation=tuple(trunc))


def D_variant_for(params: ParamSet, s: int) -> str:
    """Cheapest variant whose convergence condition holds."""
    a_s = params.a[s - 1]
    if all(_re(1 - bi + a_s) > 0 for bi in params.b[1:]):
        return "v536"
    return "v535"


def sine_weight(params: ParamSet, k: int, exclude: Sequence[int]):
    """prod_i sin(pi(b_i-a_k)) / prod_{i not in exclude} sin(pi(a_i-a_k))."""
    ak = params.a[k - 1]
    num = prod((sin_pi(bi - ak) for bi in params.b), 1 + 0j)
    den = 1 + 0j
    for i, ai in enumerate(params.a, start=1):
        if i in exclude:
            continue
        sv = sin_pi(ai - ak)
        if abs(sv) < INT_TOL:
            raise DegenerateParameters(f"sin(pi(a_{i}-a_{k})) vanishes", pair=[i, k])
        den *= sv
    return num / den


def h_from_D(params: ParamSet, s: int, N: int, tol: float = DEFAULT_TOL,
             variant: Optional[str] = None) -> CoeffTable:
    """h_p^s(n) = -1/(pi sin(pi psi_p)) sum_{k != s} w_k D_n^[k,s]."""
    psi = params.psi_p
    if is_integer_like(psi):
        raise DegenerateParameters("psi_p is an integer", at="psi_p")
    variant = variant or D_variant_for(params, s)
    acc = [0j] * (N + 1)
    for k in range(1, params.p + 1):
        if k == s:
            continue
        w = sine_weight(params, k, (k, s))
        D = D_coeffs(params, k, s, N, variant, tol)
        for n in range(N + 1):
            acc[n] += w * D.values[n]
    c = -1 / (math.pi * sin_pi(psi))
    return CoeffTable(kind="h", p=params.p, index=(s,), values=tuple(c * x for x in acc),
                      method=f"from_D:{variant}", mode="float")

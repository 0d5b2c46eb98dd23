"""Nørlund coefficients g_p^k(n): four independent constructions plus closed forms.

Convention: ``k`` (1-based) selects the anchor exponent a_k.  Every method
computes the k = p case and reaches other k by exchanging a_k and a_p.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from math import comb, factorial
from typing import Callable, Optional, Sequence

from .bernoulli import gen_bernoulli_series, l_sequence
from .errors import DegenerateRecurrence, UnsupportedOrder
from .params import CoeffTable, ParamSet
from .scalar import falling_factorial, prod, rising_factorial

METHODS = ("young", "recurrence_n", "recurrence_p", "bernoulli_psi", "bernoulli_tilde")


def _table(params: ParamSet, k: int, values, method: str) -> CoeffTable:
    return CoeffTable(kind="g", p=params.p, index=(k,), values=tuple(values),
                      method=method, mode=params.mode)


def _one(params: ParamSet):
    return Fraction(1) if params.exact else 1 + 0j


# ---------------------------------------------------------------- Young sums

def _young_dp(psi: Sequence, c: Sequence, p: int, N: int, one) -> list:
    """sum over chains 0=j_0<=j_1<=...<=j_{p-1}=n of
    prod_{m=1}^{p-1} (psi_m + j_{m-1})_d (c_m)_d / d!,  d = j_m - j_{m-1}.

    ``psi[m]`` and ``c[m]`` are 1-based; returns the values for n = 0..N.
    """
    if p == 1:
        return [one] + [0 * one] * N
    v = [one] + [0 * one] * N
    for m in range(1, p):
        nv = [0 * one] * (N + 1)
        for i in range(N + 1):
            if v[i] == 0:
                continue
            w = v[i]
            x, cm = psi[m] + i, c[m]
            nv[i] = nv[i] + w
            for d in range(1, N + 1 - i):
                w = w * (x + d - 1) * (cm + d - 1) / d
                nv[i + d] = nv[i + d] + w
        v = nv
    return v


def _young_weights(params: ParamSet):
    c = [None] + [params.b[m] - params.a[m - 1] for m in range(1, params.p)]
    return params.psi, c


def g_young(params: ParamSet, k: int, N: int) -> CoeffTable:
    """Weakly increasing chain sum, aggregated over chain positions."""
    P = params.swap(k)
    psi, c = _young_weights(P)
    return _table(params, k, _young_dp(psi, c, P.p, N, _one(params)), "young")


def g_young_enumerated(params: ParamSet, k: int, n: int):
    """Same sum by explicit enumeration of every chain (slow; reference)."""
    P = params.swap(k)
    p = P.p
    if p == 1:
        return _one(params) if n == 0 else 0 * _one(params)
    psi, c = _young_weights(P)
    total = 0 * _one(params)
    for js in itertools.combinations_with_replacement(range(n + 1), p - 2):
        j = (0,) + js + (n,)
        t = _one(params)
        for m in range(1, p):
            d = j[m] - j[m - 1]
            t = t * rising_factorial(psi[m] + j[m - 1], d) * rising_factorial(c[m], d) / factorial(d)
        total = total + t
    return total


# ------------------------------------------------------ recurrence in n

def _forward_difference(f: Callable, order: int, x):
    return sum((-1) ** (order - i) * comb(order, i) * f(x + i) for i in range(order + 1))


def recurrence_polynomials(params: ParamSet, k: int = None) -> Callable[[int, object], object]:
    """P_j(z) of the order-p difference equation for anchor k (default p).

    Q omits the factor belonging to the anchor itself; see the module tests
    for the frozen convention.
    """
    p = params.p
    k = p if k is None else k
    P = params.swap(k)
    psi, ak = P.psi_p, P.a[-1]
    others = P.a[:-1]

    def Q(x):
        return prod((x - ai for ai in others), _one(params))

    def R(x):
        return prod((x + 1 - bi for bi in P.b), _one(params))

    def poly(j: int, z):
        if j == 1:
            return p - 1 + z
        if j == p:
            return -(-1) ** p * R(psi - 1 + ak + z)
        return (Fraction((-1) ** j, factorial(p - j - 1)) * _forward_difference(Q, p - j - 1, psi + ak + z)
                - Fraction((-1) ** j, factorial(p - j)) * _forward_difference(R, p - j, psi - 1 + ak + z))

    return poly


def g_recurrence_n(params: ParamSet, k: int, N: int) -> CoeffTable:
    """sum_{i=0}^{p-1} P_{p-i}(n) g(n+i) = 0 solved for the highest index.

    The initial values come from the same relation with g(negative) = 0,
    which is the triangular start-up system.
    """
    p = params.p
    one = _one(params)
    if p == 1:
        return _table(params, k, [one] + [0 * one] * N, "recurrence_n")
    poly = recurrence_polynomials(params, k)
    g = [one]
    for m in range(1, N + 1):
        lead = poly(1, m + 1 - p)
        if lead == 0:
            raise DegenerateRecurrence(f"leading coefficient vanishes at step {m}", step=m)
        s = 0 * one
        for j in range(2, min(p, m + 1) + 1):
            s = s + poly(j, m + 1 - p) * g[m + 1 - j]
        g.append(-s / lead)
    return _table(params, k, g, "recurrence_n")


# ------------------------------------------------------ recurrence in p

def _rec_p(a: tuple, b: tuple, N: int, inner: Callable[[int], int], one) -> list:
    p = len(a)
    if p == 1:
        return [one] + [0 * one] * N
    kk = inner(p)
    sub_a = list(a[:p - 1])
    sub_a[kk - 1], sub_a[-1] = sub_a[-1], sub_a[kk - 1]
    sub = _rec_p(tuple(sub_a), b[:p - 1], N, inner, one)
    psi1 = sum((bi - ai for ai, bi in zip(a[:p - 1], b[:p - 1])), 0 * one)
    c = b[p - 1] - a[kk - 1]
    out = []
    for n in range(N + 1):
        s = 0 * one
        for j in range(n + 1):
            d = n - j
            s = s + rising_factorial(c, d) * rising_factorial(psi1 + j, d) / factorial(d) * sub[j]
        out.append(s)
    return out


def g_recurrence_p(params: ParamSet, k: int, N: int, inner: Optional[Callable[[int], int]] = None
                   ) -> CoeffTable:
    """Build g for p' = 1..p by convolution; ``inner(p')`` picks the inner anchor in 1..p'-1."""
    if params.p < 1:
        raise ValueError("p >= 1 required")
    inner = (lambda q: 1) if inner is None else inner
    P = params.swap(k)
    vals = _rec_p(P.a, P.b, N, inner, _one(params))
    return _table(params, k, vals, "recurrence_p")


def recurrence_p_inner_agreement(params: ParamSet, k: int, N: int,
                                 choices: Sequence[Callable[[int], int]] = (lambda q: 1, lambda q: q - 1)
                                 ) -> bool:
    """Assertion hook: tables for two inner-anchor choices coincide."""
    tables = [g_recurrence_p(params, k, N, c).values for c in choices]
    return all(_close(t, tables[0]) for t in tables[1:])


def _close(u, v, rel=1e-11) -> bool:
    for x, y in zip(u, v):
        if isinstance(x, Fraction) and isinstance(y, Fraction):
            if x != y:
                return False
        elif abs(complex(x) - complex(y)) > rel * max(1.0, abs(complex(x))):
            return False
    return True


# ------------------------------------------------------ Bernoulli forms

def g_bernoulli(params: ParamSet, k: int, N: int, variant: str = "psi") -> CoeffTable:
    """Generalized Bernoulli representation; ``variant`` is 'psi' or 'tilde'."""
    psi = params.psi_p
    ak = params.a[k - 1]
    out = []
    if variant == "psi":
        l = l_sequence(params, N)
        for n in range(N + 1):
            B = gen_bernoulli_series(n + psi, 1 - ak, n)
            s = 0
            for r in range(n + 1):
                s = s + (-1) ** (n - r) * rising_factorial(psi + r, n - r) / factorial(n - r) * l[r] * B[n - r]
            out.append(s)
    elif variant == "tilde":
        l = l_sequence(params, N, tilde=k)
        for n in range(N + 1):
            B = gen_bernoulli_series(Fraction(n + 1), 2 - ak - psi, n)
            s = 0
            for r in range(n + 1):
                s = s + (-1) ** (n - r) * Fraction(rising_factorial(r + 1, n - r), factorial(n - r)) * l[r] * B[n - r]
            out.append(s)
    else:
        raise ValueError(f"unknown variant {variant!r}")
    if not params.exact:
        out = [complex(x) for x in out]
    return _table(params, k, out, f"bernoulli_{variant}")


# ------------------------------------------------------ connection in k

def g_connect(params: ParamSet, k: int, l: int, table_l: CoeffTable, N: int) -> CoeffTable:
    """g^k from g^l: sum_j (a_k-a_l)_{n-j}/(n-j)! (psi_p+j)_{n-j} g^l(j)."""
    if len(table_l.values) < N + 1:
        raise ValueError("table_l too short")
    if k == l:
        return _table(params, k, table_l.values[:N + 1], "connect")
    psi = params.psi_p
    delta = params.a[k - 1] - params.a[l - 1]
    gl = table_l.values
    out = []
    for n in range(N + 1):
        s = 0 * _one(params)
        for j in range(n + 1):
            d = n - j
            s = s + rising_factorial(delta, d) * rising_factorial(psi + j, d) / factorial(d) * gl[j]
        out.append(s)
    return _table(params, k, out, "connect")


# ------------------------------------------------------ closed forms

def g_closed_small_n(params: ParamSet, n: int, k: Optional[int] = None):
    """First four coefficients as nested sums over the chain positions."""
    P = params if k is None else params.swap(k)
    p = P.p
    ps = P.psi
    one = _one(params)

    def c(m):
        return P.b[m] - P.a[m - 1]

    if n == 0:
        return one
    if p == 1:
        return 0 * one
    S1 = [0 * one] * (p + 1)  # S1[k] = sum_{m<k} c_m psi_m
    for kk in range(2, p + 1):
        S1[kk] = S1[kk - 1] + c(kk - 1) * ps[kk - 1]
    if n == 1:
        return S1[p]
    r2 = [None] + [rising_factorial(c(m), 2) * rising_factorial(ps[m], 2) for m in range(1, p)]
    if n == 2:
        t1 = sum((r2[m] for m in range(1, p)), 0 * one) / 2
        t2 = sum((c(kk) * (ps[kk] + 1) * S1[kk] for kk in range(2, p)), 0 * one)
        return t1 + t2
    if n == 3:
        t1 = sum((rising_factorial(c(m), 3) * rising_factorial(ps[m], 3) for m in range(1, p)), 0 * one) / 6
        t2 = sum((c(kk) * (ps[kk] + 2) * sum((r2[m] for m in range(1, kk)), 0 * one)
                  for kk in range(2, p)), 0 * one) / 2
        t3 = sum((rising_factorial(ps[kk] + 1, 2) * rising_factorial(c(kk), 2) * S1[kk]
                  for kk in range(2, p)), 0 * one) / 2
        t4 = sum((c(nn) * (ps[nn] + 2) * sum((c(kk) * (ps[kk] + 1) * S1[kk] for kk in range(2, nn)), 0 * one)
                  for nn in range(3, p)), 0 * one)
        return t1 + t2 + t3 + t4
    raise ValueError("closed forms exist for n in {0,1,2,3}")


def terminating_pfq_one(upper: Sequence, lower: Sequence, n: int):
    """pFq(-n, upper; lower; 1) summed over its n+1 terms."""
    s = 0
    t = Fraction(1)
    for l in range(n + 1):
        s = s + t
        if l == n:
            break
        t = t * (l - n)
        for u in upper:
            t = t * (u + l)
        for w in lower:
            t = t / (w + l)
        t = t / (l + 1)
    return s


def g_closed_small_p(params: ParamSet, s: int, n: int):
    """Closed forms for p in {2,3,4}; s is the anchor index."""
    p = params.p
    a, b = params.a, params.b
    psi = params.psi_p
    a_s = a[s - 1]
    rest = params.a_without(s)
    if p == 2:
        ai = rest[0]
        return rising_factorial(b[0] - ai, n) * rising_factorial(b[1] - ai, n) / factorial(n)
    if p == 3:
        i1, i2 = rest
        c1, c2 = psi - b[1] + a_s, psi - b[2] + a_s
        return (rising_factorial(c1, n) * rising_factorial(c2, n) / factorial(n)
                * terminating_pfq_one([b[0] - i1, b[0] - i2], [c1, c2], n))
    if p == 4:
        i1, i2, i3 = rest
        c1, c2 = psi - b[2] + a_s, psi - b[3] + a_s
        d1, d2 = b[0] + b[1] - i1 - i2, b[0] + b[1] - i1 - i3
        total = 0
        for kk in range(n + 1):
            inner = terminating_pfq_one([b[0] - i1, b[1] - i1], [d1, d2], kk)
            total = total + (rising_factorial(-n, kk) * rising_factorial(d1, kk) * rising_factorial(d2, kk)
                             / (rising_factorial(c1, kk) * rising_factorial(c2, kk) * factorial(kk)) * inner)
        return rising_factorial(c1, n) * rising_factorial(c2, n) / factorial(n) * total
    raise UnsupportedOrder(f"closed form available for p in {{2,3,4}}, got p={p}", p=p)


def F_symmetric(params: ParamSet, m: int, k: int, gtable: Optional[CoeffTable] = None):
    """F_{p,m} = sum_j (-1)^j/j! [a_k]_j [psi_p+m-1]_j g^k(m-j); independent of k."""
    g = gtable.values if gtable is not None else g_young(params, k, m).values
    psi = params.psi_p
    ak = params.a[k - 1]
    s = 0 * _one(params)
    for j in range(m + 1):
        s = s + ((-1) ** j * falling_factorial(ak, j) * falling_factorial(psi + m - 1, j)
                 / factorial(j) * g[m - j])
    return s


def g_table(params: ParamSet, k: int, N: int, method: str = "young") -> CoeffTable:
    """Dispatch by method name."""
    if method == "young":
        return g_young(params, k, N)
    if method == "recurrence_n":
        return g_recurrence_n(params, k, N)
    if method == "recurrence_p":
        return g_recurrence_p(params, k, N)
    if method in ("bernoulli_psi", "bernoulli"):
        return g_bernoulli(params, k, N, "psi")
    if method == "bernoulli_tilde":
        return g_bernoulli(params, k, N, "tilde")
    raise ValueError(f"unknown method {method!r}; choose from {METHODS}")
